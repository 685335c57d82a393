#include "povm_domain/domain.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "povm_domain/errors.hpp"
#include "povm_domain/rng.hpp"

namespace povm_domain {

double ProbabilityPoint::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

bool ProbabilityPoint::is_normalized(double tol) const {
  for (double v : values) {
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

std::vector<double> outcome_values(const ComplexMatrix& m, const Povm& povm) {
  if (m.order() != povm.dim()) throw DimensionMismatch("state and POVM dimensions differ");
  std::vector<double> p(povm.size());
  for (std::size_t mu = 0; mu < povm.size(); ++mu) {
    p[mu] = trace_of_product(m, povm.effect(mu)).real();
  }
  return p;
}

ProbabilityPoint probabilities(const DensityMatrix& rho, const Povm& povm) {
  return ProbabilityPoint(outcome_values(rho.matrix(), povm));
}

std::size_t subspace_dimension(std::span<const ProbabilityPoint> points, double tol) {
  if (points.size() < 2) throw TooFewPoints("need at least two points");
  const std::size_t n = points.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto& p : points) {
    if (p.size() != n) throw DimensionMismatch("points have different lengths");
    for (std::size_t mu = 0; mu < n; ++mu) mean[mu] += p[mu];
  }
  for (double& m : mean) m /= static_cast<double>(points.size());
  RealMatrix centered(points.size(), n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t mu = 0; mu < n; ++mu) centered(i, mu) = points[i][mu] - mean[mu];
  }
  return numerical_rank(centered, tol);
}

PureStateAngles random_pure_angles(std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed);
  PureStateAngles angles;
  for (std::size_t j = 0; j + 1 < dim; ++j) {
    angles.polar.push_back(rng.uniform(0.0, std::numbers::pi / 2));
    angles.phases.push_back(rng.uniform(0.0, 2 * std::numbers::pi));
  }
  return angles;
}

std::vector<ProbabilityPoint> extreme_point_sample(const Povm& povm, std::size_t count,
                                                   std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<ProbabilityPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(probabilities(pure_state(random_pure_angles(povm.dim(), rng())), povm));
  }
  return out;
}

MembershipVerdict membership(const ProbabilityPoint& q, const Povm& povm, double tol) {
  if (q.size() != povm.size()) throw DimensionMismatch("point length differs from outcome count");
  const std::size_t d = povm.dim();
  const auto map = build_affine_map(povm);

  // Solve for the offset from the maximally mixed state so that unobserved
  // directions stay at their unbiased value.
  const auto center = to_parameters(ComplexMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
  const auto center_image = map.apply(center.r);
  std::vector<double> rhs(q.size());
  for (std::size_t mu = 0; mu < q.size(); ++mu) rhs[mu] = q[mu] - center_image[mu];
  const auto ls = min_norm_least_squares(map.matrix, rhs, tol);

  MembershipVerdict verdict;
  verdict.parameters = StateParameters{d, center.r};
  for (std::size_t i = 0; i < ls.x.size(); ++i) verdict.parameters.r[i] += ls.x[i];
  verdict.consistency_residual = ls.residual_norm;
  verdict.map_rank = ls.rank;
  verdict.unique = ls.rank == parameter_count(d);

  const ComplexMatrix m = from_parameters(verdict.parameters);
  verdict.min_eigenvalue = min_eigenvalue(m, tol);
  verdict.inside = verdict.consistency_residual <= tol && verdict.min_eigenvalue >= -tol;
  if (verdict.inside) verdict.witness.emplace(m, tol);
  return verdict;
}

TetrahedronCoordinates tetrahedron_coordinates(const ProbabilityPoint& q) {
  if (q.size() != 4) throw WrongLength("tetrahedron coordinates need four probabilities");
  return {q[0] + q[1] - q[2] - q[3], q[0] - q[1] + q[2] - q[3], q[0] - q[1] - q[2] + q[3]};
}

}  // namespace povm_domain
