#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "povm_domain/povm.hpp"
#include "povm_domain/states.hpp"

namespace povm_domain {

/// A point of probability space, one entry per POVM outcome.
struct ProbabilityPoint {
  std::vector<double> values;

  ProbabilityPoint() = default;
  explicit ProbabilityPoint(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t mu) const { return values[mu]; }
  double sum() const;
  /// Entries in [−tol, 1 + tol] and summing to 1 within tol.
  bool is_normalized(double tol = kDefaultTol) const;
};

/// p_μ = tr(ρ A_μ).
ProbabilityPoint probabilities(const DensityMatrix& rho, const Povm& povm);
/// Same rule for an arbitrary Hermitian matrix (no positivity assumed).
std::vector<double> outcome_values(const ComplexMatrix& m, const Povm& povm);

/// Affine dimension of a point cloud: rank of the points minus their mean.
std::size_t subspace_dimension(std::span<const ProbabilityPoint> points, double tol = kDefaultTol);

/// Angles drawn uniformly over [0, π/2]^{d−1} × [0, 2π)^{d−1}.
PureStateAngles random_pure_angles(std::size_t dim, std::uint64_t seed);

/// Images of pure states; these are the extreme points of the image set.
std::vector<ProbabilityPoint> extreme_point_sample(const Povm& povm, std::size_t count,
                                                   std::uint64_t seed);

struct MembershipVerdict {
  bool inside = false;
  std::optional<DensityMatrix> witness;
  double min_eigenvalue = 0.0;
  /// ‖M r + c − q‖₂ for the least-squares r.
  double consistency_residual = 0.0;
  /// False when M has a nontrivial nullspace: r is then the solution closest
  /// to the maximally mixed state and other preimages exist.
  bool unique = true;
  /// Numerical rank of M used by the solve.
  std::size_t map_rank = 0;
  StateParameters parameters;
};

/// Solves M r = q − c in least squares and tests whether the reconstructed
/// matrix is a state: inside iff the residual is at most tol and the minimum
/// eigenvalue is at least −tol.
MembershipVerdict membership(const ProbabilityPoint& q, const Povm& povm, double tol = kDefaultTol);

struct TetrahedronCoordinates {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double radius_squared() const { return x * x + y * y + z * z; }
};

/// x = p₁+p₂−p₃−p₄, y = p₁−p₂+p₃−p₄, z = p₁−p₂−p₃+p₄.
TetrahedronCoordinates tetrahedron_coordinates(const ProbabilityPoint& q);

}  // namespace povm_domain
