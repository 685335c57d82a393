#include "povm_domain/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "povm_domain/errors.hpp"
#include "povm_domain/rng.hpp"
#include "povm_domain/states.hpp"

namespace povm_domain {

Povm::Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DimensionMismatch("POVM needs at least one effect");
  const std::size_t d = effects_.front().order();
  if (d == 0) throw DimensionMismatch("effects must have order >= 1");
  for (const auto& e : effects_) {
    if (e.order() != d) throw DimensionMismatch("effects have different orders");
  }
}

ValidationReport validate(const Povm& povm, double tol) {
  ValidationReport report;
  const std::size_t d = povm.dim();
  ComplexMatrix total(d);
  constexpr double kNoCheck = std::numeric_limits<double>::infinity();
  for (std::size_t mu = 0; mu < povm.size(); ++mu) {
    const auto& a = povm.effect(mu);
    EffectReport er;
    er.hermiticity_residual = a.hermiticity_residual();
    const auto eig = hermitian_eigen(a.hermitian_part(), kNoCheck);
    er.min_eigenvalue = eig.eigenvalues.front();
    er.operator_norm = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    if (er.hermiticity_residual > tol) {
      std::ostringstream os;
      os << "effect " << mu + 1 << " is not Hermitian (residual " << er.hermiticity_residual << ")";
      report.violations.push_back(os.str());
    }
    if (er.min_eigenvalue < -tol) {
      std::ostringstream os;
      os << "effect " << mu + 1 << " is not positive (min eigenvalue " << er.min_eigenvalue << ")";
      report.violations.push_back(os.str());
    }
    report.effects.push_back(er);
    total += a;
  }
  report.completeness_residual = (total - ComplexMatrix::identity(d)).max_abs();
  if (report.completeness_residual > tol) {
    std::ostringstream os;
    os << "effects do not sum to identity (residual " << report.completeness_residual << ")";
    report.violations.push_back(os.str());
  }
  report.ok = report.violations.empty();
  return report;
}

std::vector<double> AffineMap::apply(std::span<const double> r) const {
  auto p = matrix.multiply(r);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += offset[i];
  return p;
}

AffineMap build_affine_map(const Povm& povm) {
  const std::size_t d = povm.dim();
  const std::size_t off = d * (d - 1) / 2;
  AffineMap map{RealMatrix(povm.size(), parameter_count(d)), std::vector<double>(povm.size())};
  for (std::size_t mu = 0; mu < povm.size(); ++mu) {
    const auto& a = povm.effect(mu);
    const double x_dd = a(d - 1, d - 1).real();
    for (std::size_t m = 0; m + 1 < d; ++m) map.matrix(mu, m) = a(m, m).real() - x_dd;
    std::size_t k = 0;
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t n = m + 1; n < d; ++n, ++k) {
        map.matrix(mu, d - 1 + k) = 2.0 * a(m, n).real();
        map.matrix(mu, d - 1 + off + k) = 2.0 * a(m, n).imag();
      }
    }
    map.offset[mu] = x_dd;
  }
  return map;
}

std::size_t effective_dimension(const Povm& povm, double tol) {
  return numerical_rank(build_affine_map(povm).matrix, tol);
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, {0.0, Complex(0, -1), Complex(0, 1), 0.0}); }
ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

std::array<Vec3, 4> tetrahedron_vertices() {
  const double s = 1.0 / std::sqrt(3.0);
  return {{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
}

Povm tetrahedral_povm() {
  const auto x = pauli_x();
  const auto y = pauli_y();
  const auto z = pauli_z();
  std::vector<ComplexMatrix> effects;
  for (const auto& a : tetrahedron_vertices()) {
    ComplexMatrix e = ComplexMatrix::identity(2) + x * Complex(a[0]) + y * Complex(a[1]) +
                      z * Complex(a[2]);
    effects.push_back(e * Complex(0.25));
  }
  return Povm(std::move(effects));
}

Povm projective_povm(const std::vector<std::vector<Complex>>& basis, double tol) {
  const std::size_t d = basis.size();
  if (d == 0) throw NotOrthonormal("basis is empty");
  for (std::size_t i = 0; i < d; ++i) {
    if (basis[i].size() != d) throw DimensionMismatch("basis vectors must have length d");
    for (std::size_t j = 0; j < d; ++j) {
      Complex ip = 0.0;
      for (std::size_t k = 0; k < d; ++k) ip += std::conj(basis[i][k]) * basis[j][k];
      if (std::abs(ip - (i == j ? 1.0 : 0.0)) > tol) {
        throw NotOrthonormal("basis vectors are not orthonormal");
      }
    }
  }
  std::vector<ComplexMatrix> effects;
  for (const auto& b : basis) effects.push_back(ComplexMatrix::outer(b));
  return Povm(std::move(effects));
}

Povm computational_povm(std::size_t dim) {
  std::vector<std::vector<Complex>> basis(dim, std::vector<Complex>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) basis[i][i] = 1.0;
  return projective_povm(basis);
}

Povm random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes == 0) throw DimensionMismatch("POVM needs at least one outcome");
  CounterRng rng(seed);
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total(dim);
  for (std::size_t mu = 0; mu < outcomes; ++mu) {
    const auto b = random_density(dim, dim, rng()).matrix();
    total += b;
    raw.push_back(b);
  }
  // S^{-1/2} from the eigendecomposition of S.
  const auto eig = hermitian_eigen(total);
  ComplexMatrix inv_sqrt(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    inv_sqrt += ComplexMatrix::outer(eig.eigenvector(j)) * Complex(1.0 / std::sqrt(eig.eigenvalues[j]));
  }
  std::vector<ComplexMatrix> effects;
  for (const auto& b : raw) effects.push_back((inv_sqrt * b * inv_sqrt).hermitian_part());
  return Povm(std::move(effects));
}

}  // namespace povm_domain
