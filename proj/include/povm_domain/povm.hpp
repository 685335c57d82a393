#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "povm_domain/linalg.hpp"

namespace povm_domain {

/// Ordered list of effects A_μ of a common order d. Construction only
/// checks shapes; use validate() for positivity and completeness.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects);

  std::size_t dim() const { return effects_.front().order(); }
  std::size_t size() const { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const ComplexMatrix& effect(std::size_t mu) const { return effects_.at(mu); }

 private:
  std::vector<ComplexMatrix> effects_;
};

struct EffectReport {
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  /// Largest eigenvalue; an effect of unit norm makes the image a cone.
  double operator_norm = 0.0;
};

struct ValidationReport {
  bool ok = true;
  /// max |Σ_μ A_μ − 1| over entries.
  double completeness_residual = 0.0;
  std::vector<EffectReport> effects;
  std::vector<std::string> violations;
};

ValidationReport validate(const Povm& povm, double tol = kDefaultTol);

/// p = M r + c. All N rows are kept, so columns of M sum to zero and the
/// entries of c sum to one.
struct AffineMap {
  RealMatrix matrix;
  std::vector<double> offset;

  std::vector<double> apply(std::span<const double> r) const;
};

/// Row μ is (x_11 − x_dd, …, x_{d−1,d−1} − x_dd, 2x_12, …, 2y_12, …) and
/// c_μ = x_dd, with A_μ = x + iy.
AffineMap build_affine_map(const Povm& povm);

/// Numerical rank of M; the dimension of the affine hull of the image.
std::size_t effective_dimension(const Povm& povm, double tol = kDefaultTol);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

using Vec3 = std::array<double, 3>;

/// a_1 = (1,1,1)/√3, a_2 = (1,−1,−1)/√3, a_3 = (−1,1,−1)/√3, a_4 = (−1,−1,1)/√3.
std::array<Vec3, 4> tetrahedron_vertices();

/// A_μ = (1 + a_μ·σ)/4.
Povm tetrahedral_povm();

/// Rank-one projectors onto an orthonormal basis. Throws NotOrthonormal.
Povm projective_povm(const std::vector<std::vector<Complex>>& basis, double tol = kDefaultTol);
Povm computational_povm(std::size_t dim);

/// A_μ = S^{−1/2} B_μ S^{−1/2} with S = Σ B_μ and B_μ random full-rank PSD.
Povm random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed);

}  // namespace povm_domain
