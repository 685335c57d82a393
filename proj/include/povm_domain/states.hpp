#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "povm_domain/linalg.hpp"

namespace povm_domain {

/// Hermitian, unit-trace, positive-semidefinite matrix. Construction
/// validates all three properties within the given tolerance.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);

  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return m_.order(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

 private:
  ComplexMatrix m_;
};

/// x·a + (1 − x)·b for x in [0, 1].
DensityMatrix mixture(double x, const DensityMatrix& a, const DensityMatrix& b);

inline std::size_t parameter_count(std::size_t dim) { return dim * dim - 1; }

/// The d²−1 real coordinates of a unit-trace Hermitian matrix, ordered as
/// (ξ_11 … ξ_{d−1,d−1}, ξ_12 … ξ_{d−1,d}, η_12 … η_{d−1,d}), where
/// ρ_mn = ξ_mn + iη_mn and off-diagonal pairs m < n run row-major.
struct StateParameters {
  std::size_t dim = 0;
  std::vector<double> r;
};

StateParameters to_parameters(const DensityMatrix& rho);
/// Same coordinates for any Hermitian matrix; ξ_dd is discarded.
StateParameters to_parameters(const ComplexMatrix& m);

/// Rebuilds the Hermitian matrix with ξ_dd = 1 − Σ ξ_nn. The result has unit
/// trace but may have negative eigenvalues.
ComplexMatrix from_parameters(const StateParameters& params);

/// Pure state with d−1 polar angles in [0, π/2] and d−1 phases in [0, 2π).
/// Moduli: v_d = cos θ₁; the first d−1 components carry sin θ₁ times
/// hyperspherical coordinates in θ₂…θ_{d−1} (v_1 gets cos θ₂, v_2 gets
/// sin θ₂ cos θ₃, …). Component j < d carries phase e^{iα_j}; v_d is real.
/// For d = 3 this is (sinθ cosφ e^{iα}, sinθ sinφ e^{iβ}, cosθ).
struct PureStateAngles {
  std::vector<double> polar;
  std::vector<double> phases;

  std::size_t dim() const { return polar.size() + 1; }
};

std::vector<Complex> pure_state_vector(const PureStateAngles& angles);
DensityMatrix pure_state(const PureStateAngles& angles);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// (1 + n·σ)/2, with σ_y = [[0, −i], [i, 0]].
DensityMatrix bloch_state(const BlochVector& n);
BlochVector bloch_vector(const DensityMatrix& rho);

struct SpectralTerm {
  double weight;
  DensityMatrix state;
};

/// Eigen-expansion ρ = Σ w_j |v_j><v_j| with weights descending. Weights at
/// or below tol are dropped and the rest renormalized.
std::vector<SpectralTerm> spectral_decompose(const DensityMatrix& rho, double tol = kDefaultTol);

/// G G† / tr(G G†) for a d×rank matrix G of standard complex Gaussians.
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace povm_domain
