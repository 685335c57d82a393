#include "povm_domain/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "povm_domain/errors.hpp"
#include "povm_domain/rng.hpp"

namespace povm_domain {

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.order() == 0) throw InvalidState("density matrix must have order >= 1");
  if (m_.hermiticity_residual() > tol) throw InvalidState("density matrix is not Hermitian");
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidState("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const double lambda_min = min_eigenvalue(m_, tol);
  if (lambda_min < -tol) {
    throw InvalidState("density matrix has negative eigenvalue " + std::to_string(lambda_min));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

DensityMatrix mixture(double x, const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("mixture of states of different dimension");
  return DensityMatrix(a.matrix() * Complex(x) + b.matrix() * Complex(1.0 - x));
}

StateParameters to_parameters(const ComplexMatrix& m) {
  const std::size_t d = m.order();
  StateParameters out{d, {}};
  out.r.reserve(parameter_count(d));
  for (std::size_t i = 0; i + 1 < d; ++i) out.r.push_back(m(i, i).real());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) out.r.push_back(m(i, j).real());
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) out.r.push_back(m(i, j).imag());
  }
  return out;
}

StateParameters to_parameters(const DensityMatrix& rho) { return to_parameters(rho.matrix()); }

ComplexMatrix from_parameters(const StateParameters& params) {
  const std::size_t d = params.dim;
  if (d == 0 || params.r.size() != parameter_count(d)) {
    throw WrongLength("parameter vector must have d^2 - 1 entries");
  }
  const std::size_t off = d * (d - 1) / 2;
  ComplexMatrix m(d);
  double last = 1.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    m(i, i) = params.r[i];
    last -= params.r[i];
  }
  m(d - 1, d - 1) = last;
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j, ++k) {
      const Complex z(params.r[d - 1 + k], params.r[d - 1 + off + k]);
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

std::vector<Complex> pure_state_vector(const PureStateAngles& angles) {
  const std::size_t d = angles.dim();
  if (angles.phases.size() != angles.polar.size()) {
    throw AngleOutOfRange("need as many phases as polar angles");
  }
  constexpr double kSlack = 1e-12;
  for (double t : angles.polar) {
    if (!(t >= -kSlack && t <= std::numbers::pi / 2 + kSlack)) {
      throw AngleOutOfRange("polar angle outside [0, pi/2]");
    }
  }
  for (double a : angles.phases) {
    if (!(a >= -kSlack && a < 2 * std::numbers::pi + kSlack)) {
      throw AngleOutOfRange("phase outside [0, 2pi)");
    }
  }

  std::vector<double> modulus(d, 0.0);
  if (d == 1) {
    modulus[0] = 1.0;
  } else {
    modulus[d - 1] = std::cos(angles.polar[0]);
    double remaining = std::sin(angles.polar[0]);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const std::size_t angle = j + 1;
      if (angle < d - 1) {
        modulus[j] = remaining * std::cos(angles.polar[angle]);
        remaining *= std::sin(angles.polar[angle]);
      } else {
        modulus[j] = remaining;
      }
    }
  }
  std::vector<Complex> v(d);
  for (std::size_t j = 0; j < d; ++j) {
    v[j] = j + 1 < d ? std::polar(modulus[j], angles.phases[j]) : Complex(modulus[j]);
  }
  return v;
}

DensityMatrix pure_state(const PureStateAngles& angles) {
  return DensityMatrix(ComplexMatrix::outer(pure_state_vector(angles)));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix bloch_state(const BlochVector& n) {
  if (n.norm() > 1.0 + 1e-10) throw OutsideBlochBall("Bloch vector longer than 1");
  ComplexMatrix m(2);
  m(0, 0) = 0.5 * (1.0 + n.z);
  m(1, 1) = 0.5 * (1.0 - n.z);
  m(0, 1) = Complex(0.5 * n.x, -0.5 * n.y);
  m(1, 0) = Complex(0.5 * n.x, 0.5 * n.y);
  return DensityMatrix(std::move(m));
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("Bloch vector needs a qubit state");
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

std::vector<SpectralTerm> spectral_decompose(const DensityMatrix& rho, double tol) {
  const auto eig = hermitian_eigen(rho.matrix(), tol);
  std::vector<SpectralTerm> terms;
  double total = 0.0;
  for (std::size_t j = eig.eigenvalues.size(); j-- > 0;) {
    const double w = eig.eigenvalues[j];
    if (w <= tol) continue;
    const auto v = eig.eigenvector(j);
    // Outer product of a unit vector: Hermitian and PSD up to rounding.
    ComplexMatrix proj = ComplexMatrix::outer(v).hermitian_part();
    proj *= Complex(1.0 / proj.trace().real());
    terms.push_back({w, DensityMatrix(std::move(proj))});
    total += w;
  }
  for (auto& term : terms) term.weight /= total;
  return terms;
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (dim == 0) throw BadRank("dimension must be positive");
  if (rank < 1 || rank > dim) throw BadRank("rank must lie in [1, d]");
  CounterRng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> g(dim * rank);
  for (auto& z : g) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = Complex(re, im);
  }
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += g[i * rank + k] * std::conj(g[j * rank + k]);
      m(i, j) = s;
    }
  }
  m = m.hermitian_part();
  m *= Complex(1.0 / m.trace().real());
  return DensityMatrix(std::move(m));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const auto eig = hermitian_eigen((a.matrix() - b.matrix()).hermitian_part());
  double s = 0.0;
  for (double l : eig.eigenvalues) s += std::abs(l);
  return 0.5 * s;
}

}  // namespace povm_domain
