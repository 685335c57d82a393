#include "povm_domain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "povm_domain/errors.hpp"

namespace povm_domain {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NonFinite("matrix has non-finite entries");
  }
}

void require_finite(std::span<const Complex> values) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NonFinite("matrix has non-finite entries");
    }
  }
}

double off_diagonal_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    for (std::size_t j = 0; j < a.order(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return s;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t order) : order_(order), data_(order * order) {}

ComplexMatrix::ComplexMatrix(std::size_t order, std::vector<Complex> entries)
    : order_(order), data_(std::move(entries)) {
  if (data_.size() != order_ * order_) {
    throw DimensionMismatch("expected " + std::to_string(order_ * order_) + " entries, got " +
                            std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t order) {
  ComplexMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(order_);
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix out(order_);
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) {
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    }
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_residual() const {
  double m = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = i; j < order_; ++j) {
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.order_ != order_) throw DimensionMismatch("matrix orders differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.order_ != order_) throw DimensionMismatch("matrix orders differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.order_ != b.order_) throw DimensionMismatch("matrix orders differ");
  const std::size_t d = a.order_;
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.order() != b.order()) throw DimensionMismatch("matrix orders differ");
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    for (std::size_t k = 0; k < a.order(); ++k) t += a(i, k) * b(k, i);
  }
  return t;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RealMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * cols);
  }
  return m;
}

RealMatrix RealMatrix::transposed() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

std::vector<double> RealMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionMismatch("vector length does not match columns");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

std::vector<Complex> EigenDecomposition::eigenvector(std::size_t j) const {
  std::vector<Complex> v(eigenvectors.order());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, j);
  return v;
}

ComplexMatrix EigenDecomposition::reconstruct() const {
  ComplexMatrix out(eigenvectors.order());
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    const auto v = eigenvector(j);
    out += ComplexMatrix::outer(v) * Complex(eigenvalues[j]);
  }
  return out;
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& m, double tol) {
  require_finite(m.entries());
  const double herm = m.hermiticity_residual();
  if (herm > tol) {
    throw NotHermitian("matrix is not Hermitian (max |m - m†| = " + std::to_string(herm) + ")");
  }
  const std::size_t d = m.order();
  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double scale = a.frobenius_norm();
  const double target = (0.5 * kEps * scale) * (0.5 * kEps * scale);

  bool converged = d <= 1 || off_diagonal_norm_sq(a) <= target;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double b = std::abs(a(p, q));
        if (b == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Entry already negligible next to both diagonals: drop it.
        if (sweep > 3 && std::abs(app) + 100.0 * b == std::abs(app) &&
            std::abs(aqq) + 100.0 * b == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = a(p, q) / b;
        const double theta = (aqq - app) / (2.0 * b);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < d; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    converged = off_diagonal_norm_sq(a) <= target;
  }
  if (!converged) throw NoConvergence("Jacobi eigensolver exceeded 100 sweeps");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(d), ComplexMatrix(d)};
  for (std::size_t j = 0; j < d; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& m, double tol) {
  const auto eig = hermitian_eigen(m, tol);
  return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
}

bool is_psd(const ComplexMatrix& m, double tol) { return min_eigenvalue(m, tol) >= -tol; }

SingularValueDecomposition real_svd(const RealMatrix& a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  {
    std::vector<double> flat;
    flat.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = a.row(r);
      flat.insert(flat.end(), row.begin(), row.end());
    }
    require_finite(flat);
  }

  // Column-major working copies make the column rotations contiguous.
  std::vector<std::vector<double>> w(cols, std::vector<double>(rows));
  std::vector<std::vector<double>> v(cols, std::vector<double>(cols, 0.0));
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) w[c][r] = a(r, c);
    v[c][c] = 1.0;
  }
  auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  auto rotate = [](std::vector<double>& x, std::vector<double>& y, double c, double s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      const double yi = y[i];
      x[i] = c * xi - s * yi;
      y[i] = s * xi + c * yi;
    }
  };

  double total = 0.0;
  for (const auto& col : w) total += dot(col, col);
  // Columns this small are rounding noise left over from rank deficiency.
  const double negligible = kEps * kEps * total;

  bool converged = cols <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = dot(w[p], w[p]);
        const double beta = dot(w[q], w[q]);
        const double gamma = dot(w[p], w[q]);
        if (alpha <= negligible || beta <= negligible) continue;
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t;
        if (std::abs(zeta) > 1e150) {
          t = 0.5 / zeta;
        } else {
          t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(w[p], w[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
    converged = !rotated;
  }
  if (!converged) throw NoConvergence("one-sided Jacobi SVD exceeded 100 sweeps");

  std::vector<double> sigma(cols);
  for (std::size_t c = 0; c < cols; ++c) sigma[c] = std::sqrt(dot(w[c], w[c]));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SingularValueDecomposition out{std::vector<double>(cols), RealMatrix(rows, cols),
                                 RealMatrix(cols, cols)};
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t src = order[k];
    out.singular_values[k] = sigma[src];
    for (std::size_t r = 0; r < rows; ++r) {
      out.left(r, k) = sigma[src] > 0.0 ? w[src][r] / sigma[src] : 0.0;
    }
    for (std::size_t r = 0; r < cols; ++r) out.right(r, k) = v[src][r];
  }
  return out;
}

std::vector<double> singular_values(const RealMatrix& a) { return real_svd(a).singular_values; }

std::size_t numerical_rank(const RealMatrix& a, double tol) {
  // Work on the orientation with fewer columns; singular values are shared.
  const auto sv = singular_values(a.cols() > a.rows() ? a.transposed() : a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cutoff = tol * sv.front();
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; }));
}

LeastSquaresSolution min_norm_least_squares(const RealMatrix& a, std::span<const double> b,
                                            double tol) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length does not match rows");
  const auto svd = real_svd(a);
  LeastSquaresSolution out;
  out.x.assign(a.cols(), 0.0);
  const double largest = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
    const double s = svd.singular_values[k];
    if (largest == 0.0 || s <= tol * largest) continue;
    ++out.rank;
    double ub = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) ub += svd.left(r, k) * b[r];
    const double coef = ub / s;
    for (std::size_t c = 0; c < a.cols(); ++c) out.x[c] += coef * svd.right(c, k);
  }
  const auto fitted = a.multiply(out.x);
  double res = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) res += (fitted[r] - b[r]) * (fitted[r] - b[r]);
  out.residual_norm = std::sqrt(res);
  return out;
}

}  // namespace povm_domain
