#pragma once

// Dense linear algebra for the small matrices that appear in qubit/qutrit
// measurement problems: complex Hermitian eigendecomposition by cyclic
// Jacobi rotations and real thin SVD by one-sided Jacobi.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace povm_domain {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

/// Square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t order);
  ComplexMatrix(std::size_t order, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t order);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t order() const { return order_; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * order_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * order_ + col];
  }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  /// (m + m†) / 2
  ComplexMatrix hermitian_part() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// max |m - m†| over entries.
  double hermiticity_residual() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t order_ = 0;
  std::vector<Complex> data_;
};

/// tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Dense real matrix, row-major storage.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols);
  static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  RealMatrix transposed() const;
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Column j is the eigenvector for eigenvalues[j].
  ComplexMatrix eigenvectors;

  std::vector<Complex> eigenvector(std::size_t j) const;
  /// Σ_j λ_j v_j v_j†
  ComplexMatrix reconstruct() const;
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when
/// max |m - m†| > tol and NoConvergence after 100 sweeps.
EigenDecomposition hermitian_eigen(const ComplexMatrix& m, double tol = kDefaultTol);

double min_eigenvalue(const ComplexMatrix& m, double tol = kDefaultTol);

/// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = kDefaultTol);

/// Thin SVD a = U diag(s) Vᵀ with k = cols singular triplets, s descending.
/// Columns of U belonging to zero singular values are zero.
struct SingularValueDecomposition {
  std::vector<double> singular_values;
  RealMatrix left;   // rows x k
  RealMatrix right;  // cols x k
};

SingularValueDecomposition real_svd(const RealMatrix& a);
std::vector<double> singular_values(const RealMatrix& a);

/// Number of singular values above tol * (largest singular value).
std::size_t numerical_rank(const RealMatrix& a, double tol = kDefaultTol);

struct LeastSquaresSolution {
  std::vector<double> x;
  std::size_t rank = 0;
  /// ‖a x - b‖₂
  double residual_norm = 0.0;
};

/// Minimum-norm least-squares solution of a x = b through the pseudo-inverse,
/// discarding singular values at or below tol * largest.
LeastSquaresSolution min_norm_least_squares(const RealMatrix& a, std::span<const double> b,
                                            double tol = kDefaultTol);

}  // namespace povm_domain
