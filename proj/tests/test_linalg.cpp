#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "test_support.hpp"

using namespace povm_domain;
using testing_support::random_hermitian;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.order(), m.order());
  for (std::size_t i = 0; i < m.order(); ++i) {
    for (std::size_t j = 0; j < m.order(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

RealMatrix random_real(std::size_t rows, std::size_t cols, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = g(gen);
  }
  return m;
}

}  // namespace

TEST_CASE("hermitian_eigen: identity and diagonal") {
  auto id = hermitian_eigen(ComplexMatrix::identity(3));
  for (double l : id.eigenvalues) CHECK(l == doctest::Approx(1.0));

  const std::vector<double> diag{0.0, 1.0};
  auto e = hermitian_eigen(ComplexMatrix::diagonal(diag));
  CHECK(e.eigenvalues[0] == 0.0);
  CHECK(e.eigenvalues[1] == 1.0);
  CHECK(std::abs(e.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eigen: random matrices reconstruct and match Eigen") {
  std::mt19937_64 gen(7);
  for (std::size_t d : {1u, 2u, 3u, 4u, 6u, 8u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = random_hermitian(d, gen);
      const auto eig = hermitian_eigen(m);
      CHECK(frobenius_distance(eig.reconstruct(), m) <= 1e-12 * std::max(1.0, m.frobenius_norm()));

      // Gram matrix of eigenvectors is the identity.
      const auto& v = eig.eigenvectors;
      CHECK(frobenius_distance(v.adjoint() * v, ComplexMatrix::identity(d)) <= 1e-12);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(m));
      for (std::size_t j = 0; j < d; ++j) {
        CHECK(std::abs(eig.eigenvalues[j] - oracle.eigenvalues()(j)) <= 1e-12);
      }

      double sum = 0.0;
      for (double l : eig.eigenvalues) sum += l;
      CHECK(std::abs(sum - m.trace().real()) <= 1e-10);

      const auto again = hermitian_eigen(eig.reconstruct(), 1e-9);
      for (std::size_t j = 0; j < d; ++j) {
        CHECK(std::abs(again.eigenvalues[j] - eig.eigenvalues[j]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("hermitian_eigen: degenerate and tiny off-diagonal inputs") {
  ComplexMatrix m = ComplexMatrix::identity(4);
  m(0, 3) = Complex(1e-200, 1e-200);
  m(3, 0) = std::conj(m(0, 3));
  auto eig = hermitian_eigen(m);
  for (double l : eig.eigenvalues) CHECK(l == doctest::Approx(1.0));

  ComplexMatrix z(3);
  eig = hermitian_eigen(z);
  for (double l : eig.eigenvalues) CHECK(l == 0.0);
}

TEST_CASE("hermitian_eigen: errors") {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigen(m), NotHermitian);
  ComplexMatrix bad = ComplexMatrix::identity(2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hermitian_eigen(bad), NonFinite);
}

TEST_CASE("is_psd examples") {
  CHECK(is_psd(ComplexMatrix::identity(2) * Complex(0.5)));
  const std::vector<double> diag{1.1, -0.1};
  CHECK_FALSE(is_psd(ComplexMatrix::diagonal(diag)));

  // Bloch matrix with |n| = 1.2 along z: λ_min = (1 − 1.2)/2.
  ComplexMatrix b(2);
  b(0, 0) = 0.5 * (1 + 1.2);
  b(1, 1) = 0.5 * (1 - 1.2);
  CHECK_FALSE(is_psd(b));
  CHECK(min_eigenvalue(b) == doctest::Approx(-0.1).epsilon(1e-12));

  // Same |n| along a generic direction.
  const double nx = 1.2 * 0.6, ny = 1.2 * 0.0, nz = 1.2 * 0.8;
  ComplexMatrix c(2);
  c(0, 0) = 0.5 * (1 + nz);
  c(1, 1) = 0.5 * (1 - nz);
  c(0, 1) = Complex(0.5 * nx, -0.5 * ny);
  c(1, 0) = std::conj(c(0, 1));
  CHECK(min_eigenvalue(c) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK_THROWS_AS(is_psd(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0})), NotHermitian);
}

TEST_CASE("numerical_rank examples") {
  CHECK(numerical_rank(RealMatrix(4, 3)) == 0);

  const auto sz = RealMatrix::from_rows({{1, 0, 0}, {-1, 0, 0}});
  CHECK(numerical_rank(sz) == 1);
  CHECK(testing_support::row_reduction_rank({{1, 0, 0}, {-1, 0, 0}}) == 1);

  RealMatrix bad(2, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(numerical_rank(bad), NonFinite);
}

TEST_CASE("singular values match Eigen and rank properties hold") {
  std::mt19937_64 gen(11);
  for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {4, 3}, {3, 4}, {9, 8}, {200, 3}, {12, 12}}) {
    const auto a = random_real(rows, cols, gen);
    const auto svd = real_svd(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(to_eigen(a));
    const std::size_t k = std::min(rows, cols);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(std::abs(svd.singular_values[j] - oracle.singularValues()(j)) <=
            1e-12 * oracle.singularValues()(0));
    }
    // a = U Σ Vᵀ
    double err = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
          s += svd.left(r, j) * svd.singular_values[j] * svd.right(c, j);
        }
        err = std::max(err, std::abs(s - a(r, c)));
      }
    }
    CHECK(err <= 1e-12);

    const auto rank = numerical_rank(a);
    CHECK(rank <= k);
    CHECK(rank == k);

    // Duplicated rows leave the rank unchanged.
    std::vector<std::vector<double>> doubled;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(a.row(r).begin(), a.row(r).end());
      doubled.push_back(row);
      doubled.push_back(row);
    }
    CHECK(numerical_rank(RealMatrix::from_rows(doubled)) == rank);
  }
}

TEST_CASE("numerical_rank detects low rank products to tight tolerance") {
  std::mt19937_64 gen(5);
  // 200x4 of rank 3: nullspace singular value must sit far below 1e-9.
  const auto left = random_real(200, 3, gen);
  const auto right = random_real(3, 4, gen);
  RealMatrix a(200, 4);
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t k = 0; k < 3; ++k) a(r, c) += left(r, k) * right(k, c);
    }
  }
  const auto sv = singular_values(a);
  CHECK(sv[3] < 1e-13 * sv[0]);
  CHECK(numerical_rank(a, 1e-10) == 3);
}

TEST_CASE("min_norm_least_squares") {
  // Consistent overdetermined system.
  const auto a = RealMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
  const std::vector<double> b{1, 2, 3};
  auto sol = min_norm_least_squares(a, b);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(2.0));
  CHECK(sol.residual_norm <= 1e-14);
  CHECK(sol.rank == 2);

  // Rank-deficient: minimum-norm solution of x + y = 2 is (1, 1).
  const auto w = RealMatrix::from_rows({{1, 1}});
  const std::vector<double> b2{2};
  sol = min_norm_least_squares(w, b2);
  CHECK(sol.rank == 1);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));

  // Inconsistent: residual is the distance to the column space.
  const auto col = RealMatrix::from_rows({{1}, {1}});
  const std::vector<double> b3{0, 2};
  sol = min_norm_least_squares(col, b3);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.residual_norm == doctest::Approx(std::sqrt(2.0)));
}
