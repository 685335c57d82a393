#include <doctest.h>

#include <array>
#include <numbers>
#include <random>

#include "test_support.hpp"

using namespace povm_domain;
using testing_support::grid_min_bloch_norm_sq;

namespace {

CountRecord record(std::vector<std::uint64_t> c) { return CountRecord(std::move(c)); }

// Brute-force nearest qubit state in Frobenius norm over a Bloch-ball grid.
double brute_force_qubit_distance(const ComplexMatrix& m) {
  double best = std::numeric_limits<double>::infinity();
  const int steps = 60;
  for (int ir = 0; ir <= steps; ++ir) {
    const double r = double(ir) / steps;
    for (int it = 0; it <= steps; ++it) {
      const double t = std::numbers::pi * it / steps;
      for (int ip = 0; ip < 2 * steps; ++ip) {
        const double f = std::numbers::pi * ip / steps;
        const auto rho = bloch_state({r * std::sin(t) * std::cos(f), r * std::sin(t) * std::sin(f),
                                      r * std::cos(t)});
        best = std::min(best, frobenius_distance(rho.matrix(), m));
      }
    }
  }
  return best;
}

// Clip negative eigenvalues to zero and rescale the rest to unit trace.
ComplexMatrix clip_and_renormalize(const ComplexMatrix& m) {
  const auto eig = hermitian_eigen(m);
  double total = 0.0;
  for (double l : eig.eigenvalues) total += std::max(l, 0.0);
  ComplexMatrix out(m.order());
  for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j) {
    out += ComplexMatrix::outer(eig.eigenvector(j)) * Complex(std::max(eig.eigenvalues[j], 0.0) / total);
  }
  return out;
}

// min over the Bloch ball of max_μ |p_μ(n) − q_μ| / w_μ, for qubit POVMs.
// A coarse spherical grid followed by random sampling in a shrinking cube.
double grid_box_distance(const Povm& povm, const std::vector<double>& q,
                         const std::vector<double>& w) {
  const auto value = [&](double x, double y, double z) {
    if (x * x + y * y + z * z > 1.0) return std::numeric_limits<double>::infinity();
    const auto p = probabilities(bloch_state({x, y, z}), povm);
    double worst = 0.0;
    for (std::size_t mu = 0; mu < q.size(); ++mu) worst = std::max(worst, std::abs(p[mu] - q[mu]) / w[mu]);
    return worst;
  };
  double best = std::numeric_limits<double>::infinity();
  std::array<double, 3> at{0, 0, 0};
  const int steps = 30;
  for (int ir = 0; ir <= steps; ++ir) {
    const double r = double(ir) / steps;
    for (int it = 0; it <= steps; ++it) {
      const double t = std::numbers::pi * it / steps;
      for (int ip = 0; ip < 2 * steps; ++ip) {
        const double f = std::numbers::pi * ip / steps;
        const std::array<double, 3> n{r * std::sin(t) * std::cos(f), r * std::sin(t) * std::sin(f),
                                      r * std::cos(t)};
        const double v = value(n[0], n[1], n[2]);
        if (v < best) best = v, at = n;
      }
    }
  }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double h = 0.1;
  for (int round = 0; round < 80; ++round, h *= 0.85) {
    const auto centre = at;
    for (int i = 0; i < 600; ++i) {
      const std::array<double, 3> n{centre[0] + h * unit(gen), centre[1] + h * unit(gen),
                                    centre[2] + h * unit(gen)};
      const double v = value(n[0], n[1], n[2]);
      if (v < best) best = v, at = n;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("CountRecord") {
  const auto rec = record({3, 1, 0});
  CHECK(rec.shots() == 4);
  CHECK(rec.frequencies().values == std::vector<double>{0.75, 0.25, 0.0});
  CHECK_THROWS_AS(record({0, 0}), InvalidCounts);
  CHECK_THROWS_AS(record({}), InvalidCounts);
  CHECK_THROWS_AS(CountRecord(5, {1, 2}), InvalidCounts);
}

TEST_CASE("simulate_counts examples") {
  const std::vector<double> up{1, 0};
  const DensityMatrix zero(ComplexMatrix::diagonal(up));
  for (std::uint64_t n : {1u, 7u, 1000u}) {
    const auto rec = simulate_counts(zero, computational_povm(2), n, n);
    CHECK(rec.counts() == std::vector<std::uint64_t>{n, 0});
  }

  const auto tetra = tetrahedral_povm();
  const auto mixed = DensityMatrix::maximally_mixed(2);
  const auto big = simulate_counts(mixed, tetra, 1000000, 17);
  const auto q = big.frequencies();
  const double dq = std::sqrt(0.25 * 0.75 / 1e6);
  for (double v : q.values) CHECK(std::abs(v - 0.25) <= 5 * dq);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto one = simulate_counts(mixed, tetra, 1, seed);
    int ones = 0;
    for (auto c : one.counts()) ones += c == 1;
    CHECK(ones == 1);
    CHECK(one.shots() == 1);
  }

  CHECK(simulate_counts(mixed, tetra, 500, 3).counts() == simulate_counts(mixed, tetra, 500, 3).counts());
  CHECK_THROWS_AS(simulate_counts(DensityMatrix::maximally_mixed(3), tetra, 10, 0), DimensionMismatch);
  CHECK_THROWS_AS(simulate_counts(mixed, tetra, 0, 0), InvalidCounts);
}

TEST_CASE("simulate_counts statistics follow the binomial dispersion") {
  const auto tetra = tetrahedral_povm();
  const auto rho = bloch_state({0.3, -0.2, 0.5});
  const auto p = probabilities(rho, tetra);

  // Mean of frequencies over 1000 runs of n = 1000.
  {
    const std::uint64_t n = 1000;
    std::vector<double> mean(4, 0.0);
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto q = simulate_counts(rho, tetra, n, s).frequencies();
      for (std::size_t mu = 0; mu < 4; ++mu) mean[mu] += q[mu] / 1000.0;
    }
    const auto dn = binomial_dispersion(p.values, n);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      CHECK(std::abs(mean[mu] - p[mu]) <= 5 * (dn[mu] / n) / std::sqrt(1000.0));
    }
  }

  // Standard deviation of n_μ at n = 10⁴.
  {
    const std::uint64_t n = 10000;
    std::vector<double> sum(4, 0.0), sq(4, 0.0);
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto rec = simulate_counts(rho, tetra, n, 10000 + s);
      for (std::size_t mu = 0; mu < 4; ++mu) {
        const double c = static_cast<double>(rec.counts()[mu]);
        sum[mu] += c;
        sq[mu] += c * c;
      }
    }
    const auto dn = binomial_dispersion(p.values, n);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      REQUIRE((p[mu] >= 0.1 && p[mu] <= 0.9));
      const double mean = sum[mu] / 1000.0;
      const double sd = std::sqrt((sq[mu] - 1000.0 * mean * mean) / 999.0);
      CHECK(std::abs(sd / dn[mu] - 1.0) <= 0.10);
    }
  }
}

TEST_CASE("dispersion examples") {
  const auto d = dispersion(record({25, 50, 0, 25}));
  CHECK(d[0] == doctest::Approx(std::sqrt(18.75)));
  CHECK(d[0] == doctest::Approx(4.3301).epsilon(1e-4));
  CHECK(d[1] == doctest::Approx(5.0));
  CHECK(d[2] == 0.0);
  CHECK(dispersion(record({0, 10}))[1] == 0.0);

  const auto box = error_box(record({25, 50, 0, 25}), 2.0);
  CHECK(box.halfwidths[0] == doctest::Approx(2 * std::sqrt(18.75) / 100));
  CHECK(box.contains(ProbabilityPoint({0.25 + 0.08, 0.5, 0.0, 0.25 - 0.08})));
  CHECK_FALSE(box.contains(ProbabilityPoint({0.25, 0.5, 0.01, 0.24})));
}

TEST_CASE("linear_inversion examples") {
  const auto tetra = tetrahedral_povm();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_density(2, 1 + s % 2, s);
    const auto inv = linear_inversion(probabilities(rho, tetra), tetra);
    CHECK(testing_support::max_entry_diff(inv.matrix, rho.matrix()) <= 1e-10);
    CHECK(inv.effective_dimension == 3);
  }

  auto inv = linear_inversion(ProbabilityPoint({0.25, 0.25, 0.25, 0.25}), tetra);
  CHECK(testing_support::max_entry_diff(inv.matrix, ComplexMatrix::identity(2) * Complex(0.5)) <= 1e-15);

  inv = linear_inversion(ProbabilityPoint({0.7, 0.1, 0.1, 0.1}), tetra);
  CHECK(inv.min_eigenvalue == doctest::Approx(-0.4).epsilon(1e-12));
  const auto eig = hermitian_eigen(inv.matrix);
  CHECK(eig.eigenvalues[1] - eig.eigenvalues[0] == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(inv.consistency_residual <= 1e-14);

  // Informationally complete random POVMs invert exactly.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t d = 2 + s % 3;
    const auto povm = random_povm(d, d * d + s % 4, s);
    REQUIRE(effective_dimension(povm) == parameter_count(d));
    const auto rho = random_density(d, d, s + 40);
    const auto back = linear_inversion(probabilities(rho, povm), povm);
    CHECK(testing_support::max_entry_diff(back.matrix, rho.matrix()) <= 1e-10);
  }
}

TEST_CASE("project_to_physical examples") {
  const auto rho = random_density(3, 2, 4);
  CHECK(testing_support::max_entry_diff(project_to_physical(rho.matrix()).matrix(), rho.matrix()) <= 1e-15);

  const std::vector<double> d2{1.2, -0.2};
  auto out = project_to_physical(ComplexMatrix::diagonal(d2));
  CHECK(out(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(out(1, 1)) <= 1e-15);
  // Brute-force search over the diagonal segment diag(t, 1 − t).
  double best_t = 0.0, best = 1e9;
  for (int i = 0; i <= 100000; ++i) {
    const double t = i / 100000.0;
    const double dist = (t - 1.2) * (t - 1.2) + (1 - t + 0.2) * (1 - t + 0.2);
    if (dist < best) best = dist, best_t = t;
  }
  CHECK(best_t == doctest::Approx(1.0));

  const std::vector<double> d3{0.9, 0.4, -0.3};
  out = project_to_physical(ComplexMatrix::diagonal(d3));
  CHECK(out(0, 0).real() == doctest::Approx(0.75));
  CHECK(out(1, 1).real() == doctest::Approx(0.25));
  CHECK(std::abs(out(2, 2)) <= 1e-15);

  // Several negative eigenvalues need more than one clipping round.
  const std::vector<double> d4{0.8, 0.5, -0.1, -0.2};
  out = project_to_physical(ComplexMatrix::diagonal(d4));
  CHECK(out(0, 0).real() == doctest::Approx(0.65));
  CHECK(out(1, 1).real() == doctest::Approx(0.35));

  CHECK_THROWS_AS(project_to_physical(ComplexMatrix(2, {0.5, 1.0, 0.0, 0.5})), NotHermitian);
}

TEST_CASE("project_to_physical is optimal and idempotent") {
  std::mt19937_64 gen(44);
  for (int i = 0; i < 12; ++i) {
    auto h = testing_support::random_hermitian(2, gen);
    const double tr = h.trace().real();
    h -= ComplexMatrix::identity(2) * Complex((tr - 1.0) / 2.0);
    const auto proj = project_to_physical(h);
    CHECK(is_psd(proj.matrix()));
    CHECK(std::abs(proj.matrix().trace() - 1.0) <= 1e-12);
    CHECK(testing_support::max_entry_diff(project_to_physical(proj.matrix()).matrix(), proj.matrix()) <= 1e-15);
    const double ours = frobenius_distance(proj.matrix(), h);
    CHECK(ours <= brute_force_qubit_distance(h) + 1e-12);
    if (!is_psd(h) && hermitian_eigen(h).eigenvalues.back() > 0) {
      CHECK(ours <= frobenius_distance(clip_and_renormalize(h), h) + 1e-12);
    }
  }
  for (std::size_t d : {3u, 4u}) {
    for (int i = 0; i < 20; ++i) {
      auto h = testing_support::random_hermitian(d, gen);
      const double tr = h.trace().real();
      h -= ComplexMatrix::identity(d) * Complex((tr - 1.0) / double(d));
      const auto proj = project_to_physical(h);
      CHECK(is_psd(proj.matrix()));
      CHECK(std::abs(proj.matrix().trace() - 1.0) <= 1e-12);
      if (hermitian_eigen(h).eigenvalues.back() > 0) {
        CHECK(frobenius_distance(proj.matrix(), h) <=
              frobenius_distance(clip_and_renormalize(h), h) + 1e-12);
      }
      // No random state is closer.
      const double ours = frobenius_distance(proj.matrix(), h);
      for (std::uint64_t s = 0; s < 50; ++s) {
        CHECK(ours <= frobenius_distance(random_density(d, 1 + s % d, s).matrix(), h) + 1e-12);
      }
    }
  }
}

TEST_CASE("classify: feasible frequencies") {
  const auto tetra = tetrahedral_povm();
  for (std::uint64_t n : {4u, 400u, 40000u}) {
    const auto v = classify(record({n / 4, n / 4, n / 4, n / 4}), tetra);
    CHECK(v.kind == Feasibility::feasible);
    REQUIRE(v.estimate);
    CHECK(testing_support::max_entry_diff(v.estimate->matrix(),
                                          DensityMatrix::maximally_mixed(2).matrix()) <= 1e-14);
    CHECK(v.required_scale == 0.0);
  }
}

TEST_CASE("classify: insufficient data") {
  const auto tetra = tetrahedral_povm();
  const auto rec = record({70, 10, 10, 10});
  const auto v = classify(rec, tetra, 1.0);
  CHECK(v.kind == Feasibility::insufficient);
  CHECK_FALSE(v.estimate);
  CHECK(v.evaluations <= 10000);

  // Grid oracle: the closest reachable Bloch vector in the box has |n| ≈ 1.617.
  const auto box = error_box(rec, 1.0);
  const double min_sq = grid_min_bloch_norm_sq(box.center.values, box.halfwidths, 161);
  CHECK(min_sq > 1.0);
  CHECK(std::sqrt(min_sq) == doctest::Approx(1.6167).epsilon(2e-3));

  // Smallest box scale reaching the domain (SLSQP oracle: 4.3643574).
  CHECK(v.required_scale == doctest::Approx(4.3643574).epsilon(1e-5));
  CHECK(classify(rec, tetra, 4.3).kind == Feasibility::insufficient);
  CHECK(classify(rec, tetra, 4.4).kind == Feasibility::marginal);
}

TEST_CASE("classify: marginal data") {
  const auto tetra = tetrahedral_povm();
  // |n| ≈ 1.0566 along z.
  const auto rec = record({161, 39, 39, 161});
  const auto box = error_box(rec, 2.0);
  CHECK(12 * ((0.4025 - 0.25) * (0.4025 - 0.25) * 2 + (0.0975 - 0.25) * (0.0975 - 0.25) * 2) > 1.0);
  CHECK(grid_min_bloch_norm_sq(box.center.values, box.halfwidths) < 1.0);

  const auto v = classify(rec, tetra, 2.0);
  CHECK(v.kind == Feasibility::marginal);
  REQUIRE(v.estimate);
  REQUIRE(v.boundary_point);
  CHECK(box.contains(*v.boundary_point));
  const auto m = membership(*v.boundary_point, tetra);
  CHECK(m.inside);
  CHECK(is_psd(v.estimate->matrix()));
  CHECK(bloch_vector(*v.estimate).norm() <= 1.0 + 1e-10);
}

TEST_CASE("classify: search minimum for N > d^2 matches frozen values") {
  const auto povm = random_povm(2, 6, 8);
  struct Case {
    std::vector<std::uint64_t> counts;
    double minimum;  // SLSQP on the epigraph form over the Bloch ball
  };
  const std::vector<Case> cases{
      {{501, 248, 70, 486, 292, 403}, 1.030411825911617},
      {{466, 277, 82, 457, 301, 417}, 0.6741480936284773},
      {{457, 277, 91, 466, 309, 400}, 0.9831686749483323},
  };
  for (std::uint64_t seed = 0; seed < cases.size(); ++seed) {
    const auto rec = record(cases[seed].counts);
    const auto v = classify(rec, povm, 1e-6, 10000, seed);
    CHECK(v.kind == Feasibility::insufficient);
    CHECK(v.required_scale == doctest::Approx(cases[seed].minimum).epsilon(1e-8));
    // Sampled states can only do worse than the true minimum.
    const auto w = error_box(rec, 1.0).halfwidths;
    CHECK(v.required_scale <= grid_box_distance(povm, rec.frequencies().values, w) + 1e-9);
  }
  // The counts above come from this state.
  const auto truth = bloch_state({0.0, 0.6, 0.79});
  CHECK(simulate_counts(truth, povm, 2000, 0).counts() == cases[0].counts);
}

TEST_CASE("classify is monotone in k and deterministic") {
  const auto tetra = tetrahedral_povm();
  const std::vector<std::vector<std::uint64_t>> records{
      {161, 39, 39, 161}, {70, 10, 10, 10}, {40, 5, 5, 50}, {0, 30, 30, 40}, {90, 0, 0, 10}};
  const std::vector<double> ks{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0};
  for (const auto& counts : records) {
    bool reached = false;
    for (double k : ks) {
      const auto v = classify(record(counts), tetra, k, 2000, 3);
      if (reached) CHECK(v.kind != Feasibility::insufficient);
      reached = reached || v.kind != Feasibility::insufficient;
      const auto again = classify(record(counts), tetra, k, 2000, 3);
      CHECK(again.kind == v.kind);
      CHECK(again.required_scale == v.required_scale);
    }
  }
}

TEST_CASE("classify argument errors") {
  const auto tetra = tetrahedral_povm();
  CHECK_THROWS_AS(classify(record({1, 2}), tetra), DimensionMismatch);
  CHECK_THROWS_AS(classify(record({1, 2, 3, 4}), tetra, 0.0), InputError);
  CHECK_THROWS_AS(classify(record({1, 2, 3, 4}), tetra, 1.0, 0), InputError);
  const auto v = classify(record({70, 10, 10, 10}), tetra, 1.0, 1);
  CHECK(v.evaluations == 1);
}
