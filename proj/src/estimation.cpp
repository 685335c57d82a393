#include "povm_domain/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "povm_domain/errors.hpp"
#include "povm_domain/rng.hpp"

namespace povm_domain {

namespace {

// Euclidean projection of a real vector onto {λ ≥ 0, Σλ = 1}: the fixed point
// of repeatedly clipping negatives and spreading the deficit uniformly.
std::vector<double> project_to_simplex(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (1.0 - cumulative) / static_cast<double>(k + 1);
    if (sorted[k] + candidate > 0.0) shift = candidate;
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::max(values[i] + shift, 0.0);
  return out;
}

ComplexMatrix nearest_state_matrix(const ComplexMatrix& m, double tol) {
  const auto eig = hermitian_eigen(m, tol);
  const auto lambda = project_to_simplex(eig.eigenvalues);
  ComplexMatrix out(m.order());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] == 0.0) continue;
    out += ComplexMatrix::outer(eig.eigenvector(j)) * Complex(lambda[j]);
  }
  return out.hermitian_part();
}

// max_μ |tr(ρA_μ) − q_μ| / w_μ and its log-sum-exp smoothing at temperature
// tau, which overestimates the max by at most tau·log(2N).
class BoxDistance {
 public:
  struct Value {
    double chebyshev = 0.0;
    double smoothed = 0.0;
    ComplexMatrix gradient;
  };

  BoxDistance(const Povm& povm, std::vector<double> center, std::vector<double> widths)
      : povm_(povm), center_(std::move(center)), widths_(std::move(widths)) {}

  Value evaluate(const ComplexMatrix& rho, double tau) const {
    const auto p = outcome_values(rho, povm_);
    const std::size_t n = p.size();
    std::vector<double> s(n);
    Value v;
    for (std::size_t mu = 0; mu < n; ++mu) {
      s[mu] = (p[mu] - center_[mu]) / widths_[mu];
      v.chebyshev = std::max(v.chebyshev, std::abs(s[mu]));
    }
    if (tau <= 0.0) return v;
    double z = 0.0;
    std::vector<double> coef(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
      const double up = std::exp((s[mu] - v.chebyshev) / tau);
      const double down = std::exp((-s[mu] - v.chebyshev) / tau);
      z += up + down;
      coef[mu] = up - down;
    }
    v.smoothed = v.chebyshev + tau * std::log(z);
    v.gradient = ComplexMatrix(rho.order());
    for (std::size_t mu = 0; mu < n; ++mu) {
      v.gradient += povm_.effect(mu) * Complex(coef[mu] / (z * widths_[mu]));
    }
    return v;
  }

 private:
  const Povm& povm_;
  std::vector<double> center_;
  std::vector<double> widths_;
};

struct SearchState {
  ComplexMatrix best;
  double best_distance = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;

  void offer(const ComplexMatrix& rho, double distance) {
    if (distance < best_distance) {
      best_distance = distance;
      best = rho;
    }
  }
};

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    sum += (std::conj(a.entries()[i]) * b.entries()[i]).real();
  }
  return sum;
}

// Accelerated projected gradient on the smoothed distance with a decreasing
// temperature schedule, backtracking on the Lipschitz estimate and restarting
// the momentum whenever the objective goes up. Every iterate is a state.
void descend(const BoxDistance& objective, ComplexMatrix rho, std::size_t budget, double tol,
             SearchState& state) {
  if (budget == 0) return;
  const std::size_t limit = state.evaluations + budget;
  auto initial = objective.evaluate(rho, 0.0);
  ++state.evaluations;
  state.offer(rho, initial.chebyshev);
  if (initial.chebyshev == 0.0) return;

  constexpr int kStages = 10;
  double tau = 0.1 * initial.chebyshev;
  double lipschitz = 1.0;
  for (int stage = 0; stage < kStages && state.evaluations < limit; ++stage, tau *= 0.1) {
    const std::size_t stage_limit =
        std::min(limit, state.evaluations + (limit - state.evaluations) / (kStages - stage));
    ComplexMatrix x = rho;
    ComplexMatrix y = rho;
    double momentum = 1.0;
    auto at_x = objective.evaluate(x, tau);
    ++state.evaluations;
    lipschitz = std::max(lipschitz, 1.0) / tau;
    while (state.evaluations < stage_limit) {
      auto at_y = objective.evaluate(y, tau);
      ++state.evaluations;
      ComplexMatrix next;
      BoxDistance::Value at_next;
      bool accepted = false;
      while (state.evaluations < stage_limit) {
        next = nearest_state_matrix(y - at_y.gradient * Complex(1.0 / lipschitz), tol);
        at_next = objective.evaluate(next, tau);
        ++state.evaluations;
        const ComplexMatrix delta = next - y;
        const double model =
            at_y.smoothed + inner(at_y.gradient, delta) + 0.5 * lipschitz * inner(delta, delta);
        if (at_next.smoothed <= model + 1e-15 * std::abs(model)) {
          accepted = true;
          break;
        }
        lipschitz *= 2.0;
      }
      if (!accepted) break;
      state.offer(next, at_next.chebyshev);
      const double step_size = frobenius_distance(next, x);
      if (at_next.smoothed > at_x.smoothed) {
        // Momentum overshot: restart from the last accepted point.
        y = x;
        momentum = 1.0;
        continue;
      }
      const double following = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + (next - x) * Complex((momentum - 1.0) / following);
      momentum = following;
      x = std::move(next);
      at_x = std::move(at_next);
      lipschitz *= 0.9;
      if (step_size < 1e-15) break;
    }
    rho = x;
    lipschitz *= tau;
  }
}

}  // namespace

CountRecord::CountRecord(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw InvalidCounts("count record has no outcomes");
  shots_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (shots_ == 0) throw InvalidCounts("count record has zero shots");
}

CountRecord::CountRecord(std::uint64_t shots, std::vector<std::uint64_t> counts)
    : CountRecord(std::move(counts)) {
  if (shots != shots_) throw InvalidCounts("counts do not add up to n");
}

ProbabilityPoint CountRecord::frequencies() const {
  std::vector<double> q(counts_.size());
  const double n = static_cast<double>(shots_);
  for (std::size_t mu = 0; mu < q.size(); ++mu) q[mu] = static_cast<double>(counts_[mu]) / n;
  return ProbabilityPoint(std::move(q));
}

CountRecord simulate_counts(const DensityMatrix& rho, const Povm& povm, std::uint64_t shots,
                            std::uint64_t seed) {
  if (shots == 0) throw InvalidCounts("need at least one shot");
  const auto p = probabilities(rho, povm);
  CounterRng rng(seed);
  std::vector<std::uint64_t> counts(p.size(), 0);
  std::uint64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t mu = 0; mu + 1 < p.size() && remaining > 0; ++mu) {
    const double pm = std::clamp(p[mu], 0.0, 1.0);
    const double conditional = mass > 0.0 ? std::clamp(pm / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, conditional);
    counts[mu] = draw(rng);
    remaining -= counts[mu];
    mass -= pm;
  }
  counts.back() += remaining;
  return CountRecord(shots, std::move(counts));
}

std::vector<double> dispersion(const CountRecord& rec) {
  const double n = static_cast<double>(rec.shots());
  std::vector<double> out;
  out.reserve(rec.size());
  for (std::uint64_t c : rec.counts()) {
    const double k = static_cast<double>(c);
    out.push_back(std::sqrt(k * (n - k) / n));
  }
  return out;
}

std::vector<double> binomial_dispersion(std::span<const double> p, std::uint64_t shots) {
  std::vector<double> out;
  out.reserve(p.size());
  const double n = static_cast<double>(shots);
  for (double pm : p) out.push_back(std::sqrt(n * pm * (1.0 - pm)));
  return out;
}

bool ErrorBox::contains(const ProbabilityPoint& point, double tol) const {
  if (point.size() != center.size()) return false;
  for (std::size_t mu = 0; mu < point.size(); ++mu) {
    if (std::abs(point[mu] - center[mu]) > halfwidths[mu] + tol) return false;
  }
  return true;
}

ErrorBox error_box(const CountRecord& rec, double k) {
  ErrorBox box{rec.frequencies(), dispersion(rec), k};
  const double n = static_cast<double>(rec.shots());
  for (double& h : box.halfwidths) h = k * h / n;
  return box;
}

InversionResult linear_inversion(const ProbabilityPoint& q, const Povm& povm, double tol) {
  const auto verdict = membership(q, povm, tol);
  InversionResult out;
  out.matrix = from_parameters(verdict.parameters);
  out.parameters = verdict.parameters;
  out.consistency_residual = verdict.consistency_residual;
  out.effective_dimension = verdict.map_rank;
  out.min_eigenvalue = verdict.min_eigenvalue;
  return out;
}

DensityMatrix project_to_physical(const ComplexMatrix& m, double tol) {
  const auto eig = hermitian_eigen(m, tol);
  if (eig.eigenvalues.front() >= 0.0 && std::abs(m.trace() - 1.0) <= tol) {
    return DensityMatrix(m, tol);
  }
  return DensityMatrix(nearest_state_matrix(m, tol), tol);
}

FeasibilityVerdict classify(const CountRecord& rec, const Povm& povm, double k,
                            std::size_t budget, std::uint64_t seed, double tol) {
  if (rec.size() != povm.size()) throw DimensionMismatch("count record and POVM sizes differ");
  if (!(k > 0.0)) throw InputError("box scale k must be positive");
  if (budget < 1) throw InputError("search budget must be at least 1");

  const auto q = rec.frequencies();
  FeasibilityVerdict verdict;
  const auto direct = membership(q, povm, tol);
  if (direct.inside) {
    verdict.kind = Feasibility::feasible;
    verdict.estimate = direct.witness;
    return verdict;
  }

  auto widths = error_box(rec, 1.0).halfwidths;
  for (double& w : widths) w = std::max(w, tol);
  const BoxDistance objective(povm, q.values, widths);

  SearchState state;
  const std::size_t first = (budget + 1) / 2;
  descend(objective, nearest_state_matrix(from_parameters(direct.parameters), tol), first, tol,
          state);
  if (budget > first) {
    CounterRng rng(seed);
    descend(objective, random_density(povm.dim(), povm.dim(), rng()).matrix(), budget - first,
            tol, state);
  }

  verdict.evaluations = state.evaluations;
  verdict.required_scale = state.best_distance;
  if (state.best_distance <= k) {
    verdict.kind = Feasibility::marginal;
    verdict.estimate = project_to_physical(state.best, tol);
    verdict.boundary_point = probabilities(*verdict.estimate, povm);
  } else {
    verdict.kind = Feasibility::insufficient;
  }
  return verdict;
}

}  // namespace povm_domain
