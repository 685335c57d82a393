#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "povm_domain/domain.hpp"

namespace povm_domain {

/// Outcome tallies from n measured systems.
class CountRecord {
 public:
  explicit CountRecord(std::vector<std::uint64_t> counts);
  /// Throws InvalidCounts unless the counts add up to shots.
  CountRecord(std::uint64_t shots, std::vector<std::uint64_t> counts);

  std::uint64_t shots() const { return shots_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  /// q_μ = n_μ / n
  ProbabilityPoint frequencies() const;

 private:
  std::uint64_t shots_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Multinomial draw with cell probabilities tr(ρ A_μ), sampled as a chain of
/// conditional binomials.
CountRecord simulate_counts(const DensityMatrix& rho, const Povm& povm, std::uint64_t shots,
                            std::uint64_t seed);

/// Δn_μ = sqrt(n_μ (n − n_μ) / n); zero when n_μ is 0 or n.
std::vector<double> dispersion(const CountRecord& rec);
/// Δn_μ = sqrt(n p_μ (1 − p_μ)) from known probabilities.
std::vector<double> binomial_dispersion(std::span<const double> p, std::uint64_t shots);

struct ErrorBox {
  ProbabilityPoint center;
  /// k · Δq_μ
  std::vector<double> halfwidths;
  double scale = 1.0;

  bool contains(const ProbabilityPoint& point, double tol = kDefaultTol) const;
};

ErrorBox error_box(const CountRecord& rec, double k);

struct InversionResult {
  /// Hermitian with unit trace; not necessarily positive.
  ComplexMatrix matrix;
  StateParameters parameters;
  double consistency_residual = 0.0;
  std::size_t effective_dimension = 0;
  double min_eigenvalue = 0.0;
};

/// Least-squares solve of q = M r + c for r.
InversionResult linear_inversion(const ProbabilityPoint& q, const Povm& povm,
                                 double tol = kDefaultTol);

/// Nearest density matrix in Frobenius norm: eigenvalues are projected onto
/// the probability simplex (clip negatives, spread the excess uniformly over
/// the remaining support, repeat). A PSD unit-trace input is returned as is.
DensityMatrix project_to_physical(const ComplexMatrix& m, double tol = kDefaultTol);

enum class Feasibility { feasible, marginal, insufficient };

struct FeasibilityVerdict {
  Feasibility kind = Feasibility::insufficient;
  /// Set for feasible and marginal verdicts.
  std::optional<DensityMatrix> estimate;
  /// Image of the estimate inside the error box; marginal verdicts only.
  std::optional<ProbabilityPoint> boundary_point;
  /// Smallest box scale k at which the box was found to reach the domain
  /// (0 when the frequencies are themselves physical).
  double required_scale = 0.0;
  /// Objective evaluations spent by the box search.
  std::size_t evaluations = 0;
};

/// Feasible when the frequencies invert to a state. Otherwise the box
/// {|q′_μ − q_μ| ≤ k Δq_μ} is searched for the image of a state: the search
/// minimizes max_μ |tr(ρA_μ) − q_μ| / Δq_μ over states, which does not depend
/// on k, and the verdict is marginal when the minimum found is at most k.
FeasibilityVerdict classify(const CountRecord& rec, const Povm& povm, double k = 1.0,
                            std::size_t budget = 10000, std::uint64_t seed = 0,
                            double tol = kDefaultTol);

}  // namespace povm_domain
