#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "beamband/rng.hpp"

namespace beamband {

/// Sufficient statistics of one arm: pull count and running mean of the
/// normalized rewards observed on it. An unpulled arm keeps mean 0, and index
/// rules never read that mean.
struct ArmEstimate {
  std::uint64_t pulls = 0;
  double mean_reward = 0.0;

  // Incremental mean; `reward` must already be in [0, 1].
  void observe(double reward);
};

enum class PolicyKind { kRandom, kUcb1, kKlUcb, kTsGaussian, kTsBeta };

std::string_view policy_name(PolicyKind kind) noexcept;
bool is_thompson(PolicyKind kind) noexcept;

// TSGaussian: (posterior mean, pseudo-count). TSBeta: (alpha, beta).
struct PosteriorParams {
  double first = 0.0;
  double second = 0.0;
};

double ucb1_index(const ArmEstimate& arm, std::uint64_t total_pulls);

// Bernoulli KL divergence kl(p || q) with 0*log(0) = 0; +inf where q hits a
// boundary that p does not.
double kl_bernoulli(double p, double q);

inline constexpr double kDefaultKlTolerance = 1e-9;

// Largest q in [mean, 1] with pulls * kl(mean, q) <= ln(total_pulls), found by
// bisection to `tolerance`. +inf for an unpulled arm.
double kl_ucb_index(const ArmEstimate& arm, double total_pulls,
                    double tolerance = kDefaultKlTolerance);

// Index of the largest value; ties are split uniformly with one draw from
// `rng`, and no draw is made when the maximizer is unique.
std::size_t argmax_random_tie(std::span<const double> values, Rng& rng);

// Random / UCB1 / KL-UCB choice over a set of arm statistics whose pulls sum
// to `total_pulls`. Shared by the flat policies and the tree nodes.
std::size_t select_by_index(PolicyKind kind, std::span<const ArmEstimate> arms,
                            std::uint64_t total_pulls, Rng& rng,
                            double kl_tolerance = kDefaultKlTolerance);

/// A bandit policy over a fixed set of K arms.
class PolicyState {
 public:
  PolicyState(PolicyKind kind, std::size_t num_arms);

  PolicyKind kind() const noexcept { return kind_; }
  std::size_t num_arms() const noexcept { return arms_.size(); }
  std::span<const ArmEstimate> arms() const noexcept { return arms_; }
  std::uint64_t total_pulls() const noexcept { return total_pulls_; }
  std::span<const PosteriorParams> posterior() const noexcept { return posterior_; }

  std::size_t select(Rng& rng) const;
  void update(std::size_t arm, double reward);

  // Test hook: overwrite one arm's Beta posterior.
  void set_beta_posterior(std::size_t arm, double alpha, double beta);

 private:
  PolicyKind kind_;
  std::vector<ArmEstimate> arms_;
  std::vector<PosteriorParams> posterior_;
  std::uint64_t total_pulls_ = 0;
};

// One posterior draw per arm, argmax with random tie-breaking.
std::size_t ts_sample_and_select(const PolicyState& state, Rng& rng);

inline std::size_t select_arm(const PolicyState& state, Rng& rng) { return state.select(rng); }

/// Per-slot regret against the best static arm, clamped at zero.
struct RegretLedger {
  double best_static_mean = 0.0;
  std::vector<double> per_slot_regret;
  double cumulative = 0.0;

  explicit RegretLedger(double best = 0.0) : best_static_mean(best) {}
  double record(double chosen_mean);
};

}  // namespace beamband
