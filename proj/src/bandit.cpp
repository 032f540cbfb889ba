#include "beamband/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamband/errors.hpp"

namespace beamband {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_reward(double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw DomainError("reward outside [0, 1]; rewards must be normalized before update");
  }
}
}  // namespace

void ArmEstimate::observe(double reward) {
  check_reward(reward);
  ++pulls;
  mean_reward += (reward - mean_reward) / static_cast<double>(pulls);
}

std::string_view policy_name(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::kRandom: return "random";
    case PolicyKind::kUcb1: return "ucb1";
    case PolicyKind::kKlUcb: return "klucb";
    case PolicyKind::kTsGaussian: return "tsgauss";
    case PolicyKind::kTsBeta: return "tsbeta";
  }
  return "unknown";
}

bool is_thompson(PolicyKind kind) noexcept {
  return kind == PolicyKind::kTsGaussian || kind == PolicyKind::kTsBeta;
}

double ucb1_index(const ArmEstimate& arm, std::uint64_t total_pulls) {
  if (total_pulls == 0) throw PreconditionError("ucb1_index: total_pulls must be >= 1");
  if (arm.pulls > total_pulls) throw PreconditionError("ucb1_index: arm pulls exceed total");
  if (arm.pulls == 0) return kInf;
  // Same operation order as kernels::ucb1_indices.
  const double two_log_total = 2.0 * std::log(static_cast<double>(total_pulls));
  return arm.mean_reward + std::sqrt(two_log_total / static_cast<double>(arm.pulls));
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw DomainError("kl_bernoulli: arguments must lie in [0, 1]");
  }
  double kl = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return kInf;
    kl += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return kInf;
    kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return kl;
}

double kl_ucb_index(const ArmEstimate& arm, double total_pulls, double tolerance) {
  const double mean = arm.mean_reward;
  if (!(mean >= 0.0 && mean <= 1.0)) throw DomainError("kl_ucb_index: mean outside [0, 1]");
  if (!(tolerance > 0.0)) throw PreconditionError("kl_ucb_index: tolerance must be positive");
  if (arm.pulls == 0) return kInf;
  if (!(total_pulls > 0.0)) throw PreconditionError("kl_ucb_index: total_pulls must be positive");

  const double budget = std::log(total_pulls) / static_cast<double>(arm.pulls);
  if (budget <= 0.0) return mean;
  if (kl_bernoulli(mean, 1.0) <= budget) return 1.0;

  double lo = mean;
  double hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(mean, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::size_t argmax_random_tie(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw PreconditionError("argmax_random_tie: empty input");
  const double best = *std::max_element(values.begin(), values.end());
  std::size_t ties = 0;
  for (double v : values) ties += (v == best);
  std::size_t pick = ties > 1 ? static_cast<std::size_t>(rng.uniform_index(ties)) : 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) {
      if (pick == 0) return i;
      --pick;
    }
  }
  return 0;  // unreachable
}

std::size_t select_by_index(PolicyKind kind, std::span<const ArmEstimate> arms,
                            std::uint64_t total_pulls, Rng& rng, double kl_tolerance) {
  if (arms.empty()) throw PreconditionError("select_by_index: no arms");
  switch (kind) {
    case PolicyKind::kRandom:
      return static_cast<std::size_t>(rng.uniform_index(arms.size()));
    case PolicyKind::kUcb1:
    case PolicyKind::kKlUcb: {
      std::vector<double> index(arms.size());
      for (std::size_t i = 0; i < arms.size(); ++i) {
        if (arms[i].pulls == 0) {
          index[i] = kInf;
        } else if (kind == PolicyKind::kUcb1) {
          index[i] = ucb1_index(arms[i], total_pulls);
        } else {
          index[i] = kl_ucb_index(arms[i], static_cast<double>(total_pulls), kl_tolerance);
        }
      }
      return argmax_random_tie(index, rng);
    }
    case PolicyKind::kTsGaussian:
    case PolicyKind::kTsBeta:
      break;
  }
  throw PreconditionError("select_by_index: Thompson sampling needs posterior state");
}

PolicyState::PolicyState(PolicyKind kind, std::size_t num_arms)
    : kind_(kind), arms_(num_arms), posterior_(num_arms) {
  if (num_arms == 0) throw PreconditionError("PolicyState: K must be >= 1");
  if (kind == PolicyKind::kTsBeta) {
    for (auto& p : posterior_) p = {1.0, 1.0};
  }
}

std::size_t PolicyState::select(Rng& rng) const {
  if (is_thompson(kind_)) return ts_sample_and_select(*this, rng);
  return select_by_index(kind_, arms_, std::max<std::uint64_t>(total_pulls_, 1), rng);
}

void PolicyState::update(std::size_t arm, double reward) {
  if (arm >= arms_.size()) throw PreconditionError("update: arm index out of range");
  check_reward(reward);
  arms_[arm].observe(reward);
  ++total_pulls_;
  auto& post = posterior_[arm];
  switch (kind_) {
    case PolicyKind::kTsGaussian:
      post.first = (post.second * post.first + reward) / (post.second + 1.0);
      post.second += 1.0;
      break;
    case PolicyKind::kTsBeta:
      post.first += reward;
      post.second += 1.0 - reward;
      break;
    default:
      break;
  }
}

void PolicyState::set_beta_posterior(std::size_t arm, double alpha, double beta) {
  if (kind_ != PolicyKind::kTsBeta) throw PreconditionError("set_beta_posterior: not TSBeta");
  if (!(alpha >= 1.0 && beta >= 1.0)) throw DomainError("Beta posterior needs alpha, beta >= 1");
  posterior_.at(arm) = {alpha, beta};
}

std::size_t ts_sample_and_select(const PolicyState& state, Rng& rng) {
  const auto post = state.posterior();
  std::vector<double> draws(post.size());
  switch (state.kind()) {
    case PolicyKind::kTsGaussian:
      for (std::size_t i = 0; i < post.size(); ++i) {
        draws[i] = post[i].first + std::sqrt(1.0 / (post[i].second + 1.0)) * rng.normal();
      }
      break;
    case PolicyKind::kTsBeta:
      for (std::size_t i = 0; i < post.size(); ++i) draws[i] = rng.beta(post[i].first, post[i].second);
      break;
    default:
      throw PreconditionError("ts_sample_and_select: policy is not Thompson sampling");
  }
  return argmax_random_tie(draws, rng);
}

double RegretLedger::record(double chosen_mean) {
  const double regret = std::max(0.0, best_static_mean - chosen_mean);
  per_slot_regret.push_back(regret);
  cumulative += regret;
  return regret;
}

}  // namespace beamband
