#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beamband/bandit.hpp"
#include "beamband/env.hpp"
#include "beamband/ratio.hpp"

namespace beamband {

struct ScenarioConfig {
  int scenario = 1;
  std::vector<double> periods_ms{10, 20, 40, 80, 160};
  std::vector<int> sector_counts{16, 32, 64, 128, 256, 512};
  std::vector<Ratio> ratios{Ratio{1, 1}};
  // BS codebook used when only the period is learned.
  int fixed_bs_sectors = 256;
  std::size_t slots = 500;
  std::size_t realizations = 500;
  std::uint64_t seed = 0;
  PolicyKind node_policy = PolicyKind::kKlUcb;
  PolicyKind leaf_policy = PolicyKind::kUcb1;
  EnvParams env;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Defaults for a scenario: 300 slots for scenario 3, 500 otherwise.
ScenarioConfig default_config(int scenario);

// One fixed (period, codebook) configuration.
struct ArmConfig {
  double period_ms = 0.0;
  int num_sectors = 0;
};

// Scenario 1: one arm per period at the fixed codebook. Scenarios 2 and 3:
// period-major enumeration of every (period, sector count) pair.
std::vector<ArmConfig> static_arms(const ScenarioConfig& config);

enum class Engine { kFlat, kMcts, kStatic };

struct PolicySpec {
  std::string label;
  Engine engine = Engine::kFlat;
  // Flat policy kind, or node policy for the tree.
  PolicyKind kind = PolicyKind::kRandom;
  // Beam subset rule under the tree (and for the random baseline when ratio < 1).
  PolicyKind leaf_policy = PolicyKind::kUcb1;
  Ratio ratio{1, 1};
  std::size_t static_arm = 0;
};

struct SlotRecord {
  std::size_t slot_index = 0;
  std::size_t arm = 0;  // index into static_arms()
  double period_ms = 0.0;
  int num_sectors = 0;
  Ratio ratio{1, 1};
  BeamPair best_pair;
  double effective_rate_gbps = 0.0;
  double normalized_reward = 0.0;
  double regret = 0.0;
  double cumulative_regret = 0.0;
};

struct RunTrace {
  std::size_t realization_id = 0;
  std::string label;
  std::vector<SlotRecord> slots;
};

struct StaticEvaluation {
  std::vector<ArmConfig> arms;
  std::vector<double> mean_rate_gbps;
  std::vector<double> mean_reward;
  std::size_t genius = 0;
  std::size_t worst = 0;
};

// Runs one policy over every realization. With a reference, per-slot regret
// is measured against its genius arm; without one, regret stays 0.
std::vector<RunTrace> run_policy(const ScenarioConfig& config, const PolicySpec& spec,
                                 const StaticEvaluation* reference = nullptr);

// Every static arm over the full realization set, same seeds as the learners.
StaticEvaluation evaluate_static_policies(const ScenarioConfig& config);

std::vector<RunTrace> run_scenario_i(const ScenarioConfig& config, PolicyKind kind,
                                     const StaticEvaluation* reference = nullptr);
std::vector<RunTrace> run_scenario_ii(const ScenarioConfig& config, Engine engine,
                                      PolicyKind kind = PolicyKind::kKlUcb,
                                      const StaticEvaluation* reference = nullptr);
std::vector<RunTrace> run_scenario_iii(const ScenarioConfig& config, Ratio ratio,
                                       const StaticEvaluation* reference = nullptr);

struct AggregateCurve {
  std::vector<double> mean_rate_gbps;
  std::vector<double> mean_reward;
  std::vector<double> mean_cumulative_regret;
  std::size_t window = 0;
  double tail_mean_gbps = 0.0;
};

AggregateCurve aggregate(std::span<const RunTrace> traces, std::size_t window = 100);

// First slot index at which the trailing moving average (width `smoothing`)
// reaches `target`; curve.size() if it never does.
std::size_t slots_to_reach(std::span<const double> curve, double target, std::size_t smoothing);

}  // namespace beamband
