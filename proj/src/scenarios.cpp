#include "beamband/scenarios.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "beamband/errors.hpp"
#include "beamband/mcts.hpp"
#include "beamband/parallel.hpp"

namespace beamband {

ScenarioConfig default_config(int scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.slots = scenario == 3 ? 300 : 500;
  return c;
}

std::vector<ArmConfig> static_arms(const ScenarioConfig& config) {
  std::vector<ArmConfig> arms;
  if (config.scenario == 1) {
    for (double p : config.periods_ms) arms.push_back({p, config.fixed_bs_sectors});
  } else {
    for (double p : config.periods_ms) {
      for (int n : config.sector_counts) arms.push_back({p, n});
    }
  }
  return arms;
}

namespace {

struct Decision {
  std::size_t arm = 0;
  std::vector<int> swept;
  PathSelection path;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Decision choose(Rng& rng) = 0;
  virtual void learn(const Decision& decision, double reward, const SweepResult& sweep) = 0;
};

std::vector<int> all_beams(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) v[b] = b;
  return v;
}

std::vector<int> random_subset(int n, std::size_t k, Rng& rng) {
  std::vector<int> v = all_beams(n);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(v.size() - i));
    std::swap(v[i], v[j]);
  }
  v.resize(k);
  std::sort(v.begin(), v.end());
  return v;
}

class FlatAgent final : public Agent {
 public:
  FlatAgent(PolicyKind kind, std::vector<ArmConfig> arms, Ratio ratio)
      : state_(kind, arms.size()), arms_(std::move(arms)), ratio_(ratio) {}

  Decision choose(Rng& rng) override {
    Decision d;
    d.arm = state_.select(rng);
    const int n = arms_[d.arm].num_sectors;
    d.swept = ratio_.is_full() ? all_beams(n)
                               : random_subset(n, static_cast<std::size_t>(std::max<std::int64_t>(ratio_.beams_for(n), 1)), rng);
    return d;
  }
  void learn(const Decision& d, double reward, const SweepResult&) override { state_.update(d.arm, reward); }

 private:
  PolicyState state_;
  std::vector<ArmConfig> arms_;
  Ratio ratio_;
};

class StaticAgent final : public Agent {
 public:
  StaticAgent(std::size_t arm, int num_sectors) : arm_(arm), beams_(all_beams(num_sectors)) {}
  Decision choose(Rng&) override { return {arm_, beams_, {}}; }
  void learn(const Decision&, double, const SweepResult&) override {}

 private:
  std::size_t arm_;
  std::vector<int> beams_;
};

class TreeAgent final : public Agent {
 public:
  TreeAgent(const ScenarioConfig& config, const PolicySpec& spec)
      : policy_{spec.kind, spec.leaf_policy}, ratio_(spec.ratio), fixed_sectors_(config.fixed_bs_sectors),
        sectors_per_period_(config.sector_counts.size()) {
    if (config.scenario == 1) {
      tree_ = build_period_tree(config.periods_ms);
    } else {
      tree_ = build_period_beamwidth_tree(config.periods_ms, config.sector_counts, config.scenario == 3);
    }
    with_leaves_ = config.scenario == 3;
  }

  Decision choose(Rng& rng) override {
    Decision d;
    d.path = select_path(tree_, policy_, rng, ratio_);
    if (d.path.beamwidth_child == PathSelection::kNoChild) {
      d.arm = d.path.period_child;
      d.swept = all_beams(fixed_sectors_);
    } else {
      d.arm = d.path.period_child * sectors_per_period_ + d.path.beamwidth_child;
      d.swept = d.path.swept_beams;
    }
    return d;
  }

  void learn(const Decision& d, double reward, const SweepResult& sweep) override {
    if (with_leaves_) {
      backpropagate(tree_, d.path, reward, sweep.connects);
    } else {
      backpropagate(tree_, d.path, reward);
    }
  }

 private:
  TreeNode tree_;
  TreePolicy policy_;
  Ratio ratio_;
  int fixed_sectors_;
  std::size_t sectors_per_period_;
  bool with_leaves_ = false;
};

std::unique_ptr<Agent> make_agent(const ScenarioConfig& config, const PolicySpec& spec,
                                  const std::vector<ArmConfig>& arms) {
  switch (spec.engine) {
    case Engine::kFlat:
      return std::make_unique<FlatAgent>(spec.kind, arms, spec.ratio);
    case Engine::kMcts:
      if (is_thompson(spec.kind)) throw PreconditionError("tree nodes support random, ucb1 and klucb only");
      return std::make_unique<TreeAgent>(config, spec);
    case Engine::kStatic:
      if (spec.static_arm >= arms.size()) throw PreconditionError("static arm out of range");
      return std::make_unique<StaticAgent>(spec.static_arm, arms[spec.static_arm].num_sectors);
  }
  throw PreconditionError("unknown engine");
}

void check_config(const ScenarioConfig& config) {
  if (config.scenario < 1 || config.scenario > 3) throw PreconditionError("scenario must be 1, 2 or 3");
  if (config.periods_ms.empty()) throw PreconditionError("no periods configured");
  if (config.scenario != 1 && config.sector_counts.empty()) throw PreconditionError("no sector counts configured");
  if (config.slots == 0 || config.realizations == 0) throw PreconditionError("slots and realizations must be >= 1");
}

struct Codebooks {
  Codebook ue;
  std::map<int, Codebook> bs;

  Codebooks(const ScenarioConfig& config, const std::vector<ArmConfig>& arms)
      : ue(Side::kUe, config.env.ue_sectors, config.env.elevation_beamwidth_deg) {
    for (const auto& a : arms) {
      if (!bs.contains(a.num_sectors)) {
        bs.emplace(a.num_sectors, Codebook(Side::kBs, a.num_sectors, config.env.elevation_beamwidth_deg));
      }
    }
  }
};

RunTrace run_realization(const ScenarioConfig& config, const PolicySpec& spec, const std::vector<ArmConfig>& arms,
                         const Codebooks& books, const StaticEvaluation* reference, std::size_t r) {
  const EnvParams& env = config.env;
  const double max_rate_gbps = env.budget.max_rate_bps() * 1e-9;

  WorldState world = init_realization(derive_seed(config.seed, r, StreamPurpose::kEnvInit), env);
  Rng policy_rng(derive_seed(config.seed, r, StreamPurpose::kPolicy));
  auto agent = make_agent(config, spec, arms);
  RegretLedger ledger(reference ? reference->mean_reward[reference->genius] : 0.0);

  RunTrace trace;
  trace.realization_id = r;
  trace.label = spec.label;
  trace.slots.reserve(config.slots);
  for (std::size_t t = 0; t < config.slots; ++t) {
    Rng slot_rng(derive_seed(config.seed, r, StreamPurpose::kEnvSlot, t));
    begin_slot(world, env, slot_rng);

    const Decision d = agent->choose(policy_rng);
    const ArmConfig& arm = arms[d.arm];
    const Codebook& bs = books.bs.at(arm.num_sectors);
    const SweepResult sw = sweep(world, bs, books.ue, d.swept, env);
    const double rate = slot_effective_rate(world, bs, books.ue, sw.best_pair, arm.period_ms * 1e-3, sw.overhead_s,
                                            env, slot_rng);
    const double reward = std::clamp(rate / max_rate_gbps, 0.0, 1.0);
    agent->learn(d, reward, sw);

    SlotRecord rec;
    rec.slot_index = t;
    rec.arm = d.arm;
    rec.period_ms = arm.period_ms;
    rec.num_sectors = arm.num_sectors;
    rec.ratio = spec.ratio;
    rec.best_pair = sw.best_pair;
    rec.effective_rate_gbps = rate;
    rec.normalized_reward = reward;
    rec.regret = reference ? ledger.record(reference->mean_reward[d.arm]) : 0.0;
    rec.cumulative_regret = ledger.cumulative;
    trace.slots.push_back(rec);
  }
  return trace;
}

}  // namespace

std::vector<RunTrace> run_policy(const ScenarioConfig& config, const PolicySpec& spec,
                                 const StaticEvaluation* reference) {
  check_config(config);
  const auto arms = static_arms(config);
  if (reference && reference->mean_reward.size() != arms.size()) {
    throw ConsistencyError("static reference does not match the configured arm set");
  }
  for (const auto& a : arms) {
    if (!spec.ratio.integral_for(a.num_sectors)) {
      throw PreconditionError("sweep ratio " + spec.ratio.str() + " is not integral for " +
                              std::to_string(a.num_sectors) + " sectors");
    }
  }
  const Codebooks books(config, arms);
  std::vector<RunTrace> traces(config.realizations);
  parallel_for(config.realizations, config.threads, [&](std::size_t r) {
    traces[r] = run_realization(config, spec, arms, books, reference, r);
  });
  return traces;
}

StaticEvaluation evaluate_static_policies(const ScenarioConfig& config) {
  check_config(config);
  StaticEvaluation eval;
  eval.arms = static_arms(config);
  const double max_rate_gbps = config.env.budget.max_rate_bps() * 1e-9;
  for (std::size_t a = 0; a < eval.arms.size(); ++a) {
    PolicySpec spec;
    spec.label = "static";
    spec.engine = Engine::kStatic;
    spec.static_arm = a;
    const auto traces = run_policy(config, spec);
    double sum = 0.0;
    for (const auto& tr : traces) {
      for (const auto& s : tr.slots) sum += s.effective_rate_gbps;
    }
    const double mean = sum / static_cast<double>(config.realizations * config.slots);
    eval.mean_rate_gbps.push_back(mean);
    eval.mean_reward.push_back(mean / max_rate_gbps);
  }
  const auto& m = eval.mean_rate_gbps;
  eval.genius = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  eval.worst = static_cast<std::size_t>(std::min_element(m.begin(), m.end()) - m.begin());
  return eval;
}

std::vector<RunTrace> run_scenario_i(const ScenarioConfig& config, PolicyKind kind,
                                     const StaticEvaluation* reference) {
  if (config.scenario != 1) throw PreconditionError("run_scenario_i: config is not scenario 1");
  PolicySpec spec;
  spec.label = std::string(policy_name(kind));
  spec.engine = Engine::kFlat;
  spec.kind = kind;
  return run_policy(config, spec, reference);
}

std::vector<RunTrace> run_scenario_ii(const ScenarioConfig& config, Engine engine, PolicyKind kind,
                                      const StaticEvaluation* reference) {
  if (config.scenario != 2) throw PreconditionError("run_scenario_ii: config is not scenario 2");
  if (engine == Engine::kStatic) throw PreconditionError("run_scenario_ii: use evaluate_static_policies");
  PolicySpec spec;
  spec.engine = engine;
  spec.kind = kind;
  spec.label = engine == Engine::kMcts ? "mcts" : "flat-" + std::string(policy_name(kind));
  return run_policy(config, spec, reference);
}

std::vector<RunTrace> run_scenario_iii(const ScenarioConfig& config, Ratio ratio,
                                       const StaticEvaluation* reference) {
  if (config.scenario != 3) throw PreconditionError("run_scenario_iii: config is not scenario 3");
  PolicySpec spec;
  spec.engine = Engine::kMcts;
  spec.kind = config.node_policy;
  spec.leaf_policy = config.leaf_policy;
  spec.ratio = ratio;
  spec.label = "mcts R=" + ratio.str();
  return run_policy(config, spec, reference);
}

AggregateCurve aggregate(std::span<const RunTrace> traces, std::size_t window) {
  if (traces.empty()) throw PreconditionError("aggregate: no traces");
  const std::size_t len = traces.front().slots.size();
  for (const auto& tr : traces) {
    if (tr.slots.size() != len) throw ConsistencyError("aggregate: traces differ in length");
  }
  AggregateCurve out;
  out.window = std::min(window, len);
  out.mean_rate_gbps.assign(len, 0.0);
  out.mean_reward.assign(len, 0.0);
  out.mean_cumulative_regret.assign(len, 0.0);
  for (const auto& tr : traces) {
    for (std::size_t t = 0; t < len; ++t) {
      out.mean_rate_gbps[t] += tr.slots[t].effective_rate_gbps;
      out.mean_reward[t] += tr.slots[t].normalized_reward;
      out.mean_cumulative_regret[t] += tr.slots[t].cumulative_regret;
    }
  }
  const double n = static_cast<double>(traces.size());
  for (std::size_t t = 0; t < len; ++t) {
    out.mean_rate_gbps[t] /= n;
    out.mean_reward[t] /= n;
    out.mean_cumulative_regret[t] /= n;
  }
  double tail = 0.0;
  for (std::size_t t = len - out.window; t < len; ++t) tail += out.mean_rate_gbps[t];
  out.tail_mean_gbps = out.window ? tail / static_cast<double>(out.window) : 0.0;
  return out;
}

std::size_t slots_to_reach(std::span<const double> curve, double target, std::size_t smoothing) {
  smoothing = std::max<std::size_t>(smoothing, 1);
  double sum = 0.0;
  for (std::size_t t = 0; t < curve.size(); ++t) {
    sum += curve[t];
    if (t >= smoothing) sum -= curve[t - smoothing];
    const std::size_t width = std::min(t + 1, smoothing);
    if (sum / static_cast<double>(width) >= target) return t;
  }
  return curve.size();
}

}  // namespace beamband
