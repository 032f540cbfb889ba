#include "cli_app.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamband/config.hpp"
#include "beamband/errors.hpp"
#include "beamband/output.hpp"
#include "beamband/scenarios.hpp"

namespace beamband::cli {

using nlohmann::json;

namespace {

struct Options {
  std::optional<int> scenario;
  std::vector<std::string> policies;
  std::vector<std::string> ratios;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> slots;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_prefix;
  std::optional<unsigned> threads;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_document(const Options& opt) {
  json doc = json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw UsageError("cannot open config file " + opt.config_path);
    try {
      doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw UsageError(opt.config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw UsageError(opt.config_path + ": configuration must be a JSON object");
  }
  // Flags win over the file.
  if (opt.scenario) doc["scenario"] = *opt.scenario;
  if (opt.realizations) doc["realizations"] = *opt.realizations;
  if (opt.slots) doc["slots"] = *opt.slots;
  if (opt.seed) doc["seed"] = *opt.seed;
  if (!opt.ratios.empty()) doc["ratios"] = opt.ratios;
  return doc;
}

unsigned thread_count(const Options& opt) {
  if (opt.threads) return *opt.threads;
  if (const char* env = std::getenv("BEAMBAND_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw UsageError(std::string("BEAMBAND_THREADS is not a number: ") + env);
    return static_cast<unsigned>(v);
  }
  return 0;
}

ScenarioConfig resolve(const Options& opt, json& overrides) {
  const ConfigResult result = validate_config(load_document(opt));
  if (!result.ok()) throw UsageError("invalid configuration:\n" + result.report());
  overrides = result.overrides;
  ScenarioConfig config = result.config;
  config.threads = thread_count(opt);
  return config;
}

std::vector<std::string> default_policies(int scenario) {
  switch (scenario) {
    case 1:
      return {"random", "ucb1", "klucb", "ts"};
    case 2:
      return {"random", "flat", "mcts"};
    default:
      return {"random", "mcts"};
  }
}

// Builds the spec for a policy name; static arms resolve against `statics`.
PolicySpec make_spec(const std::string& name, const ScenarioConfig& config, const StaticEvaluation& statics,
                     Ratio ratio) {
  PolicySpec spec;
  spec.label = name;
  spec.ratio = ratio;
  spec.leaf_policy = config.leaf_policy;
  if (name == "random") {
    spec.engine = Engine::kFlat;
    spec.kind = PolicyKind::kRandom;
  } else if (name == "ucb1") {
    spec.kind = PolicyKind::kUcb1;
  } else if (name == "klucb" || name == "flat") {
    spec.kind = PolicyKind::kKlUcb;
  } else if (name == "ts" || name == "tsbeta") {
    spec.kind = PolicyKind::kTsBeta;
  } else if (name == "tsgauss") {
    spec.kind = PolicyKind::kTsGaussian;
  } else if (name == "mcts") {
    spec.engine = Engine::kMcts;
    spec.kind = config.node_policy;
  } else if (name == "genius" || name == "worst") {
    spec.engine = Engine::kStatic;
    spec.static_arm = name == "genius" ? statics.genius : statics.worst;
  } else {
    throw UsageError("unknown policy '" + name + "'");
  }
  const bool label_ratio = config.ratios.size() > 1 || !config.ratios.front().is_full();
  if (label_ratio) spec.label += " R=" + ratio.str();
  return spec;
}

std::string arm_label(const ArmConfig& arm) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g ms / %d sectors", arm.period_ms, arm.num_sectors);
  return buf;
}

void print_baselines(std::ostream& out, const StaticEvaluation& eval) {
  char buf[128];
  out << "arm  period_ms  sectors  mean_rate_gbps\n";
  for (std::size_t i = 0; i < eval.arms.size(); ++i) {
    const char* tag = i == eval.genius ? "  genius" : (i == eval.worst ? "  worst" : "");
    std::snprintf(buf, sizeof buf, "%3zu  %9g  %7d  %14.6f%s\n", i, eval.arms[i].period_ms, eval.arms[i].num_sectors,
                  eval.mean_rate_gbps[i], tag);
    out << buf;
  }
  out << "genius: " << arm_label(eval.arms[eval.genius]) << '\n';
  out << "worst: " << arm_label(eval.arms[eval.worst]) << '\n';
}

void write_meta(const std::string& path, const json& meta) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << meta.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

void ensure_parent(const std::string& prefix) {
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

int do_run(const Options& opt, std::ostream& out) {
  json overrides;
  const ScenarioConfig config = resolve(opt, overrides);
  auto names = opt.policies.empty() ? default_policies(config.scenario) : opt.policies;

  const StaticEvaluation statics = evaluate_static_policies(config);
  std::vector<std::vector<RunTrace>> results;
  std::vector<PolicySummary> summaries;
  for (const auto& ratio : config.ratios) {
    for (const auto& name : names) {
      const PolicySpec spec = make_spec(name, config, statics, ratio);
      results.push_back(run_policy(config, spec, &statics));
      const AggregateCurve curve = aggregate(results.back(), std::min<std::size_t>(100, config.slots));
      summaries.push_back({spec.label, curve.tail_mean_gbps, curve.window, curve.mean_cumulative_regret.back()});
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-24s tail mean %.4f Gbps (last %zu slots)\n", spec.label.c_str(),
                    curve.tail_mean_gbps, curve.window);
      out << buf;
    }
  }

  if (opt.out_prefix.empty()) return 0;
  ensure_parent(opt.out_prefix);
  const std::string csv_path = opt.out_prefix + ".csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  write_csv_header(csv);
  for (const auto& traces : results) write_csv_rows(csv, traces);
  csv.close();
  if (!csv) throw std::runtime_error("write failed: " + csv_path);
  write_meta(opt.out_prefix + ".meta", make_meta(config, overrides, &statics, summaries));
  out << "wrote " << csv_path << " and " << opt.out_prefix << ".meta\n";
  return 0;
}

int do_baselines(const Options& opt, std::ostream& out) {
  json overrides;
  const ScenarioConfig config = resolve(opt, overrides);
  const StaticEvaluation statics = evaluate_static_policies(config);
  print_baselines(out, statics);
  if (!opt.out_prefix.empty()) {
    ensure_parent(opt.out_prefix);
    write_meta(opt.out_prefix + ".meta", make_meta(config, overrides, &statics, {}));
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--scenario", opt.scenario, "Scenario 1, 2 or 3")->check(CLI::Range(1, 3));
  cmd->add_option("--realizations", opt.realizations, "Independent realizations")->check(CLI::PositiveNumber);
  cmd->add_option("--slots", opt.slots, "Slots per realization")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Master seed (unsigned 64-bit)");
  cmd->add_option("--config", opt.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_prefix, "Output prefix; writes <prefix>.csv and <prefix>.meta");
  cmd->add_option("--threads", opt.threads, "Worker threads (0: all cores; default $BEAMBAND_THREADS)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"beamband: bandit-driven beam sweeping on a simulated mmWave link"};
  app.require_subcommand(1);
  Options opt;

  auto* run_cmd = app.add_subcommand("run", "Run learning policies and write traces");
  add_common(run_cmd, opt);
  run_cmd
      ->add_option("--policy", opt.policies,
                   "Policy (repeatable): random, ucb1, klucb, ts, tsgauss, tsbeta, flat, mcts, genius, worst")
      ->check(CLI::IsMember({"random", "ucb1", "klucb", "ts", "tsgauss", "tsbeta", "flat", "mcts", "genius", "worst"}));
  run_cmd->add_option("--ratio", opt.ratios, "Sweep ratio p/q (repeatable)");

  auto* base_cmd = app.add_subcommand("baselines", "Evaluate every static arm; report genius and worst");
  add_common(base_cmd, opt);

  app.add_subcommand("schema", "Print the configuration JSON schema");
  auto* defaults_cmd = app.add_subcommand("defaults", "Print the resolved default configuration");
  defaults_cmd->add_option("--scenario", opt.scenario, "Scenario 1, 2 or 3")->check(CLI::Range(1, 3));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(opt, out);
    if (base_cmd->parsed()) return do_baselines(opt, out);
    if (app.got_subcommand("schema")) {
      out << config_schema().dump(2) << '\n';
      return 0;
    }
    if (defaults_cmd->parsed()) {
      out << config_to_json(default_config(opt.scenario.value_or(1))).dump(2) << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace beamband::cli
