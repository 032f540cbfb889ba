#include "beamband/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>

namespace beamband {

using nlohmann::json;

std::string ConfigResult::report() const {
  std::string out;
  for (const auto& issue : issues) {
    out += issue.path.empty() ? std::string("(document)") : issue.path;
    out += ": ";
    out += issue.message;
    out += '\n';
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
};

struct RealField {
  const char* name;
  std::function<double&(EnvParams&)> ref;
  Range range;
};

const std::vector<RealField>& env_real_fields() {
  static const std::vector<RealField> fields = {
      {"tx_power_dbm", [](EnvParams& e) -> double& { return e.budget.tx_power_dbm; }, {}},
      {"carrier_ghz", [](EnvParams& e) -> double& { return e.budget.carrier_ghz; }, {0, kInf, true}},
      {"bandwidth_hz", [](EnvParams& e) -> double& { return e.budget.bandwidth_hz; }, {0, kInf, true}},
      {"noise_figure_db", [](EnvParams& e) -> double& { return e.budget.noise_figure_db; }, {0, kInf}},
      {"block_loss_db", [](EnvParams& e) -> double& { return e.budget.block_loss_db; }, {0, kInf}},
      {"block_prob", [](EnvParams& e) -> double& { return e.budget.block_prob; }, {0, 1}},
      {"se_cap_bps_hz", [](EnvParams& e) -> double& { return e.budget.se_cap_bps_hz; }, {0, kInf, true}},
      {"sidelobe_gain_dbi", [](EnvParams& e) -> double& { return e.budget.sidelobe_gain_dbi; }, {}},
      {"bs_x_m", [](EnvParams& e) -> double& { return e.bs_x_m; }, {}},
      {"bs_y_m", [](EnvParams& e) -> double& { return e.bs_y_m; }, {}},
      {"disc_center_x_m", [](EnvParams& e) -> double& { return e.disc_center_x_m; }, {}},
      {"disc_center_y_m", [](EnvParams& e) -> double& { return e.disc_center_y_m; }, {}},
      {"disc_radius_m", [](EnvParams& e) -> double& { return e.disc_radius_m; }, {0, kInf, true}},
      {"speed_min_mps", [](EnvParams& e) -> double& { return e.speed_min_mps; }, {0, kInf}},
      {"speed_max_mps", [](EnvParams& e) -> double& { return e.speed_max_mps; }, {0, kInf}},
      {"rotation_rate_max_deg_s", [](EnvParams& e) -> double& { return e.rotation_rate_max_deg_s; }, {0, kInf}},
      {"heading_noise_deg_sqrt_s", [](EnvParams& e) -> double& { return e.heading_noise_deg_sqrt_s; }, {0, kInf}},
      {"shadowing_std_db", [](EnvParams& e) -> double& { return e.shadowing_std_db; }, {0, kInf}},
      {"measurement_s", [](EnvParams& e) -> double& { return e.measurement_s; }, {0, kInf}},
      {"elevation_beamwidth_deg", [](EnvParams& e) -> double& { return e.elevation_beamwidth_deg; }, {0, 360, true}},
      {"quasi_omni_gain_dbi", [](EnvParams& e) -> double& { return e.quasi_omni_gain_dbi; }, {}},
      {"connect_threshold_db", [](EnvParams& e) -> double& { return e.connect_threshold_db; }, {}},
      {"substep_s", [](EnvParams& e) -> double& { return e.substep_s; }, {0, kInf, true}},
      {"min_distance_m", [](EnvParams& e) -> double& { return e.min_distance_m; }, {0, kInf, true}},
  };
  return fields;
}

std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  for (auto k : {PolicyKind::kRandom, PolicyKind::kUcb1, PolicyKind::kKlUcb, PolicyKind::kTsGaussian,
                 PolicyKind::kTsBeta}) {
    if (policy_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string range_text(const Range& r) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  if (r.lo == -kInf && r.hi == kInf) return "any finite number";
  if (r.hi == kInf) return std::string(r.lo_open ? "> " : ">= ") + num(r.lo);
  return std::string(r.lo_open ? "(" : "[") + num(r.lo) + ", " + num(r.hi) + "]";
}

bool in_range(double v, const Range& r) {
  if (!std::isfinite(v)) return false;
  if (r.lo_open ? !(v > r.lo) : !(v >= r.lo)) return false;
  return v <= r.hi;
}

class Validator {
 public:
  explicit Validator(ConfigResult& out) : out_(out) {}

  void issue(std::string path, std::string message) {
    out_.issues.push_back({std::move(path), std::move(message)});
  }

  std::optional<double> real(const json& v, const std::string& path, const Range& range) {
    if (!v.is_number()) {
      issue(path, "expected a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!in_range(d, range)) {
      issue(path, "value " + v.dump() + " out of range, expected " + range_text(range));
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::int64_t> integer(const json& v, const std::string& path, std::int64_t lo,
                                      std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
    if (!v.is_number_integer()) {
      issue(path, "expected an integer");
      return std::nullopt;
    }
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
      issue(path, "value " + v.dump() + " too large");
      return std::nullopt;
    }
    const auto i = v.get<std::int64_t>();
    if (i < lo || i > hi) {
      issue(path, "value " + v.dump() + " out of range, expected >= " + std::to_string(lo));
      return std::nullopt;
    }
    return i;
  }

  std::optional<PolicyKind> policy(const json& v, const std::string& path, bool tree_only) {
    if (!v.is_string()) {
      issue(path, "expected a policy name");
      return std::nullopt;
    }
    auto k = parse_policy_kind(v.get<std::string>());
    if (!k) {
      issue(path, "unknown policy '" + v.get<std::string>() + "'");
      return std::nullopt;
    }
    if (tree_only && is_thompson(*k)) {
      issue(path, "tree layers support random, ucb1 and klucb only");
      return std::nullopt;
    }
    return k;
  }

  std::optional<Ratio> ratio(const json& v, const std::string& path) {
    std::optional<Ratio> r;
    if (v.is_string()) {
      r = parse_ratio(v.get<std::string>());
    } else if (v.is_number_integer()) {
      r = parse_ratio(std::to_string(v.get<std::int64_t>()));
    } else if (v.is_number_float()) {
      // Round-trip through the shortest decimal text, so 0.3 stays 3/10.
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
      r = parse_ratio(buf);
    }
    if (!r) {
      issue(path, "expected a ratio such as \"1/2\", 0.25 or 1");
      return std::nullopt;
    }
    if (r->num > r->den) {
      issue(path, "ratio " + r->str() + " exceeds 1");
      return std::nullopt;
    }
    return r;
  }

 private:
  ConfigResult& out_;
};

const std::set<std::string> kTopKeys = {"scenario",      "periods_ms",   "sector_counts", "ratios",
                                        "fixed_bs_sectors", "slots",     "realizations",  "seed",
                                        "node_policy",   "leaf_policy",  "env"};

}  // namespace

ConfigResult validate_config(const json& document) {
  ConfigResult out;
  Validator check(out);

  if (document.is_null()) {
    out.config = default_config(1);
    return out;
  }
  if (!document.is_object()) {
    out.config = default_config(1);
    check.issue("", "configuration must be a JSON object");
    return out;
  }

  int scenario = 1;
  if (auto it = document.find("scenario"); it != document.end()) {
    if (auto s = check.integer(*it, "scenario", 1, 3)) scenario = static_cast<int>(*s);
  }
  out.config = default_config(scenario);
  ScenarioConfig& cfg = out.config;

  for (auto it = document.begin(); it != document.end(); ++it) {
    if (!kTopKeys.count(it.key())) check.issue(it.key(), "unknown key");
  }

  if (auto it = document.find("periods_ms"); it != document.end()) {
    if (!it->is_array() || it->empty()) {
      check.issue("periods_ms", "expected a non-empty array of periods");
    } else {
      std::vector<double> periods;
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (auto v = check.real((*it)[i], "periods_ms[" + std::to_string(i) + "]", {0, kInf, true}))
          periods.push_back(*v);
      }
      if (periods.size() == it->size()) cfg.periods_ms = periods;
    }
  }

  if (auto it = document.find("sector_counts"); it != document.end()) {
    if (!it->is_array() || it->empty()) {
      check.issue("sector_counts", "expected a non-empty array of sector counts");
    } else {
      std::vector<int> counts;
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (auto v = check.integer((*it)[i], "sector_counts[" + std::to_string(i) + "]", 1, 1 << 16))
          counts.push_back(static_cast<int>(*v));
      }
      if (counts.size() == it->size()) cfg.sector_counts = counts;
    }
  }

  if (auto it = document.find("fixed_bs_sectors"); it != document.end()) {
    if (auto v = check.integer(*it, "fixed_bs_sectors", 1, 1 << 16)) cfg.fixed_bs_sectors = static_cast<int>(*v);
  }
  if (auto it = document.find("slots"); it != document.end()) {
    if (auto v = check.integer(*it, "slots", 1)) cfg.slots = static_cast<std::size_t>(*v);
  }
  if (auto it = document.find("realizations"); it != document.end()) {
    if (auto v = check.integer(*it, "realizations", 1)) cfg.realizations = static_cast<std::size_t>(*v);
  }
  if (auto it = document.find("seed"); it != document.end()) {
    if (it->is_number_unsigned()) {
      cfg.seed = it->get<std::uint64_t>();
    } else if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(it->get<std::int64_t>());
    } else {
      check.issue("seed", "expected a non-negative 64-bit integer");
    }
  }
  if (auto it = document.find("node_policy"); it != document.end()) {
    if (auto k = check.policy(*it, "node_policy", true)) cfg.node_policy = *k;
  }
  if (auto it = document.find("leaf_policy"); it != document.end()) {
    if (auto k = check.policy(*it, "leaf_policy", true)) cfg.leaf_policy = *k;
  }

  if (auto it = document.find("env"); it != document.end()) {
    if (!it->is_object()) {
      check.issue("env", "expected an object");
    } else {
      std::set<std::string> known{"ue_sectors"};
      for (const auto& f : env_real_fields()) {
        known.insert(f.name);
        if (auto v = it->find(f.name); v != it->end()) {
          if (auto d = check.real(*v, std::string("env.") + f.name, f.range)) f.ref(cfg.env) = *d;
        }
      }
      if (auto v = it->find("ue_sectors"); v != it->end()) {
        if (auto n = check.integer(*v, "env.ue_sectors", 1, 1 << 16)) cfg.env.ue_sectors = static_cast<int>(*n);
      }
      for (auto e = it->begin(); e != it->end(); ++e) {
        if (!known.count(e.key())) check.issue("env." + e.key(), "unknown key");
      }
      if (cfg.env.speed_max_mps < cfg.env.speed_min_mps)
        check.issue("env.speed_max_mps", "must be >= env.speed_min_mps");
    }
  }

  // Ratios last: integrality depends on the codebooks in use.
  if (auto it = document.find("ratios"); it != document.end()) {
    if (!it->is_array() || it->empty()) {
      check.issue("ratios", "expected a non-empty array of ratios");
    } else {
      std::vector<Ratio> ratios;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = "ratios[" + std::to_string(i) + "]";
        auto r = check.ratio((*it)[i], path);
        if (!r) continue;
        std::vector<int> codebooks =
            cfg.scenario == 1 ? std::vector<int>{cfg.fixed_bs_sectors} : cfg.sector_counts;
        bool ok = true;
        for (int n : codebooks) {
          if (!r->integral_for(n)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "ratio %s gives %g beams for %d sectors; N_s*R must be an integer",
                          r->str().c_str(), n * r->value(), n);
            check.issue(path, buf);
            ok = false;
            break;
          }
        }
        if (ok) ratios.push_back(*r);
      }
      if (ratios.size() == it->size()) cfg.ratios = ratios;
    }
  }

  if (out.ok()) {
    const json resolved = config_to_json(cfg);
    for (auto it = document.begin(); it != document.end(); ++it) {
      if (it.key() == "env") {
        json env = json::object();
        for (auto e = it->begin(); e != it->end(); ++e) env[e.key()] = resolved["env"][e.key()];
        out.overrides["env"] = env;
      } else {
        out.overrides[it.key()] = resolved[it.key()];
      }
    }
  }
  return out;
}

json config_to_json(const ScenarioConfig& config) {
  json j;
  j["scenario"] = config.scenario;
  j["periods_ms"] = config.periods_ms;
  j["sector_counts"] = config.sector_counts;
  json ratios = json::array();
  for (const auto& r : config.ratios) ratios.push_back(r.str());
  j["ratios"] = ratios;
  j["fixed_bs_sectors"] = config.fixed_bs_sectors;
  j["slots"] = config.slots;
  j["realizations"] = config.realizations;
  j["seed"] = config.seed;
  j["node_policy"] = std::string(policy_name(config.node_policy));
  j["leaf_policy"] = std::string(policy_name(config.leaf_policy));
  json env = json::object();
  EnvParams copy = config.env;
  for (const auto& f : env_real_fields()) env[f.name] = f.ref(copy);
  env["ue_sectors"] = config.env.ue_sectors;
  j["env"] = env;
  return j;
}

json config_schema() {
  auto number = [](const Range& r) {
    json s{{"type", "number"}};
    if (r.lo != -kInf) s[r.lo_open ? "exclusiveMinimum" : "minimum"] = r.lo;
    if (r.hi != kInf) s["maximum"] = r.hi;
    return s;
  };
  const json policy_names = {"random", "ucb1", "klucb"};
  json env_props = json::object();
  const EnvParams defaults;
  for (const auto& f : env_real_fields()) {
    json s = number(f.range);
    EnvParams copy = defaults;
    s["default"] = f.ref(copy);
    env_props[f.name] = s;
  }
  env_props["ue_sectors"] = {{"type", "integer"}, {"minimum", 1}, {"default", defaults.ue_sectors}};

  json schema;
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "beamband scenario configuration";
  schema["type"] = "object";
  schema["additionalProperties"] = false;
  schema["properties"] = {
      {"scenario", {{"type", "integer"}, {"enum", {1, 2, 3}}, {"default", 1}}},
      {"periods_ms",
       {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "number"}, {"exclusiveMinimum", 0}}}}},
      {"sector_counts", {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "integer"}, {"minimum", 1}}}}},
      {"ratios",
       {{"type", "array"},
        {"minItems", 1},
        {"description", "sweep ratios in (0, 1]; N_s*R must be an integer for every codebook in use"},
        {"items", {{"type", {"string", "number"}}, {"pattern", "^[0-9]+(/[0-9]+|\\.[0-9]+)?$"}}}}},
      {"fixed_bs_sectors", {{"type", "integer"}, {"minimum", 1}, {"default", 256}}},
      {"slots", {{"type", "integer"}, {"minimum", 1}, {"description", "default 500, 300 for scenario 3"}}},
      {"realizations", {{"type", "integer"}, {"minimum", 1}, {"default", 500}}},
      {"seed", {{"type", "integer"}, {"minimum", 0}, {"default", 0}}},
      {"node_policy", {{"enum", policy_names}, {"default", "klucb"}}},
      {"leaf_policy", {{"enum", policy_names}, {"default", "ucb1"}}},
      {"env", {{"type", "object"}, {"additionalProperties", false}, {"properties", env_props}}},
  };
  return schema;
}

}  // namespace beamband
