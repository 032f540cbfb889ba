#include "beamband/output.hpp"

#include <cmath>
#include <cstdio>

#include "beamband/config.hpp"
#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband {

using nlohmann::json;

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_real(double value) {
  if (!std::isfinite(value)) throw ConsistencyError("non-finite value in output");
  if (value == 0.0) value = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << "\r\n"; }

void write_csv_rows(std::ostream& out, std::span<const RunTrace> traces) {
  std::string line;
  for (const auto& trace : traces) {
    const std::string label = csv_field(trace.label);
    const std::string realization = std::to_string(trace.realization_id);
    for (const auto& s : trace.slots) {
      line.clear();
      line += label;
      line += ',';
      line += realization;
      line += ',';
      line += std::to_string(s.slot_index);
      line += ',';
      line += format_real(s.period_ms);
      line += ',';
      line += std::to_string(s.num_sectors);
      line += ',';
      line += csv_field(s.ratio.str());
      line += ',';
      line += format_real(s.effective_rate_gbps);
      line += ',';
      line += format_real(s.normalized_reward);
      line += ',';
      line += format_real(s.cumulative_regret);
      line += "\r\n";
      out << line;
    }
  }
}

namespace {
json arm_json(const ArmConfig& arm) {
  return json{{"period_ms", arm.period_ms}, {"num_sectors", arm.num_sectors}};
}
}  // namespace

json make_meta(const ScenarioConfig& config, const json& overrides, const StaticEvaluation* statics,
               std::span<const PolicySummary> policies) {
  json meta;
  meta["format"] = "beamband-meta/1";
  meta["config"] = config_to_json(config);
  meta["overrides"] = overrides;
  meta["seed"] = config.seed;
  meta["csv_columns"] = json::array();
  {
    std::string_view header = kCsvHeader;
    std::size_t start = 0;
    while (start <= header.size()) {
      auto comma = header.find(',', start);
      if (comma == std::string_view::npos) comma = header.size();
      meta["csv_columns"].push_back(std::string(header.substr(start, comma - start)));
      start = comma + 1;
    }
  }
  meta["kernel_isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  meta["normalization_bps"] = config.env.budget.max_rate_bps();

  if (statics) {
    json arms = json::array();
    for (std::size_t i = 0; i < statics->arms.size(); ++i) {
      json a = arm_json(statics->arms[i]);
      a["index"] = i;
      a["mean_rate_gbps"] = statics->mean_rate_gbps[i];
      a["mean_reward"] = statics->mean_reward[i];
      arms.push_back(a);
    }
    meta["static_arms"] = arms;
    json genius = arm_json(statics->arms[statics->genius]);
    genius["index"] = statics->genius;
    genius["mean_rate_gbps"] = statics->mean_rate_gbps[statics->genius];
    json worst = arm_json(statics->arms[statics->worst]);
    worst["index"] = statics->worst;
    worst["mean_rate_gbps"] = statics->mean_rate_gbps[statics->worst];
    meta["genius"] = genius;
    meta["worst"] = worst;
  }

  json pol = json::array();
  for (const auto& p : policies) {
    pol.push_back({{"label", p.label},
                   {"tail_mean_gbps", p.tail_mean_gbps},
                   {"tail_window", p.tail_window},
                   {"final_mean_cumulative_regret", p.final_cumulative_regret}});
  }
  meta["policies"] = pol;
  return meta;
}

}  // namespace beamband
