#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "beamband/scenarios.hpp"

namespace beamband {

inline constexpr std::string_view kCsvHeader =
    "policy_label,realization_id,slot_index,period_ms,num_sectors,R,effective_rate_gbps,"
    "normalized_reward,cumulative_regret";

// RFC 4180: quoted when the field holds a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

// %.9g, with -0 printed as 0. Non-finite values throw ConsistencyError.
std::string format_real(double value);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, std::span<const RunTrace> traces);

struct PolicySummary {
  std::string label;
  double tail_mean_gbps = 0.0;
  std::size_t tail_window = 0;
  double final_cumulative_regret = 0.0;
};

// Metadata for one run: the resolved configuration, overrides, seed, static
// arm evaluation and per-policy tail means.
nlohmann::json make_meta(const ScenarioConfig& config, const nlohmann::json& overrides,
                         const StaticEvaluation* statics, std::span<const PolicySummary> policies);

}  // namespace beamband
