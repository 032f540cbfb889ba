#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace beamband {

// Sweep ratio p/q in (0, 1].
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_full() const noexcept { return num == den; }

  // round(n * p / q), half rounded up.
  std::int64_t beams_for(std::int64_t n) const noexcept { return (2 * n * num + den) / (2 * den); }
  bool integral_for(std::int64_t n) const noexcept { return (n * num) % den == 0; }

  std::string str() const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Accepts "p/q", an integer, or a decimal such as "0.25"; reduces to lowest terms.
std::optional<Ratio> parse_ratio(std::string_view text);

}  // namespace beamband
