#include "beamband/ratio.hpp"

#include <charconv>
#include <numeric>

namespace beamband {

std::string Ratio::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {
std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Ratio> reduced(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0) return std::nullopt;
  const std::int64_t g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}
}  // namespace

std::optional<Ratio> parse_ratio(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den) return std::nullopt;
    return reduced(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12) return std::nullopt;
    auto w = whole.empty() ? std::optional<std::int64_t>{0} : parse_int(whole);
    auto f = parse_int(frac);
    if (!w || !f || *w < 0) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return reduced(*w * den + *f, den);
  }
  auto v = parse_int(text);
  if (!v) return std::nullopt;
  return reduced(*v, 1);
}

}  // namespace beamband
