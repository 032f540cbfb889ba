#include <cmath>
#include <limits>
#include <numbers>

#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband::kernels {

double wrap_angle(double radians) noexcept {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kInvTwoPi = 1.0 / kTwoPi;
  return radians - kTwoPi * std::floor(radians * kInvTwoPi + 0.5);
}

namespace scalar {

void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out) {
  if (out.size() < boresights.size()) throw PreconditionError("sector_gains: output too small");
  for (std::size_t i = 0; i < boresights.size(); ++i) {
    const double offset = std::fabs(wrap_angle(target - boresights[i]));
    out[i] = offset <= half_width ? main_dbi : side_dbi;
  }
}

void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out) {
  if (pulls.size() != means.size() || out.size() < means.size()) {
    throw PreconditionError("ucb1_indices: size mismatch");
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    out[i] = pulls[i] == 0.0 ? std::numeric_limits<double>::infinity()
                             : means[i] + std::sqrt(two_log_total / pulls[i]);
  }
}

}  // namespace scalar

#if !defined(BEAMBAND_HAVE_AVX2)
namespace avx2 {
bool available() noexcept { return false; }
void sector_gains(std::span<const double> b, double t, double h, double m, double s,
                  std::span<double> out) {
  scalar::sector_gains(b, t, h, m, s, out);
}
void ucb1_indices(std::span<const double> m, std::span<const double> p, double l,
                  std::span<double> out) {
  scalar::ucb1_indices(m, p, l, out);
}
}  // namespace avx2
#endif

#if !defined(BEAMBAND_HAVE_NEON)
namespace neon {
bool available() noexcept { return false; }
void sector_gains(std::span<const double> b, double t, double h, double m, double s,
                  std::span<double> out) {
  scalar::sector_gains(b, t, h, m, s, out);
}
void ucb1_indices(std::span<const double> m, std::span<const double> p, double l,
                  std::span<double> out) {
  scalar::ucb1_indices(m, p, l, out);
}
}  // namespace neon
#endif

}  // namespace beamband::kernels
