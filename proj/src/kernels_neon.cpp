#include <arm_neon.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband::kernels::neon {

bool available() noexcept { return true; }

void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out) {
  if (out.size() < boresights.size()) throw PreconditionError("sector_gains: output too small");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kInvTwoPi = 1.0 / kTwoPi;

  const float64x2_t two_pi = vdupq_n_f64(kTwoPi);
  const float64x2_t inv_two_pi = vdupq_n_f64(kInvTwoPi);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t tgt = vdupq_n_f64(target);
  const float64x2_t hw = vdupq_n_f64(half_width);
  const float64x2_t mainv = vdupq_n_f64(main_dbi);
  const float64x2_t sidev = vdupq_n_f64(side_dbi);

  const std::size_t n = boresights.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(tgt, vld1q_f64(boresights.data() + i));
    const float64x2_t k = vrndmq_f64(vaddq_f64(vmulq_f64(d, inv_two_pi), half));
    const float64x2_t wrapped = vsubq_f64(d, vmulq_f64(two_pi, k));
    const uint64x2_t inside = vcleq_f64(vabsq_f64(wrapped), hw);
    vst1q_f64(out.data() + i, vbslq_f64(inside, mainv, sidev));
  }
  if (i < n) {
    scalar::sector_gains(boresights.subspan(i), target, half_width, main_dbi, side_dbi,
                         out.subspan(i));
  }
}

void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out) {
  if (pulls.size() != means.size() || out.size() < means.size()) {
    throw PreconditionError("ucb1_indices: size mismatch");
  }
  const float64x2_t numer = vdupq_n_f64(two_log_total);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t inf = vdupq_n_f64(std::numeric_limits<double>::infinity());

  const std::size_t n = means.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(pulls.data() + i);
    const float64x2_t m = vld1q_f64(means.data() + i);
    const float64x2_t idx = vaddq_f64(m, vsqrtq_f64(vdivq_f64(numer, p)));
    vst1q_f64(out.data() + i, vbslq_f64(vceqq_f64(p, zero), inf, idx));
  }
  if (i < n) {
    scalar::ucb1_indices(means.subspan(i), pulls.subspan(i), two_log_total, out.subspan(i));
  }
}

}  // namespace beamband::kernels::neon
