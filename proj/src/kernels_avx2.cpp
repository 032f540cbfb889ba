// Built with -mavx2; only reached after the dispatcher has checked the CPU.

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband::kernels::avx2 {

bool available() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}

void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out) {
  if (out.size() < boresights.size()) throw PreconditionError("sector_gains: output too small");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kInvTwoPi = 1.0 / kTwoPi;

  const __m256d two_pi = _mm256_set1_pd(kTwoPi);
  const __m256d inv_two_pi = _mm256_set1_pd(kInvTwoPi);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d tgt = _mm256_set1_pd(target);
  const __m256d hw = _mm256_set1_pd(half_width);
  const __m256d mainv = _mm256_set1_pd(main_dbi);
  const __m256d sidev = _mm256_set1_pd(side_dbi);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

  const std::size_t n = boresights.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(tgt, _mm256_loadu_pd(boresights.data() + i));
    const __m256d k = _mm256_floor_pd(_mm256_add_pd(_mm256_mul_pd(d, inv_two_pi), half));
    const __m256d wrapped = _mm256_sub_pd(d, _mm256_mul_pd(two_pi, k));
    const __m256d offset = _mm256_and_pd(wrapped, abs_mask);
    const __m256d inside = _mm256_cmp_pd(offset, hw, _CMP_LE_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_blendv_pd(sidev, mainv, inside));
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
  const __m256d numer = _mm256_set1_pd(two_log_total);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

  const std::size_t n = means.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(pulls.data() + i);
    const __m256d m = _mm256_loadu_pd(means.data() + i);
    const __m256d idx = _mm256_add_pd(m, _mm256_sqrt_pd(_mm256_div_pd(numer, p)));
    const __m256d unpulled = _mm256_cmp_pd(p, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_blendv_pd(idx, inf, unpulled));
  }
  if (i < n) {
    scalar::ucb1_indices(means.subspan(i), pulls.subspan(i), two_log_total, out.subspan(i));
  }
}

}  // namespace beamband::kernels::avx2
