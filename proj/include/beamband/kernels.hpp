#pragma once

// Batch arithmetic used in the inner loops: per-beam sector gain during a
// sweep and per-beam UCB1 indices during best-K selection. Each kernel has a
// scalar reference and vector variants that must agree with it bit for bit;
// the implementation is picked once at startup from the CPU's feature set.

#include <span>
#include <string_view>

namespace beamband::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa) noexcept;

// Best variant this CPU and build support.
Isa detected_isa() noexcept;

// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

// Pins the dispatcher to a variant (tests, benchmarking). Returns false and
// leaves the selection untouched when the variant is unavailable.
bool force_isa(Isa isa) noexcept;

// Wraps angle differences into [-pi, pi) as d - 2*pi*floor(d/(2*pi) + 1/2).
double wrap_angle(double radians) noexcept;

// out[i] = main_dbi if |wrap(target - boresight[i])| <= half_width else side_dbi.
void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out);

// out[i] = +inf if pulls[i] == 0 else means[i] + sqrt(two_log_total / pulls[i]).
void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out);

namespace scalar {
void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out);
void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out);
}  // namespace scalar

namespace avx2 {
bool available() noexcept;
void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out);
void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out);
}  // namespace avx2

namespace neon {
bool available() noexcept;
void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out);
void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out);
}  // namespace neon

}  // namespace beamband::kernels
