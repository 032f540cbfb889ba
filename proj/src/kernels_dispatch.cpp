#include <atomic>
#include <cstdlib>
#include <string_view>

#include "beamband/kernels.hpp"

namespace beamband::kernels {
namespace {

Isa initial_isa() noexcept {
  // BEAMBAND_KERNELS=scalar pins the reference path for the whole process.
  if (const char* env = std::getenv("BEAMBAND_KERNELS")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  if (avx2::available()) return Isa::kAvx2;
  if (neon::available()) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) noexcept {
  if (isa == Isa::kAvx2 && !avx2::available()) return false;
  if (isa == Isa::kNeon && !neon::available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

void sector_gains(std::span<const double> boresights, double target, double half_width,
                  double main_dbi, double side_dbi, std::span<double> out) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::sector_gains(boresights, target, half_width, main_dbi, side_dbi, out);
    case Isa::kNeon: return neon::sector_gains(boresights, target, half_width, main_dbi, side_dbi, out);
    case Isa::kScalar: break;
  }
  scalar::sector_gains(boresights, target, half_width, main_dbi, side_dbi, out);
}

void ucb1_indices(std::span<const double> means, std::span<const double> pulls,
                  double two_log_total, std::span<double> out) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::ucb1_indices(means, pulls, two_log_total, out);
    case Isa::kNeon: return neon::ucb1_indices(means, pulls, two_log_total, out);
    case Isa::kScalar: break;
  }
  scalar::ucb1_indices(means, pulls, two_log_total, out);
}

}  // namespace beamband::kernels
