#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "beamband/bandit.hpp"
#include "beamband/kernels.hpp"
#include "beamband/rng.hpp"

using namespace beamband;
namespace k = beamband::kernels;

namespace {

using GainFn = void (*)(std::span<const double>, double, double, double, double, std::span<double>);
using UcbFn = void (*)(std::span<const double>, std::span<const double>, double, std::span<double>);

struct Variant {
  const char* name;
  bool available;
  GainFn gains;
  UcbFn ucb;
};

std::vector<Variant> vector_variants() {
  return {
      {"avx2", k::avx2::available(), &k::avx2::sector_gains, &k::avx2::ucb1_indices},
      {"neon", k::neon::available(), &k::neon::sector_gains, &k::neon::ucb1_indices},
  };
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::vector<double> codebook(int n) {
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = i * (2.0 * std::numbers::pi / n);
  return b;
}

}  // namespace

TEST_CASE("wrap_angle lands in [-pi, pi)") {
  const double pi = std::numbers::pi;
  CHECK(k::wrap_angle(0.0) == 0.0);
  CHECK(k::wrap_angle(2 * pi) == doctest::Approx(0.0));
  CHECK(k::wrap_angle(pi + 0.1) == doctest::Approx(-pi + 0.1));
  CHECK(k::wrap_angle(-3 * pi + 0.2) == doctest::Approx(-pi + 0.2));
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const double w = k::wrap_angle(rng.uniform(-50.0, 50.0));
    CHECK(w >= -pi);
    CHECK(w < pi + 1e-12);
  }
}

TEST_CASE("scalar sector gains follow the flat-top rule") {
  const auto b = codebook(16);
  const double half = std::numbers::pi / 16;
  std::vector<double> out(16);
  k::scalar::sector_gains(b, b[3], half, 13.88, -30.0, out);
  for (int i = 0; i < 16; ++i) CHECK(out[i] == (i == 3 ? 13.88 : -30.0));
  // On the shared edge both neighbours count as mainlobe.
  k::scalar::sector_gains(b, b[3] + half, half, 1.0, 0.0, out);
  CHECK(out[3] == 1.0);
}

TEST_CASE("scalar ucb1 kernel matches the bandit index") {
  std::vector<double> means{0.5, 0.2, 0.9, 0.0};
  std::vector<double> pulls{10, 3, 0, 7};
  std::vector<double> out(4);
  const std::uint64_t total = 100;
  k::scalar::ucb1_indices(means, pulls, 2.0 * std::log(100.0), out);
  for (int i = 0; i < 4; ++i) {
    const double ref = ucb1_index(ArmEstimate{static_cast<std::uint64_t>(pulls[i]), means[i]}, total);
    CHECK(same_bits(out[i], ref));
  }
}

TEST_CASE("vector kernels are bit-identical to scalar") {
  Rng rng(21);
  for (const auto& v : vector_variants()) {
    if (!v.available) continue;
    CAPTURE(v.name);
    for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 255, 512}) {
      const auto b = codebook(n);
      const double half = std::numbers::pi / n;
      std::vector<double> targets{0.0, half, -half, b[n / 2] + half, 7.5 * std::numbers::pi};
      for (int i = 0; i < 40; ++i) targets.push_back(rng.uniform(-20.0, 20.0));
      for (double t : targets) {
        std::vector<double> s(n), x(n);
        k::scalar::sector_gains(b, t, half, 25.92, -30.0, s);
        v.gains(b, t, half, 25.92, -30.0, x);
        for (int i = 0; i < n; ++i) REQUIRE(same_bits(s[i], x[i]));
      }

      std::vector<double> means(n), pulls(n), s(n), x(n);
      for (int i = 0; i < n; ++i) {
        means[i] = rng.uniform();
        pulls[i] = static_cast<double>(rng.uniform_index(4) == 0 ? 0 : 1 + rng.uniform_index(1000));
      }
      for (double two_log : {0.0, 2.0 * std::log(2.0), 2.0 * std::log(12345.0)}) {
        k::scalar::ucb1_indices(means, pulls, two_log, s);
        v.ucb(means, pulls, two_log, x);
        for (int i = 0; i < n; ++i) REQUIRE(same_bits(s[i], x[i]));
      }
    }
  }
}

TEST_CASE("dispatcher honours forcing") {
  const auto before = k::active_isa();
  CHECK(k::force_isa(k::Isa::kScalar));
  CHECK(k::active_isa() == k::Isa::kScalar);
  if (!k::avx2::available()) CHECK_FALSE(k::force_isa(k::Isa::kAvx2));
  if (!k::neon::available()) CHECK_FALSE(k::force_isa(k::Isa::kNeon));
  CHECK(k::force_isa(before));
  CHECK(k::isa_name(k::Isa::kAvx2) == "avx2");
}
