#pragma once

#include <cstdint>
#include <random>

namespace beamband {

// Purpose tags mixed into derived seeds. Values are part of the output
// contract: changing one changes every trace.
enum class StreamPurpose : std::uint64_t {
  kEnvInit = 0x01,
  kEnvSlot = 0x02,
  kPolicy = 0x03,
  kLeafPolicy = 0x04,
  kSynthetic = 0x05,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Child seed = mix64 chained over (master, realization, purpose, index).
// Adding policies or slots never shifts the seeds of other streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization,
                          StreamPurpose purpose, std::uint64_t index = 0) noexcept;

/// Random stream backed by std::mt19937_64.
///
/// The engine is fully specified by the standard, but the std:: distributions
/// are not, so every variate is produced here from raw 64-bit words. That keeps
/// traces identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  // Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace beamband
