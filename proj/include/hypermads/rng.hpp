#pragma once

#include <cstdint>
#include <random>

namespace hypermads {

// Deterministic random source. All sampling maps raw mt19937_64 output to
// doubles by hand (no std::uniform_real_distribution etc.) so that streams
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive (hi >= lo).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  // Standard normal via Marsaglia polar method (deterministic, no libm
  // variance across platforms beyond sqrt/log which are correctly rounded
  // enough in practice).
  double normal();

  // Derive an independent stream for a sub-task.
  Rng fork(std::uint64_t salt) {
    return Rng(gen_() ^ (salt * 0x9E3779B97F4A7C15ull));
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hypermads
