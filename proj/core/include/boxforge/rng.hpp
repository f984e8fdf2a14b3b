#pragma once

#include <cstdint>
#include <random>

namespace boxforge {

// Derives the seed of an independent substream from a master seed.
// Used to key per-image streams by image_id so parallel execution and
// processing order cannot perturb outputs.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id);

// Deterministic generator shared by every randomized operation.
// Distributions are implemented on top of the (standard-specified)
// mt19937_64 bit stream so sequences do not depend on library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller.
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);
  // Beta(a, b) from two gamma draws.
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
};

}  // namespace boxforge
