#pragma once

#include <cstdint>

namespace rflow {

// Identifies one reproducible draw sequence. The same (seed, stream) yields
// the identical sequence on every run and platform.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// splitmix64 finalizer; used both for seeding and for deriving independent
// streams (e.g. stream = mix64(base_seed, batch_index)).
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// xoshiro256++ generator seeded through splitmix64. Gaussian draws use the
// polar Box-Muller method; Poisson draws use Knuth's multiplication method
// for small rates and a rounded Gaussian approximation for large ones.
class Rng {
  public:
    explicit Rng(RngState state);
    Rng(std::uint64_t seed, std::uint64_t stream = 0) : Rng(RngState{seed, stream}) {}

    std::uint64_t next_u64();

    double uniform01();  // [0, 1)
    double uniform(double lo, double hi);
    double log_uniform(double lo, double hi);
    std::size_t uniform_index(std::size_t n);  // {0, ..., n-1}

    double gaussian();
    double gaussian(double mean, double stddev);

    std::uint64_t poisson(double rate);

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rflow
