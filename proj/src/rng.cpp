#include "rflow/rng.hpp"

#include <cmath>

#include "rflow/errors.hpp"

namespace rflow {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGolden);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = a + kGolden * (b + 1);
    return splitmix64(state);
}

Rng::Rng(RngState state) {
    std::uint64_t sm = mix64(state.seed, state.stream);
    s_[0] = splitmix64(sm);
    s_[1] = splitmix64(sm);
    s_[2] = splitmix64(sm);
    s_[3] = splitmix64(sm);
    // xoshiro must not start all-zero; splitmix output makes this vanishingly
    // unlikely but guard anyway.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = kGolden;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) {
    if (!(lo <= hi)) throw ValidationError("uniform: lo must be <= hi");
    return lo + uniform01() * (hi - lo);
}

double Rng::log_uniform(double lo, double hi) {
    if (!(lo > 0.0 && lo <= hi)) throw ValidationError("log_uniform: need 0 < lo <= hi");
    return std::exp(std::log(lo) + uniform01() * (std::log(hi) - std::log(lo)));
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw ValidationError("uniform_index: empty range");
    std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

std::uint64_t Rng::poisson(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ValidationError("poisson: rate must be finite and >= 0");
    if (rate == 0.0) return 0;
    if (rate <= 256.0) {
        // Knuth multiplication method.
        const double limit = std::exp(-rate);
        std::uint64_t k = 0;
        double prod = 1.0;
        do {
            prod *= uniform01();
            ++k;
        } while (prod > limit);
        return k - 1;
    }
    // Large rates: rounded Gaussian approximation, clamped at zero. The
    // approximation error is negligible against the Monte-Carlo tolerances
    // used at rates of this size.
    const double draw = std::round(gaussian(rate, std::sqrt(rate)));
    return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(draw);
}

}  // namespace rflow
