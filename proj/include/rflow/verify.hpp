#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rflow {

struct IdentityReport {
    std::string name;
    double max_residual = 0.0;
    std::size_t trials = 0;
};

// Randomized sweeps over the closed-form identities the library is built on:
// the transport-path component and composition properties, the agreement of
// the pairwise velocity target with the endpoint velocity, and the oracle
// behavior of both sampler step modes. Each is analytically exact; the
// reported residuals are pure floating-point noise.
std::vector<IdentityReport> run_identity_suite(std::size_t trials, std::uint64_t seed);

}  // namespace rflow
