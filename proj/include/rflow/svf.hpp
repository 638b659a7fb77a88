#pragma once

#include <vector>

#include "rflow/field.hpp"

namespace rflow {

// One observed relative denoising step: the degraded input, the reference it
// was produced from, and the quality gap dt between them.
struct SupervisionPair {
    Field x_noisier;  // degraded input at quality t - dt
    Field x_cleaner;  // reference at quality t
    double dt = 0.0;
};

void validate_pair(const SupervisionPair& pair);

// Velocity supervision from a degradation pair:
//   (x_cleaner - x_noisier) / (e^{dt} - 1).
Field target_velocity(const SupervisionPair& pair);

// Velocity at a point given its clean endpoint: x_inf - x. Test/oracle use
// only; along a conditional path this equals e^{-t}(x_inf - x0).
Field oracle_velocity(const Field& x, const Field& x_inf);

// Mean over the batch of the squared L2 distance between prediction and
// target (sum over elements, no per-element normalization).
double loss_rf(const std::vector<Field>& predictions, const std::vector<Field>& targets);

}  // namespace rflow
