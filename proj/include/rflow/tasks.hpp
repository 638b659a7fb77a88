#pragma once

#include "rflow/config.hpp"
#include "rflow/trainer.hpp"

namespace rflow {

// Builds the training inputs for one experiment and remembers the state
// dimension the model must accept.
struct TaskData {
    DataSource data;
    std::size_t input_dim = 0;
};

// 2D transport task: Gaussian source, ring target, heterogeneous reference
// pool at the configured quality levels.
TaskData make_toy_data(const ToyTrainSetup& setup);

// Image task: the reference pool holds degraded copies of the phantom, one
// quality level per reference (cycled).
TaskData make_image_data(const ImageTrainSetup& setup);

TrainResult run_toy_training(const ToyTrainSetup& setup);
TrainResult run_image_training(const ImageTrainSetup& setup);

}  // namespace rflow
