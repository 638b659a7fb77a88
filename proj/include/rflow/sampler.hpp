#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rflow/field.hpp"
#include "rflow/model.hpp"

namespace rflow {

// Euler applies x <- x + dt * u per step; Exact applies x <- x + (e^{dt}-1) * u,
// the per-step multiplier implied by the velocity supervision.
enum class StepMode { Euler, Exact };

const char* to_string(StepMode mode);
StepMode step_mode_from_string(const std::string& s);

struct SampleSchedule {
    std::vector<double> steps = {0.2, 0.1, 0.05};
    StepMode mode = StepMode::Euler;
};

void validate_schedule(const SampleSchedule& sched);

// Parses a comma-separated decimal list, e.g. "0.2,0.1,0.05".
SampleSchedule parse_schedule(const std::string& csv, StepMode mode = StepMode::Euler);

// Initial state plus one state per step.
struct Trajectory {
    std::vector<Field> states;
};

struct SampleResult {
    Field output;
    Trajectory trajectory;
};

using VelocityFn = std::function<Field(const Field& state, double dt)>;

// Core integrator over an arbitrary velocity field.
SampleResult sample_with(const VelocityFn& velocity, const Field& x_noisy,
                         const SampleSchedule& sched);

// Wraps the model as a velocity field. A field whose flat size equals the
// model input dimension is treated as one sample; an Nxd point set with
// d == input_dim is advanced row by row.
VelocityFn model_velocity(const ModelParams& params);

SampleResult sample(const ModelParams& params, const Field& x_noisy, const SampleSchedule& sched);

// Residual multiplier prod(1 - dt_i) of the affine oracle u(x) = x_inf - x
// under Euler stepping. Any dt >= 1 sets the overshoot flag.
struct ResidualFactor {
    double value = 1.0;
    bool overshoot = false;
};

ResidualFactor residual_factor(const SampleSchedule& sched);

}  // namespace rflow
