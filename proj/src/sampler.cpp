#include "rflow/sampler.hpp"

#include <cmath>

namespace rflow {

const char* to_string(StepMode mode) { return mode == StepMode::Euler ? "euler" : "exact"; }

StepMode step_mode_from_string(const std::string& s) {
    if (s == "euler") return StepMode::Euler;
    if (s == "exact") return StepMode::Exact;
    throw ValidationError("unknown step mode '" + s + "' (expected euler|exact)");
}

void validate_schedule(const SampleSchedule& sched) {
    if (sched.steps.empty()) throw ValidationError("sample schedule: empty step list");
    for (double dt : sched.steps)
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw ValidationError("sample schedule: steps must be finite and > 0");
}

SampleSchedule parse_schedule(const std::string& csv, StepMode mode) {
    SampleSchedule sched;
    sched.mode = mode;
    sched.steps.clear();
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string token =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw ValidationError("sample schedule: cannot parse step '" + token + "'");
        }
        if (used != token.size())
            throw ValidationError("sample schedule: cannot parse step '" + token + "'");
        sched.steps.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    validate_schedule(sched);
    return sched;
}

SampleResult sample_with(const VelocityFn& velocity, const Field& x_noisy,
                         const SampleSchedule& sched) {
    validate_schedule(sched);
    SampleResult result;
    result.trajectory.states.push_back(x_noisy);
    Field x = x_noisy;
    for (std::size_t i = 0; i < sched.steps.size(); ++i) {
        const double dt = sched.steps[i];
        const Field u = velocity(x, dt);
        require_same_shape(u, x, "sample velocity");
        if (!u.all_finite())
            throw NumericError("sample: non-finite velocity at step " + std::to_string(i));
        const double multiplier = sched.mode == StepMode::Euler ? dt : std::expm1(dt);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += multiplier * u[j];
        result.trajectory.states.push_back(x);
    }
    result.output = std::move(x);
    return result;
}

VelocityFn model_velocity(const ModelParams& params) {
    const std::size_t dim = params.arch.input_dim;
    return [params, dim](const Field& state, double dt) {
        Field u(state.rows, state.cols);
        if (state.size() == dim) {
            const std::vector<double> out = forward(params, state.data, dt);
            u.data = out;
        } else if (state.cols == dim) {
            std::vector<double> row(dim);
            for (std::size_t r = 0; r < state.rows; ++r) {
                for (std::size_t c = 0; c < dim; ++c) row[c] = state.at(r, c);
                const std::vector<double> out = forward(params, row, dt);
                for (std::size_t c = 0; c < dim; ++c) u.at(r, c) = out[c];
            }
        } else {
            throw ValidationError("sample: state shape incompatible with model input_dim " +
                                  std::to_string(dim));
        }
        return u;
    };
}

SampleResult sample(const ModelParams& params, const Field& x_noisy, const SampleSchedule& sched) {
    return sample_with(model_velocity(params), x_noisy, sched);
}

ResidualFactor residual_factor(const SampleSchedule& sched) {
    if (sched.mode != StepMode::Euler)
        throw ValidationError("residual_factor: defined for Euler stepping only");
    validate_schedule(sched);
    ResidualFactor rf;
    for (double dt : sched.steps) {
        rf.value *= (1.0 - dt);
        if (dt >= 1.0) rf.overshoot = true;
    }
    return rf;
}

}  // namespace rflow
