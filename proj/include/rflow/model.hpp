#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rflow/errors.hpp"
#include "rflow/rng.hpp"

namespace rflow {

enum class Activation { Silu, Tanh };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Fully connected velocity predictor: the flattened state is concatenated
// with time features of the step size, passed through hidden layers, and the
// final affine layer emits a velocity of the same dimension as the state.
struct ModelArch {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_dims = {128, 128, 128};
    std::size_t fourier_bands = 6;
    Activation activation = Activation::Silu;

    std::size_t feature_dim() const { return 2 * fourier_bands + 2; }
    // (out, in) per layer, input to output.
    std::vector<std::pair<std::size_t, std::size_t>> layer_shapes() const;

    bool operator==(const ModelArch&) const = default;
};

void validate_arch(const ModelArch& arch);

// [dt, e^{-dt}, sin(2^k pi dt), cos(2^k pi dt) for k = 0..bands-1]; dt > 0.
std::vector<double> time_features(double dt, std::size_t bands);

struct Layer {
    std::size_t out = 0;
    std::size_t in = 0;
    std::vector<float> weights;  // row-major (out, in)
    std::vector<float> bias;     // (out)
};

struct ModelParams {
    ModelArch arch;
    std::vector<Layer> layers;

    std::size_t parameter_count() const;
};

// Uniform init in +-sqrt(6 / (fan_in + fan_out)), biases zero, drawn from the
// given state in layer order (weights row-major).
ModelParams init_params(const ModelArch& arch, RngState state);

// Cached intermediate values of one forward pass, consumed by backward.
struct ForwardTrace {
    double dt = 0.0;
    std::vector<double> input;                       // x concatenated with time features
    std::vector<std::vector<double>> pre_acts;       // per layer, before activation
    std::vector<std::vector<double>> activations;    // per layer, after activation (last = output)
};

// Parameters are stored in 32-bit floats; all forward/backward arithmetic
// runs in 64-bit.
std::vector<double> forward(const ModelParams& params, std::span<const double> x, double dt);
std::vector<double> forward(const ModelParams& params, std::span<const double> x, double dt,
                            ForwardTrace& trace);

struct ModelGrads {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;

    static ModelGrads zeros_like(const ModelParams& params);
    void accumulate(const ModelGrads& other);
    bool all_finite() const;
};

// Exact gradients of sum(upstream . output) with respect to every parameter;
// pass upstream = dL/d(output) to get loss gradients.
ModelGrads backward(const ModelParams& params, const ForwardTrace& trace,
                    std::span<const double> upstream);
ModelGrads backward(const ModelParams& params, std::span<const double> x, double dt,
                    std::span<const double> upstream);

struct AdamState {
    std::vector<std::vector<float>> m_w, v_w, m_b, v_b;
    std::int64_t step = 0;

    static AdamState zeros_like(const ModelParams& params);
};

// Standard bias-corrected Adam update. Rejects non-finite gradients.
void adam_step(ModelParams& params, const ModelGrads& grads, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

// Checkpoint container: magic "RFCKPT1\n", little-endian u64 header length,
// UTF-8 JSON header, then raw little-endian f32 parameters layer by layer
// (weights then bias). Round-trips bit-exactly.
void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace rflow
