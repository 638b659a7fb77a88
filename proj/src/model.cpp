#include "rflow/model.hpp"

#include <cmath>
#include <numbers>

#include "rflow/storage.hpp"

namespace rflow {

namespace {

constexpr const char* kCheckpointMagic = "RFCKPT1\n";

double silu(double x) { return x / (1.0 + std::exp(-x)); }

double silu_grad(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

double activate(Activation a, double x) { return a == Activation::Silu ? silu(x) : std::tanh(x); }

double activate_grad(Activation a, double x) {
    if (a == Activation::Silu) return silu_grad(x);
    const double th = std::tanh(x);
    return 1.0 - th * th;
}

}  // namespace

const char* to_string(Activation a) { return a == Activation::Silu ? "silu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
    if (s == "silu") return Activation::Silu;
    if (s == "tanh") return Activation::Tanh;
    throw ValidationError("unknown activation '" + s + "' (expected silu|tanh)");
}

std::vector<std::pair<std::size_t, std::size_t>> ModelArch::layer_shapes() const {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    std::size_t in = input_dim + feature_dim();
    for (std::size_t h : hidden_dims) {
        shapes.emplace_back(h, in);
        in = h;
    }
    shapes.emplace_back(input_dim, in);
    return shapes;
}

void validate_arch(const ModelArch& arch) {
    if (arch.input_dim == 0) throw ValidationError("model arch: input_dim must be >= 1");
    if (arch.fourier_bands == 0) throw ValidationError("model arch: fourier_bands must be >= 1");
    for (std::size_t h : arch.hidden_dims)
        if (h == 0) throw ValidationError("model arch: hidden dims must be >= 1");
}

std::vector<double> time_features(double dt, std::size_t bands) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("time_features: dt must be finite and > 0");
    if (bands == 0) throw ValidationError("time_features: bands must be >= 1");
    std::vector<double> f(2 * bands + 2);
    f[0] = dt;
    f[1] = std::exp(-dt);
    double freq = std::numbers::pi * dt;
    for (std::size_t k = 0; k < bands; ++k) {
        f[2 + 2 * k] = std::sin(freq);
        f[3 + 2 * k] = std::cos(freq);
        freq *= 2.0;
    }
    return f;
}

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

ModelParams init_params(const ModelArch& arch, RngState state) {
    validate_arch(arch);
    Rng rng(state);
    ModelParams params;
    params.arch = arch;
    for (const auto& [out, in] : arch.layer_shapes()) {
        Layer layer;
        layer.out = out;
        layer.in = in;
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        layer.weights.resize(out * in);
        for (float& w : layer.weights) w = static_cast<float>(rng.uniform(-limit, limit));
        layer.bias.assign(out, 0.0f);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

namespace {

void check_input(const ModelParams& params, std::span<const double> x) {
    if (params.layers.empty()) throw ValidationError("model: no layers");
    if (x.size() != params.arch.input_dim)
        throw ValidationError("model: input length " + std::to_string(x.size()) +
                              " does not match input_dim " + std::to_string(params.arch.input_dim));
}

}  // namespace

std::vector<double> forward(const ModelParams& params, std::span<const double> x, double dt,
                            ForwardTrace& trace) {
    check_input(params, x);
    trace.dt = dt;
    trace.input.assign(x.begin(), x.end());
    const std::vector<double> feats = time_features(dt, params.arch.fourier_bands);
    trace.input.insert(trace.input.end(), feats.begin(), feats.end());

    trace.pre_acts.clear();
    trace.activations.clear();
    const std::vector<double>* cur = &trace.input;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const Layer& layer = params.layers[l];
        if (cur->size() != layer.in) throw ValidationError("model: layer dimension mismatch");
        std::vector<double> pre(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double acc = static_cast<double>(layer.bias[o]);
            const float* row = layer.weights.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                acc += static_cast<double>(row[i]) * (*cur)[i];
            pre[o] = acc;
        }
        const bool last = (l + 1 == params.layers.size());
        std::vector<double> act(layer.out);
        if (last) {
            act = pre;
        } else {
            for (std::size_t o = 0; o < layer.out; ++o)
                act[o] = activate(params.arch.activation, pre[o]);
        }
        trace.pre_acts.push_back(std::move(pre));
        trace.activations.push_back(std::move(act));
        cur = &trace.activations.back();
    }
    return trace.activations.back();
}

std::vector<double> forward(const ModelParams& params, std::span<const double> x, double dt) {
    ForwardTrace trace;
    return forward(params, x, dt, trace);
}

ModelGrads ModelGrads::zeros_like(const ModelParams& params) {
    ModelGrads g;
    for (const Layer& l : params.layers) {
        g.weights.emplace_back(l.weights.size(), 0.0);
        g.bias.emplace_back(l.bias.size(), 0.0);
    }
    return g;
}

void ModelGrads::accumulate(const ModelGrads& other) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += other.weights[l][i];
        for (std::size_t i = 0; i < bias[l].size(); ++i) bias[l][i] += other.bias[l][i];
    }
}

bool ModelGrads::all_finite() const {
    for (const auto& w : weights)
        for (double v : w)
            if (!std::isfinite(v)) return false;
    for (const auto& b : bias)
        for (double v : b)
            if (!std::isfinite(v)) return false;
    return true;
}

ModelGrads backward(const ModelParams& params, const ForwardTrace& trace,
                    std::span<const double> upstream) {
    const std::size_t n_layers = params.layers.size();
    if (trace.activations.size() != n_layers)
        throw ValidationError("backward: trace does not match model");
    if (upstream.size() != params.arch.input_dim)
        throw ValidationError("backward: upstream gradient dimension mismatch");

    ModelGrads grads = ModelGrads::zeros_like(params);
    std::vector<double> delta(upstream.begin(), upstream.end());

    for (std::size_t li = n_layers; li-- > 0;) {
        const Layer& layer = params.layers[li];
        const std::vector<double>& below =
            li == 0 ? trace.input : trace.activations[li - 1];

        // delta currently holds dL/d(pre-activation of layer li); the final
        // layer is affine so the incoming upstream needs no activation factor.
        for (std::size_t o = 0; o < layer.out; ++o) {
            grads.bias[li][o] += delta[o];
            double* wrow = grads.weights[li].data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) wrow[i] += delta[o] * below[i];
        }
        if (li == 0) break;

        std::vector<double> next(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const float* row = layer.weights.data() + o * layer.in;
            const double d = delta[o];
            for (std::size_t i = 0; i < layer.in; ++i) next[i] += static_cast<double>(row[i]) * d;
        }
        // Restrict to the activated part of the layer below.
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] *= activate_grad(params.arch.activation, trace.pre_acts[li - 1][i]);
        delta = std::move(next);
    }
    return grads;
}

ModelGrads backward(const ModelParams& params, std::span<const double> x, double dt,
                    std::span<const double> upstream) {
    ForwardTrace trace;
    forward(params, x, dt, trace);
    return backward(params, trace, upstream);
}

AdamState AdamState::zeros_like(const ModelParams& params) {
    AdamState s;
    for (const Layer& l : params.layers) {
        s.m_w.emplace_back(l.weights.size(), 0.0f);
        s.v_w.emplace_back(l.weights.size(), 0.0f);
        s.m_b.emplace_back(l.bias.size(), 0.0f);
        s.v_b.emplace_back(l.bias.size(), 0.0f);
    }
    return s;
}

namespace {

void adam_update(std::vector<float>& p, const std::vector<double>& g, std::vector<float>& m,
                 std::vector<float>& v, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double gi = g[i];
        const double mi = beta1 * static_cast<double>(m[i]) + (1.0 - beta1) * gi;
        const double vi = beta2 * static_cast<double>(v[i]) + (1.0 - beta2) * gi * gi;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        const double m_hat = mi / bc1;
        const double v_hat = vi / bc2;
        p[i] = static_cast<float>(static_cast<double>(p[i]) - lr * m_hat / (std::sqrt(v_hat) + eps));
    }
}

}  // namespace

void adam_step(ModelParams& params, const ModelGrads& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
    if (!(lr > 0.0)) throw ValidationError("adam_step: lr must be > 0");
    if (grads.weights.size() != params.layers.size())
        throw ValidationError("adam_step: gradient layout mismatch");
    if (!grads.all_finite()) throw NumericError("adam_step: non-finite gradients");

    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        adam_update(params.layers[l].weights, grads.weights[l], state.m_w[l], state.v_w[l], lr,
                    beta1, beta2, eps, bc1, bc2);
        adam_update(params.layers[l].bias, grads.bias[l], state.m_b[l], state.v_b[l], lr, beta1,
                    beta2, eps, bc1, bc2);
    }
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : params.layers) layers.push_back({{"out", l.out}, {"in", l.in}});
    nlohmann::json header = {
        {"arch",
         {{"input_dim", params.arch.input_dim},
          {"hidden_dims", params.arch.hidden_dims},
          {"fourier_bands", params.arch.fourier_bands},
          {"activation", to_string(params.arch.activation)}}},
        {"layers", layers},
        {"dtype", "f32"},
        {"endianness", "LE"},
    };
    std::vector<float> payload;
    payload.reserve(params.parameter_count());
    for (const Layer& l : params.layers) {
        payload.insert(payload.end(), l.weights.begin(), l.weights.end());
        payload.insert(payload.end(), l.bias.begin(), l.bias.end());
    }
    write_framed_f32(path, kCheckpointMagic, header, payload);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
    const FramedFile f = read_framed_f32(path, kCheckpointMagic);
    ModelParams params;
    try {
        const nlohmann::json& arch = f.header.at("arch");
        params.arch.input_dim = arch.at("input_dim").get<std::size_t>();
        params.arch.hidden_dims = arch.at("hidden_dims").get<std::vector<std::size_t>>();
        params.arch.fourier_bands = arch.at("fourier_bands").get<std::size_t>();
        params.arch.activation = activation_from_string(arch.at("activation").get<std::string>());
        if (f.header.value("dtype", "") != "f32" || f.header.value("endianness", "") != "LE")
            throw IoError("checkpoint header mismatch in '" + path.string() + "': dtype/endianness");
    } catch (const nlohmann::json::exception& e) {
        throw IoError("checkpoint header mismatch in '" + path.string() + "': " + e.what());
    }
    validate_arch(params.arch);

    const auto shapes = params.arch.layer_shapes();
    if (f.header.contains("layers")) {
        const nlohmann::json& layers = f.header.at("layers");
        if (layers.size() != shapes.size())
            throw IoError("checkpoint header mismatch in '" + path.string() + "': layer count");
        for (std::size_t l = 0; l < shapes.size(); ++l) {
            if (layers[l].value("out", std::size_t{0}) != shapes[l].first ||
                layers[l].value("in", std::size_t{0}) != shapes[l].second)
                throw IoError("checkpoint header mismatch in '" + path.string() + "': layer shape");
        }
    }

    std::size_t expected = 0;
    for (const auto& [out, in] : shapes) expected += out * in + out;
    if (f.payload.size() < expected)
        throw IoError("truncated payload in '" + path.string() + "'");
    if (f.payload.size() > expected)
        throw IoError("checkpoint header mismatch in '" + path.string() +
                      "': payload length disagrees with layer sizes");

    std::size_t off = 0;
    for (const auto& [out, in] : shapes) {
        Layer layer;
        layer.out = out;
        layer.in = in;
        layer.weights.assign(f.payload.begin() + static_cast<std::ptrdiff_t>(off),
                             f.payload.begin() + static_cast<std::ptrdiff_t>(off + out * in));
        off += out * in;
        layer.bias.assign(f.payload.begin() + static_cast<std::ptrdiff_t>(off),
                          f.payload.begin() + static_cast<std::ptrdiff_t>(off + out));
        off += out;
        params.layers.push_back(std::move(layer));
    }
    return params;
}

}  // namespace rflow
