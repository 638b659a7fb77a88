#include "rflow/trainer.hpp"

#include <chrono>
#include <cmath>

#include "rflow/cot.hpp"

namespace rflow {

namespace {

constexpr double kDtMinClamp = 1e-4;
constexpr double kDtMaxClamp = 5.0;

// Coupled absolute quality levels are drawn log-uniformly from this window.
constexpr double kCoupledTimeLo = 0.1;
constexpr double kCoupledTimeHi = 3.0;

// Keeps the noisier endpoint of a coupled pair at strictly positive time.
constexpr double kMinTimeGap = 1e-3;

constexpr std::uint64_t kInitStreamTag = 0x1A171;

}  // namespace

const char* to_string(TrainMode mode) {
    switch (mode) {
        case TrainMode::FmLinear: return "fm_linear";
        case TrainMode::FmCot: return "fm_cot";
        case TrainMode::FmSvf: return "fm_svf";
        case TrainMode::RelativeFlow: return "relativeflow";
    }
    return "?";
}

TrainMode train_mode_from_string(const std::string& s) {
    if (s == "fm_linear") return TrainMode::FmLinear;
    if (s == "fm_cot") return TrainMode::FmCot;
    if (s == "fm_svf") return TrainMode::FmSvf;
    if (s == "relativeflow") return TrainMode::RelativeFlow;
    throw ValidationError("unknown train mode '" + s +
                          "' (expected fm_linear|fm_cot|fm_svf|relativeflow)");
}

const char* to_string(Supervision sup) {
    return sup == Supervision::Coupled ? "coupled" : "blind_degrade";
}

Supervision supervision_from_string(const std::string& s) {
    if (s == "coupled") return Supervision::Coupled;
    if (s == "blind_degrade") return Supervision::BlindDegrade;
    throw ValidationError("unknown supervision '" + s + "' (expected coupled|blind_degrade)");
}

void validate_config(const TrainConfig& cfg) {
    if (!(cfg.dt_min0 > 0.0 && cfg.dt_min0 <= cfg.dt_max0))
        throw ValidationError("train config: need 0 < dt_min0 <= dt_max0");
    if (!(cfg.alpha_decay > 0.0)) throw ValidationError("train config: alpha_decay must be > 0");
    if (!(cfg.lr > 0.0)) throw ValidationError("train config: lr must be > 0");
    if (cfg.batch_size == 0) throw ValidationError("train config: batch_size must be >= 1");
    validate_spec(cfg.degradation);
}

DtRange dt_range_for_epoch(const TrainConfig& cfg, std::size_t epoch) {
    DtRange range{cfg.dt_min0, cfg.dt_max0};
    for (std::size_t e = 0; e < epoch; ++e) {
        range.lo = std::max(kDtMinClamp, range.lo * cfg.alpha_decay);
        range.hi = std::min(kDtMaxClamp, range.hi / cfg.alpha_decay);
    }
    return range;
}

Rng step_rng(std::uint64_t seed, std::size_t epoch, std::size_t step) {
    return Rng(RngState{seed, mix64(epoch, step)});
}

TrainExample coupled_example(const Field& x0, const Field& x_inf, double t, double dt) {
    if (!(dt > 0.0) || !(t >= dt))
        throw ValidationError("coupled_example: need 0 < dt <= t");
    const ConditionalPathSpec path{x0, x_inf};
    TrainExample ex;
    ex.pair.x_noisier = conditional_point(path, t - dt);
    ex.pair.x_cleaner = conditional_point(path, t);
    ex.pair.dt = dt;
    ex.input = ex.pair.x_noisier;
    ex.conditioning = dt;
    ex.target = target_velocity(ex.pair);
    return ex;
}

namespace {

double sample_dt(DtRange range, Rng& rng) {
    // Contracting schedules can cross the endpoints; sample the unordered span.
    const double lo = std::min(range.lo, range.hi);
    const double hi = std::max(range.lo, range.hi);
    return rng.uniform(lo, hi);
}

const Field& draw_reference(const DataSource& data, Rng& rng) {
    if (data.references.empty()) throw ValidationError("make_pair: empty dataset");
    return data.references[rng.uniform_index(data.references.size())];
}

Field draw_clean_endpoint(const DataSource& data, Rng& rng) {
    if (!data.references.empty()) return draw_reference(data, rng);
    if (data.draw_target) return data.draw_target(rng);
    throw ValidationError("make_pair: empty dataset");
}

Field draw_source_point(const DataSource& data, Rng& rng) {
    if (!data.draw_source) throw ValidationError("make_pair: no source sampler");
    return data.draw_source(rng);
}

}  // namespace

TrainExample make_pair(const DataSource& data, const TrainConfig& cfg, DtRange range, Rng& rng) {
    switch (cfg.mode) {
        case TrainMode::RelativeFlow: {
            const double dt = sample_dt(range, rng);
            if (cfg.supervision == Supervision::Coupled) {
                if (!data.draw_source || !data.draw_target)
                    throw ValidationError("make_pair: coupled mode needs source and target samplers");
                const Field x0 = data.draw_source(rng);
                const Field x_inf = data.draw_target(rng);
                double t = rng.log_uniform(kCoupledTimeLo, kCoupledTimeHi);
                t = std::max(t, dt + kMinTimeGap);
                return coupled_example(x0, x_inf, t, dt);
            }
            const Field& ref = draw_reference(data, rng);
            TrainExample ex;
            ex.pair.x_cleaner = ref;
            ex.pair.x_noisier = degrade(ref, dt, cfg.degradation, rng);
            ex.pair.dt = dt;
            ex.input = ex.pair.x_noisier;
            ex.conditioning = dt;
            ex.target = target_velocity(ex.pair);
            return ex;
        }
        case TrainMode::FmLinear: {
            const Field x0 = draw_source_point(data, rng);
            const Field x1 = draw_clean_endpoint(data, rng);
            require_same_shape(x0, x1, "make_pair");
            const double s = rng.uniform(1e-3, 1.0);
            TrainExample ex;
            ex.input = Field(x0.rows, x0.cols);
            ex.target = Field(x0.rows, x0.cols);
            for (std::size_t i = 0; i < x0.size(); ++i) {
                ex.input[i] = (1.0 - s) * x0[i] + s * x1[i];
                ex.target[i] = x1[i] - x0[i];
            }
            ex.conditioning = s;
            ex.pair = SupervisionPair{ex.input, x1, s};
            return ex;
        }
        case TrainMode::FmCot: {
            const Field x0 = draw_source_point(data, rng);
            const Field x_inf = draw_clean_endpoint(data, rng);
            const double t = rng.log_uniform(kCoupledTimeLo, kCoupledTimeHi);
            const ConditionalPathSpec path{x0, x_inf};
            TrainExample ex;
            ex.input = conditional_point(path, t);
            ex.target = Field(x0.rows, x0.cols);
            const double w = std::exp(-t);
            for (std::size_t i = 0; i < x0.size(); ++i) ex.target[i] = w * (x_inf[i] - x0[i]);
            ex.conditioning = t;
            ex.pair = SupervisionPair{ex.input, x_inf, t};
            return ex;
        }
        case TrainMode::FmSvf: {
            const double dt = sample_dt(range, rng);
            const Field& ref = draw_reference(data, rng);
            TrainExample ex;
            ex.pair.x_cleaner = ref;
            ex.pair.x_noisier = degrade(ref, dt, cfg.degradation, rng);
            ex.pair.dt = dt;
            ex.input = ex.pair.x_noisier;
            ex.conditioning = dt;
            ex.target = Field(ref.rows, ref.cols);
            for (std::size_t i = 0; i < ref.size(); ++i)
                ex.target[i] = (ref[i] - ex.pair.x_noisier[i]) / dt;
            return ex;
        }
    }
    throw ValidationError("make_pair: unknown mode");
}

ModelParams initial_params(const TrainConfig& cfg, const ModelArch& arch) {
    return init_params(arch, RngState{cfg.seed, kInitStreamTag});
}

TrainResult train(const TrainConfig& cfg, const ModelArch& arch, const DataSource& data) {
    validate_config(cfg);
    validate_arch(arch);
    const auto t_start = std::chrono::steady_clock::now();

    TrainResult result;
    result.params = initial_params(cfg, arch);
    AdamState opt = AdamState::zeros_like(result.params);

    TrainReport& report = result.report;
    report.mode = to_string(cfg.mode);
    report.supervision = to_string(cfg.supervision);
    report.seed = cfg.seed;

    DtRange range{cfg.dt_min0, cfg.dt_max0};
    const double inv_batch = 1.0 / static_cast<double>(cfg.batch_size);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        report.epoch_dt_min.push_back(range.lo);
        report.epoch_dt_max.push_back(range.hi);

        double loss_sum = 0.0;
        for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
            Rng rng = step_rng(cfg.seed, epoch, step);
            ModelGrads grads = ModelGrads::zeros_like(result.params);
            double batch_loss = 0.0;
            ForwardTrace trace;
            std::vector<double> upstream;
            for (std::size_t b = 0; b < cfg.batch_size; ++b) {
                const TrainExample ex = make_pair(data, cfg, range, rng);
                const std::vector<double> out =
                    forward(result.params, ex.input.data, ex.conditioning, trace);
                upstream.resize(out.size());
                for (std::size_t i = 0; i < out.size(); ++i) {
                    const double diff = out[i] - ex.target[i];
                    batch_loss += diff * diff;
                    upstream[i] = 2.0 * inv_batch * diff;
                }
                grads.accumulate(backward(result.params, trace, upstream));
            }
            batch_loss *= inv_batch;
            if (!std::isfinite(batch_loss))
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   " step " + std::to_string(step));
            adam_step(result.params, grads, opt, cfg.lr);
            loss_sum += batch_loss;
        }
        report.epoch_loss.push_back(
            cfg.steps_per_epoch ? loss_sum / static_cast<double>(cfg.steps_per_epoch) : 0.0);

        range.lo = std::max(kDtMinClamp, range.lo * cfg.alpha_decay);
        range.hi = std::min(kDtMaxClamp, range.hi / cfg.alpha_decay);
    }
    report.final_dt_min = range.lo;
    report.final_dt_max = range.hi;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

}  // namespace rflow
