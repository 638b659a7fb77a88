#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rflow/degradation.hpp"
#include "rflow/field.hpp"
#include "rflow/model.hpp"
#include "rflow/rng.hpp"
#include "rflow/svf.hpp"

namespace rflow {

// Training mode: the full method plus its ablations.
//   FmLinear    - linear path x_s = (1-s) x0 + s x1, target x1 - x0
//   FmCot       - exponential path with endpoint supervision e^{-t}(x_inf - x0)
//   FmSvf       - degradation pairs on a linear path, target (x_t - D(x_t)) / dt
//   RelativeFlow- degradation pairs on the exponential path, target
//                 (x_t - D(x_t)) / (e^{dt} - 1)
enum class TrainMode { FmLinear, FmCot, FmSvf, RelativeFlow };

// Coupled draws exact endpoint pairs from (source, target) samplers;
// BlindDegrade only sees the reference pool through the degradation operator.
enum class Supervision { Coupled, BlindDegrade };

const char* to_string(TrainMode mode);
TrainMode train_mode_from_string(const std::string& s);
const char* to_string(Supervision sup);
Supervision supervision_from_string(const std::string& s);

struct TrainConfig {
    TrainMode mode = TrainMode::RelativeFlow;
    Supervision supervision = Supervision::Coupled;
    std::size_t epochs = 50;
    std::size_t batch_size = 256;
    double lr = 1e-3;
    double alpha_decay = 0.9;
    double dt_min0 = 0.05;
    double dt_max0 = 0.2;
    std::size_t steps_per_epoch = 50;
    std::uint64_t seed = 42;
    DegradationSpec degradation;
};

void validate_config(const TrainConfig& cfg);

struct DtRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Where training examples come from. Coupled modes use the samplers; blind
// modes draw from the reference pool. FmLinear/FmCot use references as clean
// endpoints when present, otherwise draw_target.
struct DataSource {
    std::function<Field(Rng&)> draw_source;
    std::function<Field(Rng&)> draw_target;
    std::vector<Field> references;
};

struct TrainExample {
    SupervisionPair pair;
    Field input;          // network input state
    double conditioning;  // scalar passed to the time embedding
    Field target;
};

// Exact coupled example at cleaner time t with gap dt; both points lie on the
// conditional path of (x0, x_inf).
TrainExample coupled_example(const Field& x0, const Field& x_inf, double t, double dt);

TrainExample make_pair(const DataSource& data, const TrainConfig& cfg, DtRange range, Rng& rng);

struct TrainReport {
    std::string mode;
    std::string supervision;
    std::uint64_t seed = 0;
    std::vector<double> epoch_loss;     // mean loss per epoch
    std::vector<double> epoch_dt_min;   // range in effect during each epoch
    std::vector<double> epoch_dt_max;
    double final_dt_min = 0.0;          // range after the last epoch's update
    double final_dt_max = 0.0;
    double wall_seconds = 0.0;
};

struct TrainResult {
    ModelParams params;
    TrainReport report;
};

// Range in effect at the start of epoch `epoch` (0-based): the initial range
// shrunk/grown `epoch` times by the decay recurrence, with dt_min clamped to
// >= 1e-4 and dt_max to <= 5.
DtRange dt_range_for_epoch(const TrainConfig& cfg, std::size_t epoch);

// Derived per-step generator; parallel batch construction with these streams
// cannot change results.
Rng step_rng(std::uint64_t seed, std::size_t epoch, std::size_t step);

// The parameters train() starts from for this config.
ModelParams initial_params(const TrainConfig& cfg, const ModelArch& arch);

TrainResult train(const TrainConfig& cfg, const ModelArch& arch, const DataSource& data);

}  // namespace rflow
