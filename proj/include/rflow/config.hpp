#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rflow/datagen.hpp"
#include "rflow/degradation.hpp"
#include "rflow/model.hpp"
#include "rflow/trainer.hpp"

namespace rflow {

// Strict JSON decoding: unknown keys are rejected with the offending key
// named, and every field falls back to its documented default.

void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                         const std::string& where);

TrainConfig train_config_from_json(const nlohmann::json& j);
ModelArch model_arch_from_json(const nlohmann::json& j, std::size_t input_dim);
DegradationSpec degradation_spec_from_json(const nlohmann::json& j);
RingSpec ring_spec_from_json(const nlohmann::json& j);
PhantomSpec phantom_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainReport& report);

// Gaussian source distribution of the toy task.
struct SourceSpec {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double stddev = 1.0;
};

SourceSpec source_spec_from_json(const nlohmann::json& j);

// Reference pool construction: how many samples and at which quality levels.
struct ReferencesSpec {
    std::size_t count = 4096;
    std::vector<double> quality_levels = {0.8, 1.5, 2.5};
};

ReferencesSpec references_spec_from_json(const nlohmann::json& j);

struct ToyTrainSetup {
    TrainConfig train;
    nlohmann::json model;  // decoded once input_dim is known
    RingSpec ring;
    SourceSpec source;
    ReferencesSpec references;
};

struct ImageTrainSetup {
    TrainConfig train;
    nlohmann::json model;
    PhantomSpec phantom;
    ReferencesSpec references;
};

ToyTrainSetup toy_setup_from_json(const nlohmann::json& j);
ImageTrainSetup image_setup_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace rflow
