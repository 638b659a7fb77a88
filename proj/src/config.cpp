#include "rflow/config.hpp"

#include <algorithm>
#include <fstream>

namespace rflow {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    require_object(j, where);
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

TrainConfig train_config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"mode", "supervision", "epochs", "batch_size", "lr", "alpha_decay",
                         "dt_min0", "dt_max0", "steps_per_epoch", "seed"},
                        "train");
    TrainConfig cfg;
    cfg.mode = train_mode_from_string(get_or<std::string>(j, "mode", "relativeflow"));
    cfg.supervision = supervision_from_string(get_or<std::string>(j, "supervision", "coupled"));
    cfg.epochs = get_or<std::size_t>(j, "epochs", cfg.epochs);
    cfg.batch_size = get_or<std::size_t>(j, "batch_size", cfg.batch_size);
    cfg.lr = get_or<double>(j, "lr", cfg.lr);
    cfg.alpha_decay = get_or<double>(j, "alpha_decay", cfg.alpha_decay);
    cfg.dt_min0 = get_or<double>(j, "dt_min0", cfg.dt_min0);
    cfg.dt_max0 = get_or<double>(j, "dt_max0", cfg.dt_max0);
    cfg.steps_per_epoch = get_or<std::size_t>(j, "steps_per_epoch", cfg.steps_per_epoch);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    return cfg;
}

ModelArch model_arch_from_json(const json& j, std::size_t input_dim) {
    reject_unknown_keys(j, {"hidden_dims", "fourier_bands", "activation"}, "model");
    ModelArch arch;
    arch.input_dim = input_dim;
    arch.hidden_dims = get_or<std::vector<std::size_t>>(j, "hidden_dims", arch.hidden_dims);
    arch.fourier_bands = get_or<std::size_t>(j, "fourier_bands", arch.fourier_bands);
    arch.activation = activation_from_string(get_or<std::string>(j, "activation", "silu"));
    validate_arch(arch);
    return arch;
}

DegradationSpec degradation_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "lambda_ct", "beta_ct", "i0", "gamma_mr", "gamma_toy"},
                        "degradation");
    DegradationSpec spec;
    spec.kind = degradation_kind_from_string(get_or<std::string>(j, "kind", "toy"));
    spec.lambda_ct = get_or<double>(j, "lambda_ct", spec.lambda_ct);
    spec.beta_ct = get_or<double>(j, "beta_ct", spec.beta_ct);
    spec.i0 = get_or<double>(j, "i0", spec.i0);
    spec.gamma_mr = get_or<double>(j, "gamma_mr", spec.gamma_mr);
    spec.gamma_toy = get_or<double>(j, "gamma_toy", spec.gamma_toy);
    validate_spec(spec);
    return spec;
}

RingSpec ring_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"radius", "thickness", "center"}, "ring");
    RingSpec spec;
    spec.radius = get_or<double>(j, "radius", spec.radius);
    spec.thickness = get_or<double>(j, "thickness", spec.thickness);
    if (j.contains("center")) {
        const auto center = j.at("center").get<std::vector<double>>();
        if (center.size() != 2) throw ValidationError("ring: center must have 2 entries");
        spec.center_x = center[0];
        spec.center_y = center[1];
    }
    validate_ring(spec);
    return spec;
}

PhantomSpec phantom_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"width", "height", "background", "ellipses"}, "phantom");
    PhantomSpec spec;
    spec.width = get_or<std::size_t>(j, "width", spec.width);
    spec.height = get_or<std::size_t>(j, "height", spec.height);
    spec.background = get_or<double>(j, "background", spec.background);
    if (j.contains("ellipses")) {
        spec.ellipses.clear();
        for (const auto& ej : j.at("ellipses")) {
            reject_unknown_keys(ej, {"center", "axes", "angle", "intensity"}, "phantom.ellipses");
            Ellipse e;
            const auto center = ej.at("center").get<std::vector<double>>();
            const auto axes = ej.at("axes").get<std::vector<double>>();
            if (center.size() != 2 || axes.size() != 2)
                throw ValidationError("phantom.ellipses: center and axes must have 2 entries");
            e.center_x = center[0];
            e.center_y = center[1];
            e.axis_a = axes[0];
            e.axis_b = axes[1];
            e.angle = get_or<double>(ej, "angle", 0.0);
            e.intensity = ej.at("intensity").get<double>();
            spec.ellipses.push_back(e);
        }
    } else {
        spec.ellipses = PhantomSpec::demo().ellipses;
    }
    validate_phantom(spec);
    return spec;
}

nlohmann::json to_json(const TrainReport& report) {
    return json{{"mode", report.mode},
                {"supervision", report.supervision},
                {"seed", report.seed},
                {"epochs", report.epoch_loss.size()},
                {"epoch_loss", report.epoch_loss},
                {"epoch_dt_min", report.epoch_dt_min},
                {"epoch_dt_max", report.epoch_dt_max},
                {"final_dt_min", report.final_dt_min},
                {"final_dt_max", report.final_dt_max},
                {"wall_seconds", report.wall_seconds}};
}

SourceSpec source_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"mean", "std"}, "source");
    SourceSpec spec;
    if (j.contains("mean")) {
        const auto mean = j.at("mean").get<std::vector<double>>();
        if (mean.size() != 2) throw ValidationError("source: mean must have 2 entries");
        spec.mean_x = mean[0];
        spec.mean_y = mean[1];
    }
    spec.stddev = get_or<double>(j, "std", spec.stddev);
    if (!(spec.stddev >= 0.0)) throw ValidationError("source: std must be >= 0");
    return spec;
}

ReferencesSpec references_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"count", "quality_levels"}, "references");
    ReferencesSpec spec;
    spec.count = get_or<std::size_t>(j, "count", spec.count);
    spec.quality_levels =
        get_or<std::vector<double>>(j, "quality_levels", spec.quality_levels);
    if (spec.count == 0) throw ValidationError("references: count must be >= 1");
    if (spec.quality_levels.empty())
        throw ValidationError("references: quality_levels must be non-empty");
    for (double q : spec.quality_levels)
        if (!(q > 0.0)) throw ValidationError("references: quality levels must be > 0");
    return spec;
}

ToyTrainSetup toy_setup_from_json(const json& j) {
    reject_unknown_keys(j, {"train", "model", "degradation", "ring", "source", "references"},
                        "config");
    ToyTrainSetup setup;
    setup.train = train_config_from_json(j.value("train", json::object()));
    setup.model = j.value("model", json::object());
    if (j.contains("degradation"))
        setup.train.degradation = degradation_spec_from_json(j.at("degradation"));
    setup.ring = ring_spec_from_json(j.value("ring", json::object()));
    setup.source = source_spec_from_json(j.value("source", json::object()));
    setup.references = references_spec_from_json(j.value("references", json::object()));
    return setup;
}

ImageTrainSetup image_setup_from_json(const json& j) {
    reject_unknown_keys(j, {"train", "model", "degradation", "phantom", "references"}, "config");
    ImageTrainSetup setup;
    setup.train = train_config_from_json(j.value("train", json::object()));
    // Image runs default to blind degradation supervision; an explicit
    // "supervision" key still wins.
    if (!j.contains("train") || !j.at("train").contains("supervision"))
        setup.train.supervision = Supervision::BlindDegrade;
    setup.model = j.value("model", json::object());
    if (j.contains("degradation"))
        setup.train.degradation = degradation_spec_from_json(j.at("degradation"));
    else
        setup.train.degradation.kind = DegradationKind::Ct;
    setup.phantom = phantom_spec_from_json(j.value("phantom", json::object()));
    setup.references.count = 16;
    setup.references.quality_levels = {0.05};
    if (j.contains("references")) setup.references = references_spec_from_json(j.at("references"));
    return setup;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

}  // namespace rflow
