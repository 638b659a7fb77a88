#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rflow/config.hpp"
#include "rflow/datagen.hpp"
#include "rflow/degradation.hpp"
#include "rflow/metrics.hpp"
#include "rflow/sampler.hpp"
#include "rflow/storage.hpp"
#include "rflow/tasks.hpp"
#include "rflow/verify.hpp"

// Exit codes: 0 success, 1 verification/quality failure, 2 usage or config
// error, 3 IO error.

namespace {

using nlohmann::json;
using namespace rflow;

constexpr int kExitOk = 0;
constexpr int kExitQuality = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int cmd_verify(std::size_t trials, double tolerance, std::uint64_t seed) {
    const auto reports = run_identity_suite(trials, seed);
    bool pass = true;
    json items = json::array();
    for (const auto& r : reports) {
        const bool ok = r.max_residual <= tolerance;
        pass = pass && ok;
        items.push_back(
            {{"name", r.name}, {"max_residual", r.max_residual}, {"trials", r.trials}, {"pass", ok}});
    }
    const json out = {{"trials", trials}, {"tolerance", tolerance}, {"seed", seed},
                      {"identities", items}, {"pass", pass}};
    std::cout << out.dump(2) << "\n";
    return pass ? kExitOk : kExitQuality;
}

bool is_points_path(const std::filesystem::path& p) { return p.extension() == ".csv"; }

int cmd_degrade(const std::string& kind_str, double dt, std::uint64_t seed,
                const std::filesystem::path& in, const std::filesystem::path& out,
                const std::string& spec_json) {
    DegradationSpec spec;
    if (!spec_json.empty()) {
        json j;
        try {
            j = json::parse(spec_json);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("--spec: invalid JSON: ") + e.what());
        }
        spec = degradation_spec_from_json(j);
    }
    spec.kind = degradation_kind_from_string(kind_str);
    Rng rng(seed, 0);
    if (spec.kind == DegradationKind::Toy) {
        const Field pts = read_points(in);
        write_points(degrade(pts, dt, spec, rng), out);
    } else {
        const Field img = read_image(in);
        write_image(degrade(img, dt, spec, rng), out);
    }
    return kExitOk;
}

void write_train_outputs(const TrainResult& result, const std::filesystem::path& ckpt,
                         const std::filesystem::path& report_path) {
    save_checkpoint(result.params, ckpt);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw IoError("cannot open '" + report_path.string() + "' for writing");
        out << to_json(result.report).dump(2) << "\n";
    }
    std::cout << to_json(result.report).dump(2) << "\n";
}

int cmd_train_toy(const std::filesystem::path& config, const std::filesystem::path& ckpt,
                  const std::filesystem::path& report) {
    const ToyTrainSetup setup = toy_setup_from_json(load_json_file(config));
    write_train_outputs(run_toy_training(setup), ckpt, report);
    return kExitOk;
}

int cmd_train_image(const std::filesystem::path& config, const std::filesystem::path& ckpt,
                    const std::filesystem::path& report) {
    const ImageTrainSetup setup = image_setup_from_json(load_json_file(config));
    write_train_outputs(run_image_training(setup), ckpt, report);
    return kExitOk;
}

void write_point_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    std::string bytes = "step,index,dim0,dim1\n";
    char buf[96];
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const Field& state = traj.states[s];
        for (std::size_t i = 0; i < state.rows; ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g\n", s, i, state.at(i, 0),
                          state.at(i, 1));
            bytes += buf;
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << bytes;
}

int cmd_sample(const std::filesystem::path& ckpt, const std::filesystem::path& in,
               const std::string& schedule, const std::string& mode,
               const std::filesystem::path& traj, const std::filesystem::path& out) {
    const ModelParams params = load_checkpoint(ckpt);
    const SampleSchedule sched = parse_schedule(schedule, step_mode_from_string(mode));
    if (is_points_path(in)) {
        const Field pts = read_points(in);
        const SampleResult result = sample(params, pts, sched);
        write_points(result.output, out);
        if (!traj.empty()) write_point_trajectory(result.trajectory, traj);
    } else {
        const Field img = read_image(in);
        const SampleResult result = sample(params, img, sched);
        Field final = result.output;
        for (double& v : final.data) v = std::clamp(v, 0.0, 1.0);
        write_image(final, out);
        if (!traj.empty()) {
            for (std::size_t s = 0; s < result.trajectory.states.size(); ++s) {
                char suffix[32];
                std::snprintf(suffix, sizeof(suffix), "_step%03zu", s);
                std::filesystem::path step_path = traj;
                step_path += suffix;
                step_path += ".rfimg";
                write_image(result.trajectory.states[s], step_path, ImageFormat::Float);
            }
        }
    }
    return kExitOk;
}

int cmd_metrics(const std::filesystem::path& a, const std::filesystem::path& b, bool points) {
    json out;
    if (points) {
        out = {{"energy_distance", energy_distance(read_points(a), read_points(b))}};
    } else {
        const ImagePair pair = ImagePair::make(read_image(a), read_image(b));
        out = {{"psnr", psnr(pair)}, {"ssim", ssim(pair)}, {"rmse", rmse(pair)}};
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_phantom(const std::string& spec_json, const std::filesystem::path& out) {
    PhantomSpec spec = PhantomSpec::demo();
    if (!spec_json.empty()) {
        json j;
        try {
            j = json::parse(spec_json);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("--spec: invalid JSON: ") + e.what());
        }
        spec = phantom_spec_from_json(j);
    }
    write_image(generate_phantom(spec), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative-flow denoising toolkit"};
    app.require_subcommand(1);

    int rc = kExitOk;

    // verify
    std::size_t v_trials = 10000;
    double v_tol = 1e-11;
    std::uint64_t v_seed = 1;
    auto* verify = app.add_subcommand("verify", "run the closed-form identity suite");
    verify->add_option("--trials", v_trials, "random trials per identity")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tolerance", v_tol, "max allowed residual");
    verify->add_option("--seed", v_seed, "sweep seed");
    verify->callback([&] { rc = cmd_verify(v_trials, v_tol, v_seed); });

    // degrade
    std::string d_kind;
    double d_dt = 0.0;
    std::uint64_t d_seed = 0;
    std::filesystem::path d_in, d_out;
    std::string d_spec;
    auto* degrade_cmd = app.add_subcommand("degrade", "apply a degradation operator once");
    degrade_cmd->add_option("--kind", d_kind, "ct|mr|toy")->required();
    degrade_cmd->add_option("--dt", d_dt, "quality gap")->required();
    degrade_cmd->add_option("--seed", d_seed, "rng seed");
    degrade_cmd->add_option("--in", d_in, "input image or points csv")->required();
    degrade_cmd->add_option("--out", d_out, "output path")->required();
    degrade_cmd->add_option("--spec", d_spec, "degradation spec as inline JSON");
    degrade_cmd->callback([&] { rc = cmd_degrade(d_kind, d_dt, d_seed, d_in, d_out, d_spec); });

    // train-toy / train-image
    std::filesystem::path t_config, t_ckpt, t_report;
    auto* train_toy = app.add_subcommand("train-toy", "train on the 2D transport task");
    train_toy->add_option("--config", t_config, "JSON config")->required();
    train_toy->add_option("--out", t_ckpt, "checkpoint path")->required();
    train_toy->add_option("--report", t_report, "report JSON path");
    train_toy->callback([&] { rc = cmd_train_toy(t_config, t_ckpt, t_report); });

    std::filesystem::path i_config, i_ckpt, i_report;
    auto* train_image = app.add_subcommand("train-image", "train on the phantom image task");
    train_image->add_option("--config", i_config, "JSON config")->required();
    train_image->add_option("--out", i_ckpt, "checkpoint path")->required();
    train_image->add_option("--report", i_report, "report JSON path");
    train_image->callback([&] { rc = cmd_train_image(i_config, i_ckpt, i_report); });

    // sample
    std::filesystem::path s_ckpt, s_in, s_traj, s_out;
    std::string s_schedule = "0.2,0.1,0.05";
    std::string s_mode = "euler";
    auto* sample_cmd = app.add_subcommand("sample", "iteratively denoise an input");
    sample_cmd->add_option("--ckpt", s_ckpt, "checkpoint path")->required();
    sample_cmd->add_option("--in", s_in, "input image or points csv")->required();
    sample_cmd->add_option("--schedule", s_schedule, "comma-separated step list");
    sample_cmd->add_option("--mode", s_mode, "euler|exact");
    sample_cmd->add_option("--traj", s_traj, "trajectory output (csv or image prefix)");
    sample_cmd->add_option("--out", s_out, "output path")->required();
    sample_cmd->callback([&] { rc = cmd_sample(s_ckpt, s_in, s_schedule, s_mode, s_traj, s_out); });

    // metrics
    std::filesystem::path m_a, m_b;
    bool m_points = false;
    auto* metrics_cmd = app.add_subcommand("metrics", "compare two images or point sets");
    metrics_cmd->add_option("--a", m_a, "candidate path")->required();
    metrics_cmd->add_option("--b", m_b, "reference path")->required();
    metrics_cmd->add_flag("--points", m_points, "treat inputs as point sets");
    metrics_cmd->callback([&] { rc = cmd_metrics(m_a, m_b, m_points); });

    // phantom
    std::string p_spec;
    std::filesystem::path p_out;
    auto* phantom_cmd = app.add_subcommand("phantom", "generate the deterministic test image");
    phantom_cmd->add_option("--spec", p_spec, "phantom spec as inline JSON");
    phantom_cmd->add_option("--out", p_out, "output image path")->required();
    phantom_cmd->callback([&] { rc = cmd_phantom(p_spec, p_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int cli_rc = app.exit(e);
        return cli_rc == 0 ? kExitOk : kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitQuality;
    }
    return rc;
}
