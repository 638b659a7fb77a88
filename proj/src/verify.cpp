#include "rflow/verify.hpp"

#include <algorithm>
#include <cmath>

#include "rflow/cot.hpp"
#include "rflow/rng.hpp"
#include "rflow/sampler.hpp"
#include "rflow/svf.hpp"

namespace rflow {

namespace {

Field random_field(std::size_t dim, Rng& rng) {
    Field f(1, dim);
    for (std::size_t i = 0; i < dim; ++i) f[i] = rng.uniform(-10.0, 10.0);
    return f;
}

QualitySegment random_segment(Rng& rng) {
    const double t_i = rng.uniform(0.01, 5.0);
    const double gap1 = rng.uniform(1e-3, 2.0);
    const double gap2 = rng.uniform(1e-3, 2.0);
    return QualitySegment{t_i, t_i + gap1, t_i + gap1 + gap2};
}

double sweep_component(std::size_t trials, Rng& rng) {
    double worst = 0.0;
    for (std::size_t n = 0; n < trials; ++n) {
        const std::size_t dim = 1 + rng.uniform_index(64);
        const ConditionalPathSpec path{random_field(dim, rng), random_field(dim, rng)};
        worst = std::max(worst, component_residual(path, random_segment(rng)));
    }
    return worst;
}

double sweep_composition(std::size_t trials, Rng& rng) {
    double worst = 0.0;
    for (std::size_t n = 0; n < trials; ++n) {
        const double t1 = rng.uniform(0.01, 8.0);
        const double t2 = t1 + rng.uniform(1e-3, 1.0);
        const double t3 = t2 + rng.uniform(1e-3, 1.0);
        const double t = rng.uniform(t1, t3);
        worst = std::max(worst, composition_residual(t1, t2, t3, t));
    }
    return worst;
}

double sweep_velocity_identity(std::size_t trials, Rng& rng) {
    double worst = 0.0;
    for (std::size_t n = 0; n < trials; ++n) {
        const std::size_t dim = 1 + rng.uniform_index(16);
        const Field x0 = random_field(dim, rng);
        const Field x_inf = random_field(dim, rng);
        const double dt = rng.uniform(0.01, 2.0);
        const double t_noisy = rng.uniform(0.01, 3.0);
        const double t = t_noisy + dt;

        const ConditionalPathSpec path{x0, x_inf};
        SupervisionPair pair;
        pair.x_noisier = conditional_point(path, t_noisy);
        pair.x_cleaner = conditional_point(path, t);
        pair.dt = dt;
        const Field target = target_velocity(pair);

        const double w = std::exp(-t);
        for (std::size_t i = 0; i < dim; ++i) {
            worst = std::max(worst, std::abs(target[i] - w * (x_inf[i] - x0[i])));
            worst = std::max(worst, std::abs(target[i] - (x_inf[i] - pair.x_cleaner[i])));
        }
    }
    return worst;
}

double sweep_euler_contraction(std::size_t trials, Rng& rng) {
    double worst = 0.0;
    for (std::size_t n = 0; n < trials; ++n) {
        const std::size_t dim = 1 + rng.uniform_index(8);
        const Field x0 = random_field(dim, rng);
        const Field x_inf = random_field(dim, rng);

        SampleSchedule sched;
        sched.mode = StepMode::Euler;
        sched.steps.clear();
        const std::size_t n_steps = 1 + rng.uniform_index(6);
        for (std::size_t s = 0; s < n_steps; ++s) sched.steps.push_back(rng.uniform(0.01, 0.95));

        const auto oracle = [&](const Field& x, double) { return oracle_velocity(x, x_inf); };
        const SampleResult res = sample_with(oracle, x0, sched);
        const double factor = residual_factor(sched).value;
        for (std::size_t i = 0; i < dim; ++i) {
            const double expected = x_inf[i] + factor * (x0[i] - x_inf[i]);
            worst = std::max(worst, std::abs(res.output[i] - expected));
        }
    }
    return worst;
}

double sweep_exact_path(std::size_t trials, Rng& rng) {
    double worst = 0.0;
    for (std::size_t n = 0; n < trials; ++n) {
        const std::size_t dim = 1 + rng.uniform_index(8);
        const Field x0 = random_field(dim, rng);
        const Field x_inf = random_field(dim, rng);
        const ConditionalPathSpec path{x0, x_inf};

        SampleSchedule sched;
        sched.mode = StepMode::Exact;
        sched.steps.clear();
        const std::size_t n_steps = 1 + rng.uniform_index(4);
        for (std::size_t s = 0; s < n_steps; ++s) sched.steps.push_back(rng.uniform(0.01, 1.5));

        // Ideal pairwise predictor: u(x, dt) = e^{-dt} (x_inf - x).
        const auto ideal = [&](const Field& x, double dt) {
            Field u = oracle_velocity(x, x_inf);
            const double w = std::exp(-dt);
            for (double& v : u.data) v *= w;
            return u;
        };

        const double t0 = rng.uniform(0.0, 2.0);
        const SampleResult res = sample_with(ideal, conditional_point(path, t0), sched);
        double t = t0;
        for (std::size_t s = 0; s < sched.steps.size(); ++s) {
            t += sched.steps[s];
            worst = std::max(
                worst, max_abs_diff(res.trajectory.states[s + 1], conditional_point(path, t)));
        }
    }
    return worst;
}

}  // namespace

std::vector<IdentityReport> run_identity_suite(std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw ValidationError("identity suite: trials must be >= 1");
    std::vector<IdentityReport> reports;
    {
        Rng rng(seed, 1);
        reports.push_back({"cot_component", sweep_component(trials, rng), trials});
    }
    {
        Rng rng(seed, 2);
        reports.push_back({"cot_composition", sweep_composition(trials, rng), trials});
    }
    {
        Rng rng(seed, 3);
        reports.push_back({"velocity_identity", sweep_velocity_identity(trials, rng), trials});
    }
    {
        Rng rng(seed, 4);
        reports.push_back({"sampler_euler_contraction", sweep_euler_contraction(trials, rng), trials});
    }
    {
        Rng rng(seed, 5);
        reports.push_back({"sampler_exact_path", sweep_exact_path(trials, rng), trials});
    }
    return reports;
}

}  // namespace rflow
