#include <doctest.h>

#include <cmath>

#include "rflow/cot.hpp"
#include "rflow/rng.hpp"
#include "rflow/svf.hpp"

using namespace rflow;

namespace {

Field scalar(double v) {
    Field f(1, 1);
    f[0] = v;
    return f;
}

Field random_field(std::size_t dim, Rng& rng) {
    Field f(1, dim);
    for (std::size_t i = 0; i < dim; ++i) f[i] = rng.uniform(-10.0, 10.0);
    return f;
}

}  // namespace

TEST_CASE("target_velocity stationary pair is zero") {
    const SupervisionPair pair{scalar(0.4), scalar(0.4), 0.7};
    CHECK(target_velocity(pair)[0] == 0.0);
}

TEST_CASE("target_velocity on an exact path pair") {
    // Pair on the path x0 = 0, x_inf = 1 at cleaner time t = 1, gap 0.5.
    const SupervisionPair pair{scalar(0.3934693), scalar(0.6321206), 0.5};
    const Field u = target_velocity(pair);
    CHECK(u[0] == doctest::Approx(0.3678794).epsilon(1e-6));
    // Same value as x_inf - x_cleaner.
    CHECK(u[0] == doctest::Approx(1.0 - 0.6321206).epsilon(1e-6));
}

TEST_CASE("target_velocity rejects bad dt and shapes") {
    CHECK_THROWS_AS(target_velocity({scalar(0.0), scalar(1.0), 0.0}), ValidationError);
    CHECK_THROWS_AS(target_velocity({scalar(0.0), scalar(1.0), -0.5}), ValidationError);
    CHECK_THROWS_AS(target_velocity({scalar(0.0), Field(1, 2), 0.5}), ValidationError);
}

TEST_CASE("oracle_velocity basics") {
    CHECK(oracle_velocity(scalar(0.3), scalar(0.3))[0] == 0.0);
    CHECK(oracle_velocity(scalar(0.6321206), scalar(1.0))[0] == doctest::Approx(0.3678794));
    CHECK_THROWS_AS(oracle_velocity(scalar(0.0), Field(1, 2)), ValidationError);
}

TEST_CASE("oracle_velocity matches the damped endpoint gap along the path") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 1 + rng.uniform_index(8);
        const Field x0 = random_field(dim, rng);
        const Field x_inf = random_field(dim, rng);
        const double t = rng.uniform(0.0, 4.0);
        const Field x = conditional_point({x0, x_inf}, t);
        const Field u = oracle_velocity(x, x_inf);
        const double w = std::exp(-t);
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(std::abs(u[i] - w * (x_inf[i] - x0[i])) <= 1e-12);
    }
}

TEST_CASE("exact pairs satisfy both velocity identities") {
    Rng rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t dim = 1 + rng.uniform_index(8);
        const Field x0 = random_field(dim, rng);
        const Field x_inf = random_field(dim, rng);
        const double dt = rng.uniform(0.01, 2.0);
        const double t_noisy = rng.uniform(0.01, 3.0);
        const ConditionalPathSpec path{x0, x_inf};
        SupervisionPair pair{conditional_point(path, t_noisy),
                             conditional_point(path, t_noisy + dt), dt};
        const Field u = target_velocity(pair);
        const double w = std::exp(-(t_noisy + dt));
        const double w_shift = std::exp(-dt);
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(std::abs(u[i] - w * (x_inf[i] - x0[i])) <= 1e-11);
            // Shift relation: target = e^{-dt} (x_inf - x_noisier).
            CHECK(std::abs(u[i] - w_shift * (x_inf[i] - pair.x_noisier[i])) <= 1e-11);
        }
    }
}

TEST_CASE("target_velocity is linear in the pair difference") {
    Rng rng(9);
    const Field a = random_field(6, rng);
    const Field b = random_field(6, rng);
    const double dt = 0.37;
    const Field u1 = target_velocity({a, b, dt});
    Field a2(1, 6), b2(1, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        a2[i] = 3.0 * a[i];
        b2[i] = 3.0 * b[i];
    }
    const Field u3 = target_velocity({a2, b2, dt});
    for (std::size_t i = 0; i < 6; ++i) CHECK(u3[i] == doctest::Approx(3.0 * u1[i]).epsilon(1e-12));
}

TEST_CASE("loss_rf values") {
    CHECK(loss_rf({scalar(0.5)}, {scalar(0.5)}) == 0.0);
    CHECK(loss_rf({scalar(0.5)}, {scalar(0.3)}) == doctest::Approx(0.04).epsilon(1e-12));

    Field pred(1, 2), target(1, 2);
    pred[0] = 1.0;
    pred[1] = 0.0;
    target[0] = 0.0;
    target[1] = 1.0;
    CHECK(loss_rf({pred}, {target}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("loss_rf validation and positivity") {
    CHECK_THROWS_AS(loss_rf({}, {}), ValidationError);
    CHECK_THROWS_AS(loss_rf({scalar(0.0)}, {}), ValidationError);
    CHECK_THROWS_AS(loss_rf({scalar(0.0)}, {Field(1, 2)}), ValidationError);

    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const Field p = random_field(4, rng);
        const Field t = random_field(4, rng);
        const double l = loss_rf({p}, {t});
        CHECK(l >= 0.0);
        CHECK((l == 0.0) == (max_abs_diff(p, t) == 0.0));
    }
}
