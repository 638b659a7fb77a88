#include <doctest.h>

#include <cmath>

#include "rflow/cot.hpp"
#include "rflow/rng.hpp"

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

TEST_CASE("lambda_weight endpoint identities") {
    CHECK(lambda_weight({0.5, 0.5, 2.0}) == 1.0);
    CHECK(lambda_weight({0.5, 2.0, 2.0}) == 0.0);
}

TEST_CASE("lambda_weight interior value") {
    CHECK(lambda_weight({0.5, 1.0, 2.0}) == doctest::Approx(0.493519608944).epsilon(1e-9));
}

TEST_CASE("lambda_weight strictly decreasing in t") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const double t_i = rng.uniform(0.01, 4.0);
        const double t_j = t_i + rng.uniform(0.01, 3.0);
        double prev = 1.0;
        for (int k = 1; k <= 20; ++k) {
            const double t = t_i + (t_j - t_i) * k / 21.0;
            const double lam = lambda_weight({t_i, t, t_j});
            CHECK(lam < prev);
            CHECK(lam >= 0.0);
            CHECK(lam <= 1.0);
            prev = lam;
        }
    }
}

TEST_CASE("lambda_weight domain errors") {
    CHECK_THROWS_AS(lambda_weight({2.0, 1.0, 0.5}), ValidationError);   // reversed
    CHECK_THROWS_AS(lambda_weight({1.0, 1.0, 1.0}), ValidationError);   // degenerate
    CHECK_THROWS_AS(lambda_weight({0.5, 3.0, 2.0}), ValidationError);   // t above t_j
    CHECK_THROWS_AS(lambda_weight({0.5, 0.2, 2.0}), ValidationError);   // t below t_i
    CHECK_THROWS_AS(lambda_weight({-1.0, 0.5, 2.0}), ValidationError);  // t_i <= 0
    CHECK_THROWS_AS(lambda_weight({0.5, NAN, 2.0}), ValidationError);
}

TEST_CASE("conditional_point endpoints and interior") {
    const ConditionalPathSpec path{scalar(0.0), scalar(1.0)};
    CHECK(conditional_point(path, 0.0)[0] == 0.0);
    CHECK(conditional_point(path, 50.0)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conditional_point(path, 1.0)[0] == doctest::Approx(0.632120558829).epsilon(1e-9));
}

TEST_CASE("conditional_point validation") {
    CHECK_THROWS_AS(conditional_point({scalar(0.0), Field(1, 2)}, 1.0), ValidationError);
    CHECK_THROWS_AS(conditional_point({scalar(0.0), scalar(1.0)}, -0.1), ValidationError);
}

TEST_CASE("relative_point degenerate endpoints and lambda=1") {
    const QualitySegment seg{0.5, 1.0, 2.0};
    const Field same = relative_point(scalar(0.25), scalar(0.25), seg);
    CHECK(same[0] == 0.25);

    Rng rng(3);
    const Field a = random_field(4, rng);
    const Field b = random_field(4, rng);
    const Field at_left = relative_point(a, b, {0.5, 0.5, 2.0});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(at_left[i] == a[i]);
}

TEST_CASE("relative_point reproduces the conditional path") {
    // Endpoints taken from the path x0 = 0, x_inf = 1; interpolating at t = 1
    // must agree with the direct path point.
    const Field x_ti = scalar(0.3934693);
    const Field x_tj = scalar(0.8646647);
    const Field p = relative_point(x_ti, x_tj, {0.5, 1.0, 2.0});
    CHECK(p[0] == doctest::Approx(0.6321206).epsilon(1e-5));
}

TEST_CASE("component residual examples") {
    CHECK(component_residual({scalar(0.0), scalar(1.0)}, {0.5, 1.0, 2.0}) <= 1e-12);

    const ConditionalPathSpec constant{scalar(0.7), scalar(0.7)};
    CHECK(component_residual(constant, {0.5, 1.0, 2.0}) == 0.0);
}

TEST_CASE("component residual sweep") {
    Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t dim = 1 + rng.uniform_index(8);
        const ConditionalPathSpec path{random_field(dim, rng), random_field(dim, rng)};
        const double t_i = rng.uniform(0.01, 5.0);
        const double t = t_i + rng.uniform(1e-3, 2.0);
        const double t_j = t + rng.uniform(1e-3, 2.0);
        worst = std::max(worst, component_residual(path, {t_i, t, t_j}));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("composition residual examples") {
    CHECK(composition_residual(0.2, 0.7, 1.5, 1.0) <= 1e-12);
    CHECK(composition_residual(0.2, 0.7, 1.5, 0.2) <= 1e-15);  // left endpoint
    CHECK_THROWS_AS(composition_residual(0.7, 0.2, 1.5, 1.0), ValidationError);
    CHECK_THROWS_AS(composition_residual(0.2, 0.7, 1.5, 1.6), ValidationError);
}

TEST_CASE("composition residual sweep") {
    Rng rng(43);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const double t1 = rng.uniform(0.01, 8.0);
        const double t2 = t1 + rng.uniform(1e-3, 1.0);
        const double t3 = t2 + rng.uniform(1e-3, 1.0);
        const double t = rng.uniform(t1, t3);
        worst = std::max(worst, composition_residual(t1, t2, t3, t));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("two-hop interpolation equals the direct one") {
    // Walk t1 -> t2 first, then use that state as the near endpoint of the
    // second hop; the result must match interpolating t1 -> t3 directly.
    Rng rng(44);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t dim = 1 + rng.uniform_index(6);
        const ConditionalPathSpec path{random_field(dim, rng), random_field(dim, rng)};
        const double t1 = rng.uniform(0.05, 3.0);
        const double t2 = t1 + rng.uniform(0.01, 1.0);
        const double t3 = t2 + rng.uniform(0.01, 1.0);
        const double t_mid = rng.uniform(t2, t3);

        const Field p1 = conditional_point(path, t1);
        const Field p2 = conditional_point(path, t2);
        const Field p3 = conditional_point(path, t3);

        const Field via_t2 = relative_point(p2, p3, {t2, t_mid, t3});
        const Field direct = relative_point(p1, p3, {t1, t_mid, t3});
        CHECK(max_abs_diff(via_t2, direct) <= 1e-10);

        // And the first hop must itself be a restriction of the direct path.
        const double t_in = rng.uniform(t1, t2);
        const Field hop1 = relative_point(p1, p2, {t1, t_in, t2});
        const Field direct_in = relative_point(p1, p3, {t1, t_in, t3});
        CHECK(max_abs_diff(hop1, direct_in) <= 1e-10);
    }
}
