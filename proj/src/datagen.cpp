#include "rflow/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rflow/cot.hpp"

namespace rflow {

void validate_ring(const RingSpec& spec) {
    if (!(spec.radius > 0.0)) throw ValidationError("ring spec: radius must be > 0");
    if (!(spec.thickness >= 0.0)) throw ValidationError("ring spec: thickness must be >= 0");
}

void validate_phantom(const PhantomSpec& spec) {
    if (spec.width == 0 || spec.height == 0) throw ValidationError("phantom spec: empty image");
    if (!(spec.background >= 0.0)) throw ValidationError("phantom spec: negative background");
    for (const Ellipse& e : spec.ellipses)
        if (!(e.axis_a > 0.0) || !(e.axis_b > 0.0))
            throw ValidationError("phantom spec: degenerate ellipse axis");
}

PhantomSpec PhantomSpec::demo() {
    PhantomSpec spec;
    spec.ellipses = {
        {32.0, 32.0, 26.0, 22.0, 0.0, 0.40},
        {26.0, 28.0, 8.0, 6.0, 0.5, 0.25},
        {42.0, 38.0, 6.0, 9.0, -0.3, 0.20},
        {34.0, 20.0, 3.0, 3.0, 0.0, 0.30},
    };
    return spec;
}

void sincos_tau(double frac, double& c, double& s) {
    // Quadrant reduction keeps cardinal angles exact.
    const double q = std::floor(frac * 4.0 + 0.5);
    const double r = frac - q * 0.25;
    const double a = 2.0 * std::numbers::pi * r;
    const double cr = std::cos(a);
    const double sr = std::sin(a);
    switch (static_cast<long long>(q) & 3) {
        case 0: c = cr; s = sr; break;
        case 1: c = -sr; s = cr; break;
        case 2: c = -cr; s = -sr; break;
        default: c = sr; s = -cr; break;
    }
}

Field sample_gaussian(std::size_t n, double mean_x, double mean_y, double stddev, Rng& rng) {
    if (n == 0) throw ValidationError("sample_gaussian: n must be >= 1");
    if (!(stddev >= 0.0)) throw ValidationError("sample_gaussian: stddev must be >= 0");
    Field pts = Field::points(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts.at(i, 0) = mean_x + stddev * rng.gaussian();
        pts.at(i, 1) = mean_y + stddev * rng.gaussian();
    }
    return pts;
}

Field sample_ring(std::size_t n, const RingSpec& spec, Rng& rng) {
    if (n == 0) throw ValidationError("sample_ring: n must be >= 1");
    validate_ring(spec);
    Field pts = Field::points(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = rng.uniform01();
        const double radius = spec.radius + spec.thickness * rng.gaussian();
        double c, s;
        sincos_tau(frac, c, s);
        pts.at(i, 0) = spec.center_x + radius * c;
        pts.at(i, 1) = spec.center_y + radius * s;
    }
    return pts;
}

Field sample_ring_stratified(std::size_t n, const RingSpec& spec) {
    if (n == 0) throw ValidationError("sample_ring_stratified: n must be >= 1");
    validate_ring(spec);
    Field pts = Field::points(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c, s;
        sincos_tau(static_cast<double>(i) / static_cast<double>(n), c, s);
        pts.at(i, 0) = spec.center_x + spec.radius * c;
        pts.at(i, 1) = spec.center_y + spec.radius * s;
    }
    return pts;
}

Field generate_phantom(const PhantomSpec& spec) {
    validate_phantom(spec);
    Field img = Field::image(spec.width, spec.height, spec.background);
    for (const Ellipse& e : spec.ellipses) {
        const double ca = std::cos(e.angle);
        const double sa = std::sin(e.angle);
        for (std::size_t r = 0; r < spec.height; ++r) {
            for (std::size_t c = 0; c < spec.width; ++c) {
                const double dx = static_cast<double>(c) - e.center_x;
                const double dy = static_cast<double>(r) - e.center_y;
                const double u = (dx * ca + dy * sa) / e.axis_a;
                const double v = (-dx * sa + dy * ca) / e.axis_b;
                if (u * u + v * v <= 1.0) img.at(r, c) += e.intensity;
            }
        }
    }
    for (double& v : img.data) v = std::clamp(v, 0.01, 1.0);
    return img;
}

Field heterogeneous_references(std::size_t n, const RingSpec& ring, double source_std,
                               const std::vector<double>& levels, Rng& rng) {
    if (n == 0) throw ValidationError("heterogeneous_references: n must be >= 1");
    if (levels.empty()) throw ValidationError("heterogeneous_references: no quality levels");
    validate_ring(ring);
    Field pts = Field::points(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Field x0 = sample_gaussian(1, 0.0, 0.0, source_std, rng);
        const Field x_inf = sample_ring(1, ring, rng);
        const double t = levels[i % levels.size()];
        const Field p = conditional_point({x0, x_inf}, t);
        pts.at(i, 0) = p.at(0, 0);
        pts.at(i, 1) = p.at(0, 1);
    }
    return pts;
}

}  // namespace rflow
