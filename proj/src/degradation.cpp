#include "rflow/degradation.hpp"

#include <cmath>
#include <string>

namespace rflow {

const char* to_string(DegradationKind kind) {
    switch (kind) {
        case DegradationKind::Ct: return "ct";
        case DegradationKind::Mr: return "mr";
        case DegradationKind::Toy: return "toy";
    }
    return "?";
}

DegradationKind degradation_kind_from_string(const std::string& s) {
    if (s == "ct") return DegradationKind::Ct;
    if (s == "mr") return DegradationKind::Mr;
    if (s == "toy") return DegradationKind::Toy;
    throw ValidationError("unknown degradation kind '" + s + "' (expected ct|mr|toy)");
}

void validate_spec(const DegradationSpec& spec) {
    if (!(spec.lambda_ct > 0.0 && spec.beta_ct > 0.0 && spec.gamma_mr > 0.0 && spec.gamma_toy > 0.0))
        throw ValidationError("degradation spec: all rates must be > 0");
    if (!(spec.i0 >= 1.0)) throw ValidationError("degradation spec: i0 must be >= 1");
}

namespace {

void validate_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("degradation: dt must be finite and > 0");
}

}  // namespace

Field degrade_ct(const Field& x, double dt, const DegradationSpec& spec, Rng& rng) {
    validate_dt(dt);
    validate_spec(spec);
    for (double v : x.data)
        if (!(v > 0.0))
            throw ValidationError("degrade_ct: intensities must be strictly positive");

    const double dose = std::exp(-spec.lambda_ct * dt);  // fraction of photons kept
    const double scale = dose * spec.i0;
    const double sigma_e = std::sqrt(spec.beta_ct * dt);

    Field out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double counts = static_cast<double>(rng.poisson(scale * x[i]));
        const double noisy = counts + rng.gaussian(0.0, sigma_e);
        out[i] = std::max(0.0, noisy / scale);
    }
    return out;
}

Field degrade_mr(const Field& x, double dt, const DegradationSpec& spec, Rng& rng) {
    validate_dt(dt);
    validate_spec(spec);
    for (double v : x.data)
        if (!(v >= 0.0)) throw ValidationError("degrade_mr: intensities must be non-negative");

    const double sigma = std::sqrt(spec.gamma_mr * dt);
    Field out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double real_part = x[i] + rng.gaussian(0.0, sigma);
        const double imag_part = rng.gaussian(0.0, sigma);
        out[i] = std::hypot(real_part, imag_part);
    }
    return out;
}

Field degrade_toy(const Field& points, double dt, const DegradationSpec& spec, Rng& rng) {
    validate_dt(dt);
    validate_spec(spec);
    const double sigma = std::sqrt(spec.gamma_toy * dt);
    Field out(points.rows, points.cols);
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = points[i] + rng.gaussian(0.0, sigma);
    return out;
}

Field degrade(const Field& x, double dt, const DegradationSpec& spec, Rng& rng) {
    switch (spec.kind) {
        case DegradationKind::Ct: return degrade_ct(x, dt, spec, rng);
        case DegradationKind::Mr: return degrade_mr(x, dt, spec, rng);
        case DegradationKind::Toy: return degrade_toy(x, dt, spec, rng);
    }
    throw ValidationError("degrade: unknown kind");
}

Field degrade(const Field& x, double dt, const DegradationSpec& spec, RngState state) {
    Rng rng(state);
    return degrade(x, dt, spec, rng);
}

}  // namespace rflow
