#pragma once

#include "rflow/field.hpp"
#include "rflow/rng.hpp"

namespace rflow {

enum class DegradationKind { Ct, Mr, Toy };

const char* to_string(DegradationKind kind);
DegradationKind degradation_kind_from_string(const std::string& s);

// Physical parameters of the stochastic degradation operators.
struct DegradationSpec {
    DegradationKind kind = DegradationKind::Toy;
    double lambda_ct = 5.0;   // dose-decay rate
    double beta_ct = 400.0;   // electronic-noise rate
    double i0 = 1e6;          // incident photon count
    double gamma_mr = 0.005;  // Rician variance rate
    double gamma_toy = 0.5;   // toy variance rate
};

void validate_spec(const DegradationSpec& spec);

// Photon-counting plus electronic noise on strictly positive intensities:
//   (Poisson(alpha I0 x) + N(0, beta_ct dt)) / (alpha I0),  alpha = e^{-lambda_ct dt},
// clamped below at zero. Mean-preserving: E[D(x)] = x before clamping.
Field degrade_ct(const Field& x, double dt, const DegradationSpec& spec, Rng& rng);

// Rician magnitude noise on non-negative intensities:
//   sqrt((x + n1)^2 + n2^2),  n1, n2 ~ N(0, gamma_mr dt).
Field degrade_mr(const Field& x, double dt, const DegradationSpec& spec, Rng& rng);

// Additive isotropic Gaussian on 2D points with variance gamma_toy dt.
Field degrade_toy(const Field& points, double dt, const DegradationSpec& spec, Rng& rng);

// Dispatch on spec.kind.
Field degrade(const Field& x, double dt, const DegradationSpec& spec, Rng& rng);

// Pure-value variants: the draw sequence is fully determined by the state.
Field degrade(const Field& x, double dt, const DegradationSpec& spec, RngState state);

}  // namespace rflow
