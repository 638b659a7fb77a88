#pragma once

#include <vector>

#include "rflow/field.hpp"
#include "rflow/rng.hpp"

namespace rflow {

// Ring distribution: uniform angle, radius jittered by a Gaussian of the
// given standard deviation.
struct RingSpec {
    double radius = 1.0;
    double thickness = 0.02;
    double center_x = 0.0;
    double center_y = 0.0;
};

void validate_ring(const RingSpec& spec);

struct Ellipse {
    double center_x = 0.0;
    double center_y = 0.0;
    double axis_a = 1.0;
    double axis_b = 1.0;
    double angle = 0.0;      // radians
    double intensity = 0.0;  // additive
};

// Deterministic grayscale test image: additive ellipses over a constant
// background, final intensities clamped to [0.01, 1.0].
struct PhantomSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    double background = 0.05;
    std::vector<Ellipse> ellipses;

    static PhantomSpec demo();
};

void validate_phantom(const PhantomSpec& spec);

// cos(2*pi*frac) and sin(2*pi*frac) with exact values at quadrant multiples.
void sincos_tau(double frac, double& c, double& s);

Field sample_gaussian(std::size_t n, double mean_x, double mean_y, double stddev, Rng& rng);

Field sample_ring(std::size_t n, const RingSpec& spec, Rng& rng);

// Evenly spaced angles i/n around the ring, no radial jitter. Test helper.
Field sample_ring_stratified(std::size_t n, const RingSpec& spec);

Field generate_phantom(const PhantomSpec& spec);

// Reference pool at mixed quality levels: each point interpolates an
// independent (Gaussian source, ring target) draw at a level cycled through
// `levels` in equal proportions.
Field heterogeneous_references(std::size_t n, const RingSpec& ring, double source_std,
                               const std::vector<double>& levels, Rng& rng);

}  // namespace rflow
