#pragma once

#include "rflow/field.hpp"

namespace rflow {

// Candidate/reference images with values clamped into [0,1] on construction.
struct ImagePair {
    Field x;  // candidate
    Field y;  // reference

    static ImagePair make(const Field& candidate, const Field& reference);
};

// 10 log10(1 / MSE), capped at 99.0 dB when MSE < 1e-12.
double psnr(const ImagePair& pair);

// Mean structural similarity over all valid 11x11 Gaussian-weighted windows
// (sigma = 1.5, stride 1). Both dimensions must be >= 11.
double ssim(const ImagePair& pair);

// Root mean squared error on [0,1] images.
double rmse(const ImagePair& pair);

// Convenience wrappers that clamp and pair internally.
double psnr(const Field& candidate, const Field& reference);
double ssim(const Field& candidate, const Field& reference);
double rmse(const Field& candidate, const Field& reference);

// Distance between 2D point clouds:
//   sqrt(max(0, 2 E|a-b| - E|a-a'| - E|b-b'|))
// with expectations over all (ordered) pairs. Zero on identical multisets.
double energy_distance(const Field& a, const Field& b);

}  // namespace rflow
