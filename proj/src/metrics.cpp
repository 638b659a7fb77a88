#include "rflow/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rflow {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

double mse(const ImagePair& pair) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pair.x.size(); ++i) {
        const double d = pair.x[i] - pair.y[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pair.x.size());
}

std::array<double, kWindow * kWindow> ssim_kernel() {
    std::array<double, kWindow * kWindow> k{};
    const double half = (kWindow - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < kWindow; ++r) {
        for (std::size_t c = 0; c < kWindow; ++c) {
            const double dy = static_cast<double>(r) - half;
            const double dx = static_cast<double>(c) - half;
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * kSsimSigma * kSsimSigma));
            k[r * kWindow + c] = w;
            sum += w;
        }
    }
    for (double& w : k) w /= sum;
    return k;
}

}  // namespace

ImagePair ImagePair::make(const Field& candidate, const Field& reference) {
    require_same_shape(candidate, reference, "image pair");
    if (candidate.empty()) throw ValidationError("image pair: empty image");
    ImagePair pair{candidate, reference};
    for (double& v : pair.x.data) v = std::clamp(v, 0.0, 1.0);
    for (double& v : pair.y.data) v = std::clamp(v, 0.0, 1.0);
    return pair;
}

double psnr(const ImagePair& pair) {
    const double m = mse(pair);
    if (m < 1e-12) return 99.0;
    return -10.0 * std::log10(m);
}

double ssim(const ImagePair& pair) {
    if (pair.x.rows < kWindow || pair.x.cols < kWindow)
        throw ValidationError("ssim: image smaller than the 11x11 window");

    static const std::array<double, kWindow * kWindow> kernel = ssim_kernel();
    const std::size_t h = pair.x.rows, w = pair.x.cols;

    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t y0 = 0; y0 + kWindow <= h; ++y0) {
        for (std::size_t x0 = 0; x0 + kWindow <= w; ++x0) {
            double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
            for (std::size_t r = 0; r < kWindow; ++r) {
                for (std::size_t c = 0; c < kWindow; ++c) {
                    const double kw = kernel[r * kWindow + c];
                    const double a = pair.x.at(y0 + r, x0 + c);
                    const double b = pair.y.at(y0 + r, x0 + c);
                    mx += kw * a;
                    my += kw * b;
                    mxx += kw * a * a;
                    myy += kw * b * b;
                    mxy += kw * a * b;
                }
            }
            const double vx = mxx - mx * mx;
            const double vy = myy - my * my;
            const double cov = mxy - mx * my;
            const double s = ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                             ((mx * mx + my * my + kC1) * (vx + vy + kC2));
            total += s;
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

double rmse(const ImagePair& pair) { return std::sqrt(mse(pair)); }

double psnr(const Field& candidate, const Field& reference) {
    return psnr(ImagePair::make(candidate, reference));
}
double ssim(const Field& candidate, const Field& reference) {
    return ssim(ImagePair::make(candidate, reference));
}
double rmse(const Field& candidate, const Field& reference) {
    return rmse(ImagePair::make(candidate, reference));
}

namespace {

double mean_pairwise(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double ax = a.at(i, 0), ay = a.at(i, 1);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double dx = ax - b.at(j, 0);
            const double dy = ay - b.at(j, 1);
            acc += std::sqrt(dx * dx + dy * dy);
        }
    }
    return acc / (static_cast<double>(a.rows) * static_cast<double>(b.rows));
}

}  // namespace

double energy_distance(const Field& a, const Field& b) {
    if (a.cols != 2 || b.cols != 2) throw ValidationError("energy_distance: expected Nx2 point sets");
    if (a.rows == 0 || b.rows == 0) throw ValidationError("energy_distance: empty point set");
    const double cross = mean_pairwise(a, b);
    const double within_a = mean_pairwise(a, a);
    const double within_b = mean_pairwise(b, b);
    return std::sqrt(std::max(0.0, 2.0 * cross - within_a - within_b));
}

}  // namespace rflow
