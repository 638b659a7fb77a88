#include "rflow/cot.hpp"

#include <cmath>
#include <string>

namespace rflow {

void validate_segment(const QualitySegment& seg) {
    if (!std::isfinite(seg.t_i) || !std::isfinite(seg.t) || !std::isfinite(seg.t_j))
        throw ValidationError("quality segment: times must be finite");
    if (!(seg.t_i > 0.0)) throw ValidationError("quality segment: t_i must be > 0");
    if (!(seg.t_i < seg.t_j))
        throw ValidationError("quality segment: need t_i < t_j, got t_i=" +
                              std::to_string(seg.t_i) + " t_j=" + std::to_string(seg.t_j));
    if (seg.t < seg.t_i || seg.t > seg.t_j)
        throw ValidationError("quality segment: t outside [t_i, t_j]");
}

double lambda_weight(const QualitySegment& seg) {
    validate_segment(seg);
    const double ei = std::exp(-seg.t_i);
    const double ej = std::exp(-seg.t_j);
    const double e = std::exp(-seg.t);
    return (e - ej) / (ei - ej);
}

void validate_path(const ConditionalPathSpec& path) {
    require_same_shape(path.x0, path.x_inf, "conditional path");
}

Field conditional_point(const ConditionalPathSpec& path, double t) {
    validate_path(path);
    if (!(t >= 0.0) || !std::isfinite(t))
        throw ValidationError("conditional_point: t must be finite and >= 0");
    const double w = std::exp(-t);
    const double wc = 1.0 - w;
    Field out(path.x0.rows, path.x0.cols);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = w * path.x0[i] + wc * path.x_inf[i];
    return out;
}

Field relative_point(const Field& x_ti, const Field& x_tj, const QualitySegment& seg) {
    require_same_shape(x_ti, x_tj, "relative_point");
    const double lam = lambda_weight(seg);
    const double lamc = 1.0 - lam;
    Field out(x_ti.rows, x_ti.cols);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lam * x_ti[i] + lamc * x_tj[i];
    return out;
}

double component_residual(const ConditionalPathSpec& path, const QualitySegment& seg) {
    const Field at_ti = conditional_point(path, seg.t_i);
    const Field at_tj = conditional_point(path, seg.t_j);
    const Field interpolated = relative_point(at_ti, at_tj, seg);
    const Field direct = conditional_point(path, seg.t);
    return max_abs_diff(interpolated, direct);
}

double composition_residual(double t1, double t2, double t3, double t) {
    if (!std::isfinite(t1) || !std::isfinite(t2) || !std::isfinite(t3) || !std::isfinite(t))
        throw ValidationError("composition_residual: times must be finite");
    if (!(0.0 < t1 && t1 < t2 && t2 < t3))
        throw ValidationError("composition_residual: need 0 < t1 < t2 < t3");
    if (t < t1 || t > t3) throw ValidationError("composition_residual: t outside [t1, t3]");

    const double e1 = std::exp(-t1);
    const double e2 = std::exp(-t2);
    const double e3 = std::exp(-t3);
    const double e = std::exp(-t);

    const double lam12 = (e - e2) / (e1 - e2);
    const double lam23 = (e - e3) / (e2 - e3);
    // lam23 - 1 and 1 - lam12 in subtraction-free form; near t = t2 the naive
    // differences lose all significant digits.
    const double lam23_m1 = (e - e2) / (e2 - e3);
    const double one_m_lam12 = (e1 - e) / (e1 - e2);

    const double denom = lam12 + lam23_m1;
    const double composed_near = lam12 * lam23 / denom;        // coefficient of the t1 endpoint
    const double composed_far = one_m_lam12 * lam23_m1 / denom;  // coefficient of the t3 endpoint

    const double lam13 = (e - e3) / (e1 - e3);
    return std::max(std::abs(composed_near - lam13), std::abs(composed_far - (1.0 - lam13)));
}

}  // namespace rflow
