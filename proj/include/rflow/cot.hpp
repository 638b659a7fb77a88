#pragma once

#include "rflow/field.hpp"

namespace rflow {

// A relative span on the quality-time axis t in (0, +inf): t = 0 is the pure
// noise endpoint, t -> +inf the clean limit. Valid segments have
// 0 < t_i <= t <= t_j with t_i < t_j; interior operations allow t to sit on
// either endpoint.
struct QualitySegment {
    double t_i = 0.0;
    double t = 0.0;
    double t_j = 0.0;
};

void validate_segment(const QualitySegment& seg);

// Interpolation weight of the near endpoint:
//   lambda = (e^{-t} - e^{-t_j}) / (e^{-t_i} - e^{-t_j}).
// Equals 1 at t = t_i and 0 at t = t_j, strictly decreasing between.
double lambda_weight(const QualitySegment& seg);

// Endpoints of one per-sample path from a noise draw to its clean limit.
struct ConditionalPathSpec {
    Field x0;     // noise endpoint sample
    Field x_inf;  // clean endpoint sample
};

void validate_path(const ConditionalPathSpec& path);

// Point on the conditional path: e^{-t} x0 + (1 - e^{-t}) x_inf, t >= 0.
Field conditional_point(const ConditionalPathSpec& path, double t);

// Interpolation between two known quality levels: lambda x_ti + (1-lambda) x_tj.
Field relative_point(const Field& x_ti, const Field& x_tj, const QualitySegment& seg);

// Max-norm defect of the component identity: interpolating between two points
// of a conditional path must land back on that path. Analytically zero.
double component_residual(const ConditionalPathSpec& path, const QualitySegment& seg);

// Coefficient defect of the composition identity: eliminating the middle
// level t2 between the (t1,t2) and (t2,t3) parameterizations must reproduce
// the direct (t1,t3) weight. Analytically zero; requires 0 < t1 < t2 < t3 and
// t in [t1, t3].
double composition_residual(double t1, double t2, double t3, double t);

}  // namespace rflow
