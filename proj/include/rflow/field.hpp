#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rflow/errors.hpp"

namespace rflow {

// Flat real-valued sample container. Two interpretations share the layout:
// a grayscale image (rows = height, cols = width, row-major) or a 2D point
// set (rows = N, cols = 2).
struct Field {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Field() = default;
    Field(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Field image(std::size_t width, std::size_t height, double fill = 0.0) {
        return Field(height, width, fill);
    }
    static Field points(std::size_t n, double fill = 0.0) { return Field(n, 2, fill); }

    std::size_t size() const { return data.size(); }
    std::size_t width() const { return cols; }
    std::size_t height() const { return rows; }
    bool empty() const { return data.empty(); }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    bool same_shape(const Field& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_same_shape(const Field& a, const Field& b, const char* what) {
    if (!a.same_shape(b))
        throw ValidationError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows) +
                              "x" + std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                              std::to_string(b.cols) + ")");
}

inline double max_abs_diff(const Field& a, const Field& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace rflow
