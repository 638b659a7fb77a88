#include "rflow/svf.hpp"

#include <cmath>
#include <string>

namespace rflow {

void validate_pair(const SupervisionPair& pair) {
    require_same_shape(pair.x_noisier, pair.x_cleaner, "supervision pair");
    if (!(pair.dt > 0.0) || !std::isfinite(pair.dt))
        throw ValidationError("supervision pair: dt must be finite and > 0");
}

Field target_velocity(const SupervisionPair& pair) {
    validate_pair(pair);
    // expm1 keeps the divisor accurate for small dt.
    const double divisor = std::expm1(pair.dt);
    Field out(pair.x_cleaner.rows, pair.x_cleaner.cols);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (pair.x_cleaner[i] - pair.x_noisier[i]) / divisor;
    return out;
}

Field oracle_velocity(const Field& x, const Field& x_inf) {
    require_same_shape(x, x_inf, "oracle_velocity");
    Field out(x.rows, x.cols);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_inf[i] - x[i];
    return out;
}

double loss_rf(const std::vector<Field>& predictions, const std::vector<Field>& targets) {
    if (predictions.empty()) throw ValidationError("loss_rf: empty batch");
    if (predictions.size() != targets.size())
        throw ValidationError("loss_rf: batch size mismatch (" + std::to_string(predictions.size()) +
                              " vs " + std::to_string(targets.size()) + ")");
    double total = 0.0;
    for (std::size_t b = 0; b < predictions.size(); ++b) {
        require_same_shape(predictions[b], targets[b], "loss_rf");
        double sq = 0.0;
        for (std::size_t i = 0; i < predictions[b].size(); ++i) {
            const double d = predictions[b][i] - targets[b][i];
            sq += d * d;
        }
        total += sq;
    }
    return total / static_cast<double>(predictions.size());
}

}  // namespace rflow
