#include "cogra/frame_search.hpp"

#include "cogra/errors.hpp"

namespace cogra {

std::vector<double> frame_candidates(double tau_ms, double tf_max_ms, int points) {
    if (points < 3) throw InvalidArgument("frame grid needs at least 3 points");
    const double tx_max = tf_max_ms - tau_ms;
    if (!(tx_max > 0.0)) throw InvalidArgument("maximum frame must exceed tau");
    std::vector<double> out(static_cast<std::size_t>(points));
    const double lo = std::log(1e-3);
    for (int i = 0; i < points; ++i) {
        const double u = lo * (1.0 - static_cast<double>(i) / (points - 1));
        out[static_cast<std::size_t>(i)] = tau_ms + tx_max * std::exp(u);
    }
    out.back() = tf_max_ms;
    return out;
}

bool is_multimodal(std::span<const double> values, double tol) {
    bool fell = false;
    double prev = 0.0;
    bool have = false;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        if (have) {
            const double d = v - prev;
            if (d < -tol) fell = true;
            if (d > tol && fell) return true;
        }
        prev = v;
        have = true;
    }
    return false;
}

}  // namespace cogra
