#pragma once

// One-dimensional maximization over the frame duration: a log-spaced coarse
// grid evaluated concurrently, then golden-section refinement inside the
// bracket around the best grid point.

#include <omp.h>

#include <cmath>
#include <exception>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

namespace cogra {

struct FrameSearchOptions {
    int grid_points = 200;
    double tol_ms = 1e-3;
    double flat_tol = 1e-4;  ///< differences below this count as flat
};

/// Frames whose transmit durations are log-spaced on [1e-3, 1]*(tf_max - tau);
/// the last point is tf_max exactly.
std::vector<double> frame_candidates(double tau_ms, double tf_max_ms, int points);

/// True when the sequence falls and later rises again by more than tol.
bool is_multimodal(std::span<const double> values, double tol);

template <class R>
struct FrameSearchResult {
    R best;
    double tf_opt = 0.0;
    double value = 0.0;
    bool multimodal = false;
    std::vector<double> frames;
    std::vector<double> values;
    int evaluations = 0;
};

/// `eval(tf)` returns a result with a `double objective` member to maximize.
template <class Eval>
auto search_frame(Eval&& eval, double tau_ms, double tf_max_ms, const FrameSearchOptions& opt)
    -> FrameSearchResult<std::decay_t<std::invoke_result_t<Eval&, double>>> {
    using R = std::decay_t<std::invoke_result_t<Eval&, double>>;
    FrameSearchResult<R> out;
    out.frames = frame_candidates(tau_ms, tf_max_ms, opt.grid_points);
    const auto n = static_cast<std::ptrdiff_t>(out.frames.size());
    std::vector<std::optional<R>> results(out.frames.size());
    std::vector<std::exception_ptr> errors(out.frames.size());
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[i] = eval(out.frames[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::size_t ib = 0;
    out.values.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.values.push_back(results[i]->objective);
        if (results[i]->objective > results[ib]->objective) ib = i;
    }
    out.multimodal = is_multimodal(out.values, opt.flat_tol);
    out.best = *results[ib];
    out.tf_opt = out.frames[ib];
    out.value = out.best.objective;
    out.evaluations = static_cast<int>(n);

    auto consider = [&](double tf, R r) {
        ++out.evaluations;
        const double v = r.objective;
        if (v > out.value) {
            out.value = v;
            out.tf_opt = tf;
            out.best = std::move(r);
        }
        return v;
    };

    double a = out.frames[ib > 0 ? ib - 1 : ib];
    double b = out.frames[ib + 1 < results.size() ? ib + 1 : ib];
    if (!(b - a > opt.tol_ms) || !std::isfinite(out.value)) return out;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = consider(x1, eval(x1));
    double f2 = consider(x2, eval(x2));
    while (b - a > opt.tol_ms) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = consider(x2, eval(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = consider(x1, eval(x1));
        }
    }
    return out;
}

}  // namespace cogra
