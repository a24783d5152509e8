#pragma once

// Expectations over two independent unit-mean exponential power gains
// (|h|^2 on the secondary link, |g|^2 on the interference link).

#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "cogra/errors.hpp"
#include "cogra/kernels.hpp"
#include "cogra/rng.hpp"

namespace cogra {

struct GaussLaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;  ///< for the density e^{-x}, summing to 1
};

GaussLaguerreRule gauss_laguerre(int order);

struct FadingNode {
    double gain_h;
    double gain_g;
    double weight;
};

class FadingGrid {
public:
    /// Tensor product of `order`-point Gauss-Laguerre rules.
    static FadingGrid build(int order);

    std::span<const FadingNode> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    int order() const { return order_; }

private:
    std::vector<FadingNode> nodes_;
    int order_ = 0;
};

inline FadingGrid build_grid(int order) { return FadingGrid::build(order); }

inline constexpr int kDefaultGridOrder = 64;

/// Weighted sum of f over the grid for an array-valued integrand
/// f(h, g) -> Sums<N>. Throws NonFiniteIntegrand on the first bad node.
template <std::size_t N, class F>
Sums<N> expect_many(const FadingGrid& grid, F&& f, Exec exec = Exec::Parallel) {
    const auto nodes = grid.nodes();
    auto term = [&](std::size_t i) {
        const FadingNode& nd = nodes[i];
        Sums<N> v = f(nd.gain_h, nd.gain_g);
        for (double& x : v) x *= nd.weight;
        return v;
    };
    std::size_t bad = nodes.size();
    Sums<N> s = reduce<N>(exec, nodes.size(), term, &bad);
    if (bad < nodes.size()) throw NonFiniteIntegrand(nodes[bad].gain_h, nodes[bad].gain_g);
    return s;
}

template <class F>
double expect(const FadingGrid& grid, F&& f, Exec exec = Exec::Parallel) {
    return expect_many<1>(
        grid, [&](double h, double g) { return Sums<1>{f(h, g)}; }, exec)[0];
}

struct McEstimate {
    double estimate;
    double standard_error;
};

/// Mean and standard error from sum and sum of squares over n samples.
McEstimate mc_summary(double sum, double sum_sq, std::size_t n);

/// Unit-mean exponential draws for sample i: (h, g).
inline std::pair<double, double> exp_pair(const CounterRng& rng, std::uint64_t i) {
    return {-std::log1p(-rng.uniform(2 * i)), -std::log1p(-rng.uniform(2 * i + 1))};
}

/// Monte Carlo estimate of E f(h, g) over i.i.d. Exp(1) x Exp(1) draws.
template <class F>
McEstimate mc_expect(F&& f, std::size_t samples, std::uint64_t seed,
                     Exec exec = Exec::Parallel) {
    if (samples < 1000) throw InvalidArgument("mc_expect needs at least 1000 samples");
    const CounterRng rng(seed);
    auto term = [&](std::size_t i) {
        const auto [h, g] = exp_pair(rng, i);
        const double v = f(h, g);
        return Sums<2>{v, v * v};
    };
    const Sums<2> s = reduce<2>(exec, samples, term);
    return mc_summary(s[0], s[1], samples);
}

}  // namespace cogra
