#include "cogra/fading.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cogra {

namespace {

struct LaguerreValues {
    double value;       // L_n(x)
    double previous;    // L_{n-1}(x)
};

LaguerreValues laguerre(int n, double x) {
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

}  // namespace

GaussLaguerreRule gauss_laguerre(int order) {
    if (order < 2) throw InvalidArgument("Gauss-Laguerre order must be at least 2");

    // Golub-Welsch: Jacobi matrix of the Laguerre recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i < order; ++i) {
        jacobi(i, i) = 2.0 * i + 1.0;
        if (i + 1 < order) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);

    GaussLaguerreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = eig.eigenvalues()(i);
        // Newton polish on L_n; x L_n' = n (L_n - L_{n-1}).
        for (int it = 0; it < 3; ++it) {
            const LaguerreValues lv = laguerre(order, x);
            const double deriv = order * (lv.value - lv.previous) / x;
            if (deriv == 0.0) break;
            x -= lv.value / deriv;
        }
        const double ln1 = laguerre(order + 1, x).value;
        rule.nodes[i] = x;
        rule.weights[i] = x / ((order + 1.0) * (order + 1.0) * ln1 * ln1);
    }
    return rule;
}

FadingGrid FadingGrid::build(int order) {
    const GaussLaguerreRule rule = gauss_laguerre(order);
    FadingGrid grid;
    grid.order_ = order;
    grid.nodes_.reserve(static_cast<std::size_t>(order) * order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            grid.nodes_.push_back({rule.nodes[i], rule.nodes[j], rule.weights[i] * rule.weights[j]});
    return grid;
}

McEstimate mc_summary(double sum, double sum_sq, std::size_t n) {
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;
    double var = (sum_sq - dn * mean * mean) / (dn - 1.0);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / dn)};
}

}  // namespace cogra
