#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cogra/errors.hpp"
#include "cogra/fading.hpp"

using namespace cogra;

TEST_CASE("Gauss-Laguerre rule integrates polynomials exactly") {
    const GaussLaguerreRule r = gauss_laguerre(16);
    // E[X^k] = k! for X ~ Exp(1), exact up to degree 2n-1
    double fact = 1.0;
    for (int k = 0; k < 31; ++k) {
        if (k > 0) fact *= k;
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
        CHECK(s == doctest::Approx(fact).epsilon(1e-9));
    }
}

TEST_CASE("grid normalization and first moments at order 64") {
    const FadingGrid g = build_grid(64);
    CHECK(g.size() == 4096u);
    double w = 0.0;
    for (const FadingNode& n : g.nodes()) {
        CHECK(n.weight > 0.0);
        CHECK(n.gain_h >= 0.0);
        w += n.weight;
    }
    CHECK(std::abs(w - 1.0) < 1e-12);
    CHECK(std::abs(expect(g, [](double h, double) { return h; }) - 1.0) < 1e-10);
    CHECK(std::abs(expect(g, [](double, double gg) { return gg; }) - 1.0) < 1e-10);
}

TEST_CASE("expectations of closed-form integrands") {
    const FadingGrid g = build_grid(64);
    CHECK(expect(g, [](double, double) { return 3.5; }) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(std::abs(expect(g, [](double h, double) { return std::exp(-h); }) - 0.5) < 1e-8);
    CHECK(std::abs(expect(g, [](double h, double gg) { return h * gg; }) - 1.0) < 1e-8);
    // e*E1(1)/ln 2
    const double log_rate = expect(g, [](double h, double) { return std::log2(1.0 + h); });
    CHECK(std::abs(log_rate - 0.860347382270886) < 1e-4);
}

TEST_CASE("non-finite integrand is reported with its node") {
    const FadingGrid g = build_grid(8);
    try {
        expect(g, [](double h, double) { return h > 5.0 ? NAN : h; });
        FAIL("expected NonFiniteIntegrand");
    } catch (const NonFiniteIntegrand& e) {
        CHECK(e.gain_h > 5.0);
    }
    CHECK_THROWS_AS(expect(g, [](double, double) { return INFINITY; }, Exec::Serial),
                    NonFiniteIntegrand);
}

TEST_CASE("Monte Carlo expectation") {
    const auto a = mc_expect([](double h, double) { return h; }, 1000000, 42);
    const auto b = mc_expect([](double h, double) { return h; }, 1000000, 42);
    CHECK(a.estimate == b.estimate);
    CHECK(a.standard_error == b.standard_error);
    CHECK(std::abs(a.estimate - 1.0) < 3.0 * a.standard_error);

    const FadingGrid g = build_grid(64);
    auto f = [](double h, double) { return std::log2(1.0 + h); };
    const auto m = mc_expect(f, 1000000, 7);
    CHECK(std::abs(m.estimate - expect(g, f)) < 3.0 * m.standard_error);
    CHECK_THROWS_AS(mc_expect(f, 999, 1), InvalidArgument);
}

TEST_CASE("serial and parallel expectation agree; serial sums left to right") {
    const FadingGrid g = build_grid(64);
    auto f = [](double h, double gg) { return std::log1p(h / (0.01 + 0.3 * gg)); };
    const double s = expect(g, f, Exec::Serial);
    const double p = expect(g, f, Exec::Parallel);
    CHECK(s == doctest::Approx(p).epsilon(1e-13));
    double ref = 0.0;
    for (const FadingNode& n : g.nodes()) ref += n.weight * f(n.gain_h, n.gain_g);
    CHECK(s == ref);
}
