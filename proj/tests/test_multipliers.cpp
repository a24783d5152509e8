#include <doctest.h>

#include <cmath>

#include "cogra/errors.hpp"
#include "cogra/multipliers.hpp"
#include "common.hpp"

using namespace cogra;
using cogra::testing::peak_scenario;
using cogra::testing::voip_scenario;

namespace {

void check_kkt(const DualSolution& s, const Scenario& sc) {
    const double d = sc.solver.slack_delta;
    CHECK(s.multipliers[0] >= 0.0);
    CHECK(s.multipliers[1] >= 0.0);
    if (!sc.limits.peak()) {
        CHECK(s.slack_power >= -d);
        CHECK(std::abs(s.multipliers[0] * s.slack_power) <= d);
    }
    CHECK(s.slack_interference >= -d);
    CHECK(std::abs(s.multipliers[1] * s.slack_interference) <= d);
}

}  // namespace

TEST_CASE("loose constraints leave the multipliers at zero") {
    Scenario sc = voip_scenario();
    sc.limits.p_avg = 1e6;
    sc.limits.q_avg = 1e6;
    const DualSolution s = solve_multipliers(sc, 1.0);
    CHECK(s.multipliers[0] == 0.0);
    CHECK(s.multipliers[1] == 0.0);
    CHECK(s.iterations == 0);
}

TEST_CASE("binding transmit budget is met") {
    Scenario sc = voip_scenario();
    sc.limits.p_avg = 0.01;
    sc.limits.q_avg = 1e3;
    const DualSolution s = solve_multipliers(sc, 0.5);
    CHECK(s.multipliers[0] > 0.0);
    CHECK(std::abs(resource_usage(s.params, sc).avg_tx_power - 0.01) <= sc.solver.slack_delta);
    check_kkt(s, sc);
}

TEST_CASE("both constraints at the VoIP setting") {
    const Scenario sc = voip_scenario();
    for (double alpha : {0.0, 0.5, 1.8}) {
        const DualSolution s = solve_multipliers(sc, alpha);
        check_kkt(s, sc);
        CHECK(s.multipliers[1] > 0.0);  // Q_avg = -20 dB binds
    }
}

TEST_CASE("peak variant multiplier") {
    const Scenario sc = peak_scenario(10.0);
    const DualSolution s = solve_multipliers(sc, 0.5);
    CHECK(s.params.variant == PolicyVariant::EePeakTx);
    CHECK(s.multipliers[0] == 0.0);
    check_kkt(s, sc);
}

TEST_CASE("plain subgradient steps: smaller step lands in the same band") {
    Scenario sc = voip_scenario();
    sc.limits.p_avg = 0.3;
    sc.limits.q_avg = 1e3;
    sc.solver.update = MultiplierUpdate::Plain;
    sc.solver.max_inner = 200000;
    const DualSolution a = solve_multipliers(sc, 1.0);
    sc.solver.step_t = 0.01;
    const DualSolution b = solve_multipliers(sc, 1.0);
    check_kkt(a, sc);
    check_kkt(b, sc);
    CHECK(b.iterations > a.iterations);
    // each end point has |slack| <= delta/lambda; map slack to lambda through the curvature
    const FrameContext ctx = sc.context();
    const double curv = -ctx.ratio * ctx.pr_idle_decision * a.eval.moments.mean_slope;
    REQUIRE(curv > 0.0);
    const double band = 2.0 * sc.solver.slack_delta / (a.multipliers[0] * curv);
    CHECK(std::abs(a.multipliers[0] - b.multipliers[0]) <= band);

    sc.solver.update = MultiplierUpdate::Scaled;
    const DualSolution c = solve_multipliers(sc, 1.0);
    CHECK(std::abs(a.multipliers[0] - c.multipliers[0]) <= band);
    CHECK(c.iterations < a.iterations);
}

TEST_CASE("throughput policy (alpha = 0) has the highest rate") {
    const Scenario sc = voip_scenario();
    const DualSolution zero = solve_multipliers(sc, 0.0);
    for (double alpha : {0.2, 1.0, 3.0}) {
        const DualSolution s = solve_multipliers(sc, alpha);
        CHECK(zero.eval.rate >= s.eval.rate - 1e-6);
    }
}

TEST_CASE("iteration cap raises with the last slacks") {
    Scenario sc = voip_scenario();
    sc.solver.max_inner = 1;
    sc.solver.update = MultiplierUpdate::Plain;
    try {
        solve_multipliers(sc, 0.0);
        FAIL("expected MaxIterations");
    } catch (const MaxIterations& e) {
        CHECK(e.iterations == 1);
        CHECK(std::isfinite(e.slack_interference));
    }
}

TEST_CASE("min-EE budget policy has no dual") {
    PolicyParams p;
    p.variant = PolicyVariant::MinEeBudget;
    CHECK_THROWS_AS(with_multipliers(p, {0.0, 0.0}), InvalidVariantParams);
}
