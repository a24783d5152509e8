#include "cogra/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogra/errors.hpp"

namespace cogra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DualPoint {
    std::array<double, 2> m{0.0, 0.0};
    PolicyParams params;
    PolicyEvaluation eval;
    std::array<double, 2> slack{kInf, kInf};
    double q = kInf;  // dual objective, minimized
    bool ok = false;
};

bool unclamped(PolicyVariant v) {
    return v == PolicyVariant::EeAvgTx || v == PolicyVariant::RateMinEeAvgTx;
}

DualPoint evaluate_at(const DualProblem& pr, const Scenario& sc, std::array<double, 2> m) {
    DualPoint d;
    d.m = m;
    d.params = with_multipliers(pr.base, m);
    PolicyMoments mom;
    try {
        mom = optimal_policy_moments(d.params, sc.fading(), sc.consts, sc.limits, sc.solver.exec);
    } catch (const NonFiniteIntegrand&) {
        return d;
    }
    d.eval = evaluate(mom, pr.ctx, sc.limits.p_cr);
    const double tx = d.eval.usage.avg_tx_power;
    const double in = d.eval.usage.avg_interference;
    d.slack[1] = pr.interference_budget - in;
    d.q = d.eval.rate - pr.base.alpha * tx + m[1] * d.slack[1];
    if (pr.power_budget) {
        d.slack[0] = *pr.power_budget - tx;
        d.q += m[0] * d.slack[0];
    }
    d.ok = std::isfinite(d.q);
    return d;
}

bool converged(const DualPoint& d, const DualProblem& pr, double delta) {
    const double limits[2] = {pr.power_budget.value_or(kInf), pr.interference_budget};
    for (int i = 0; i < 2; ++i) {
        if (i == 0 && !pr.power_budget) continue;
        if (d.slack[i] < -delta * std::min(1.0, limits[i])) return false;
        if (std::abs(d.m[i] * d.slack[i]) > delta) return false;
    }
    return true;
}

// Curvature of the dual: H = -d(slack)/dm, positive semidefinite.
std::array<double, 3> dual_curvature(const DualPoint& d, const FrameContext& ctx) {
    const double kappa = ctx.ratio * ctx.pr_idle_decision;
    const PolicyMoments& mo = d.eval.moments;
    return {-kappa * mo.mean_slope, -kappa * ctx.pc * mo.mean_slope_g,
            -kappa * ctx.pc * ctx.pc * mo.mean_slope_g2};
}

std::array<double, 2> project(std::array<double, 2> m, bool has_budget) {
    m[0] = has_budget ? std::max(m[0], 0.0) : 0.0;
    m[1] = std::max(m[1], 0.0);
    return m;
}

}  // namespace

PolicyParams with_multipliers(PolicyParams p, const std::array<double, 2>& m) {
    switch (p.variant) {
    case PolicyVariant::EeAvgTx:
        p.lambda = m[0];
        p.nu = m[1];
        break;
    case PolicyVariant::EePeakTx:
        p.mu = m[1];
        break;
    case PolicyVariant::RateMinEeAvgTx:
    case PolicyVariant::RateMinEePeakTx:
        p.vartheta = m[0];
        p.varphi = m[1];
        break;
    case PolicyVariant::MinEeBudget:
        throw InvalidVariantParams("min-ee-budget policy has no dual multipliers");
    }
    return p;
}

DualSolution solve_dual(const DualProblem& pr, const Scenario& sc, std::array<double, 2> start) {
    const SolverConfig& cfg = sc.solver;
    const bool has_budget = pr.power_budget.has_value();
    if (unclamped(pr.base.variant) && !has_budget)
        throw InvalidArgument("average-power policy needs an average power budget");
    if (pr.base.variant == PolicyVariant::EePeakTx && has_budget)
        throw InvalidArgument("peak-power EE policy takes no average power budget");

    PolicyParams base = pr.base;
    base.pc = pr.ctx.pc;
    base.pr_idle_decision = pr.ctx.pr_idle_decision;
    DualProblem problem = pr;
    problem.base = base;

    std::array<double, 2> m = project(start, has_budget);
    // The unclamped policy is unbounded while alpha + m0 = 0; start from the
    // level of a constant power spending the whole budget.
    if (unclamped(base.variant) && base.alpha + m[0] <= 0.0) {
        const double kappa = pr.ctx.ratio * pr.ctx.pr_idle_decision;
        const double level = *pr.power_budget / std::max(kappa, 1e-300) + 1.0;
        m[0] = kLog2e / level;
    }

    DualPoint cur = evaluate_at(problem, sc, m);
    for (int k = 0; !cur.ok && k < 200; ++k) {
        m[0] = std::max(2.0 * m[0], 1e-6);
        cur = evaluate_at(problem, sc, m);
    }
    if (!cur.ok) throw NonFiniteIntegrand(0.0, 0.0);

    int it = 0;
    for (;; ++it) {
        if (converged(cur, problem, cfg.slack_delta)) break;
        if (it >= cfg.max_inner)
            throw MaxIterations("multiplier update", it, cur.slack[0], cur.slack[1]);

        const std::array<double, 2> s = {has_budget ? cur.slack[0] : 0.0, cur.slack[1]};
        if (cfg.update == MultiplierUpdate::Plain) {
            std::array<double, 2> next =
                project({cur.m[0] - cfg.step_t * s[0], cur.m[1] - cfg.step_t * s[1]}, has_budget);
            DualPoint cand = evaluate_at(problem, sc, next);
            for (int k = 0; !cand.ok && k < 60; ++k) {
                for (int i = 0; i < 2; ++i) next[i] = 0.5 * (next[i] + cur.m[i]);
                cand = evaluate_at(problem, sc, next);
            }
            if (!cand.ok) throw MaxIterations("multiplier update", it, cur.slack[0], cur.slack[1]);
            cur = cand;
            continue;
        }

        bool active[2];
        for (int i = 0; i < 2; ++i)
            active[i] = (i == 1 || has_budget) && (cur.m[i] > 0.0 || s[i] < 0.0);
        const auto h = dual_curvature(cur, problem.ctx);
        const double hd[2] = {h[0], h[2]};
        std::array<double, 2> dir{0.0, 0.0};
        const double det = h[0] * h[2] - h[1] * h[1];
        if (active[0] && active[1] && h[0] > 0.0 && h[2] > 0.0 && det > 1e-10 * h[0] * h[2]) {
            dir[0] = -(h[2] * s[0] - h[1] * s[1]) / det;
            dir[1] = -(h[0] * s[1] - h[1] * s[0]) / det;
        } else {
            for (int i = 0; i < 2; ++i) {
                if (!active[i]) continue;
                if (hd[i] > 0.0)
                    dir[i] = -s[i] / hd[i];
                else if (s[i] > 0.0)
                    dir[i] = -0.5 * cur.m[i];
                else
                    dir[i] = std::max(cur.m[i], 1e-2);
            }
        }

        // Near-flat curvature (every node clamped or at zero power) gives
        // enormous Newton steps; grow a multiplier at most tenfold per iteration.
        for (int i = 0; i < 2; ++i) {
            const double cap = 10.0 * std::max(cur.m[i], 1e-2);
            if (dir[i] > cap) {
                const double scale = cap / dir[i];
                dir[0] *= scale;
                dir[1] *= scale;
            }
        }

        double step = 1.0;
        bool moved = false;
        for (int k = 0; k < 60; ++k, step *= 0.5) {
            const std::array<double, 2> next =
                project({cur.m[0] + step * dir[0], cur.m[1] + step * dir[1]}, has_budget);
            if (next == cur.m) break;
            DualPoint cand = evaluate_at(problem, sc, next);
            if (!cand.ok) continue;
            const double decrease =
                s[0] * (next[0] - cur.m[0]) + s[1] * (next[1] - cur.m[1]);
            if (cand.q <= cur.q + 1e-4 * decrease + 1e-13 * std::abs(cur.q) ||
                converged(cand, problem, cfg.slack_delta)) {
                cur = cand;
                moved = true;
                break;
            }
        }
        if (!moved) throw MaxIterations("multiplier update", it, cur.slack[0], cur.slack[1]);
    }

    DualSolution out;
    out.multipliers = cur.m;
    out.params = cur.params;
    out.eval = cur.eval;
    out.slack_power = cur.slack[0];
    out.slack_interference = cur.slack[1];
    out.iterations = it;
    return out;
}

DualSolution solve_multipliers(const Scenario& scenario, double alpha,
                               std::array<double, 2> start) {
    if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
    DualProblem pr;
    pr.base.variant = scenario.limits.peak() ? PolicyVariant::EePeakTx : PolicyVariant::EeAvgTx;
    pr.base.alpha = alpha;
    pr.base.budget_delta = scenario.solver.budget_delta;
    pr.ctx = scenario.context();
    if (!scenario.limits.peak()) pr.power_budget = scenario.limits.p_avg;
    pr.interference_budget = scenario.limits.q_avg;
    return solve_dual(pr, scenario, start);
}

}  // namespace cogra
