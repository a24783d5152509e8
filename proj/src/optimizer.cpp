#include "cogra/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cogra/errors.hpp"
#include "cogra/frame_search.hpp"

namespace cogra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FrameSearchOptions search_options(const SolverConfig& cfg) {
    FrameSearchOptions o;
    o.grid_points = cfg.frame_grid;
    o.tol_ms = cfg.frame_tol;
    o.flat_tol = 10.0 * cfg.dinkelbach_eps;
    return o;
}

OptResult infeasible_result(const CollisionFeasibility& cf) {
    OptResult r;
    r.feasible = false;
    r.post_busy = cf.post_busy;
    r.pc_avg = cf.post_busy;
    r.slacks.collision = cf.pc_max - cf.post_busy;
    r.op_case = OperatingCase::Infeasible;
    return r;
}

void fill_usage(OptResult& r, const PolicyEvaluation& ev, const FrameContext& ctx,
                const Scenario& sc) {
    r.rate = ev.rate;
    r.ee = ev.ee;
    r.avg_tx = ev.usage.avg_tx_power;
    r.avg_interference = ev.usage.avg_interference;
    r.pc_avg = ctx.pc;
    r.tf_opt = ctx.frame_ms;
    r.slacks.interference = sc.limits.q_avg - ev.usage.avg_interference;
    r.slacks.collision = sc.limits.pc_max - ctx.pc;
}

// Runs `at_frame` at the fixed frame, or searches (tau, tf_max] when free.
OptResult run_frames(const Scenario& sc, const std::function<OptResult(const Scenario&)>& at_frame) {
    sc.validate();
    const CollisionFeasibility cf = collision_feasibility(sc);
    if (!cf.feasible) return infeasible_result(cf);
    OptResult best;
    if (sc.frame_ms) {
        best = at_frame(sc);
    } else {
        auto eval = [&](double tf) { return at_frame(sc.at_frame(tf)); };
        auto found = search_frame(eval, sc.sensing.tau_ms, cf.tf_max_ms, search_options(sc.solver));
        best = found.best;
        best.multimodal = found.multimodal;
    }
    best.post_busy = cf.post_busy;
    if (!std::isfinite(best.objective)) {
        OptResult r = infeasible_result(cf);
        r.multimodal = best.multimodal;
        r.op_case = OperatingCase::Infeasible;
        return r;
    }
    return best;
}

OptResult ee_at_frame(const Scenario& sc) {
    const DinkelbachResult dk = dinkelbach_ee(sc);
    OptResult r;
    r.feasible = true;
    r.params = dk.params;
    r.iterations = dk.iterations;
    r.alpha_star = dk.alpha_star;
    r.f_value = dk.f_value;
    fill_usage(r, dk.eval, sc.context(), sc);
    if (sc.limits.p_avg) {
        r.slacks.power = *sc.limits.p_avg - r.avg_tx;
        r.p_op = *sc.limits.p_avg;
    }
    r.objective = r.ee;
    return r;
}

// EE of a constant power level at a fixed frame.
PolicyEvaluation constant_power_eval(const Scenario& sc, double power) {
    return evaluate_rule([power](double, double) { return power; }, sc);
}

OptResult constant_at_frame(const Scenario& sc) {
    const FrameContext ctx = sc.context();
    const double kappa = ctx.ratio * ctx.pr_idle_decision;
    double p_max = sc.limits.peak() ? *sc.limits.p_pk : *sc.limits.p_avg / kappa;
    p_max = std::min(p_max, interference_limited_power(ctx, kInf, sc.limits.q_avg));

    // EE(P) is quasiconcave in P; golden section in log P.
    auto ee = [&](double logp) { return constant_power_eval(sc, std::exp(logp)).ee; };
    double a = std::log(p_max) - std::log(1e8);
    double b = std::log(p_max);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = ee(x1), f2 = ee(x2);
    while (b - a > 1e-9) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = ee(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = ee(x1);
        }
    }
    double power = std::exp(0.5 * (a + b));
    if (ee(std::log(p_max)) >= ee(std::log(power))) power = p_max;

    const PolicyEvaluation ev = constant_power_eval(sc, power);
    OptResult r;
    r.feasible = true;
    r.constant_power = power;
    fill_usage(r, ev, ctx, sc);
    if (sc.limits.p_avg) r.slacks.power = *sc.limits.p_avg - r.avg_tx;
    r.objective = r.ee;
    return r;
}

PolicyEvaluation budget_policy_eval(const Scenario& sc, const FrameContext& ctx, PolicyParams p,
                                    double eta) {
    p.eta = eta;
    const PolicyMoments m =
        optimal_policy_moments(p, sc.fading(), sc.consts, sc.limits, sc.solver.exec);
    return evaluate(m, ctx, sc.limits.p_cr);
}

bool has_ee_min(const Scenario& sc) { return sc.limits.ee_min && *sc.limits.ee_min > 0.0; }

OptResult rate_at_frame(const Scenario& sc) {
    const FrameContext ctx = sc.context();
    OptResult r;
    std::optional<double> p_star = kInf;
    if (has_ee_min(sc)) {
        try {
            const PowerBudget pb = min_ee_power_budget(sc);
            p_star = pb.p_avg_star;
            r.eta = pb.eta;
        } catch (const NoBinding&) {
            p_star.reset();
        }
    }
    r.p_star = p_star.value_or(0.0);
    const OperatingPoint op = operating_power_case(sc, p_star);
    r.op_case = op.op_case;
    r.p_op = op.p_op;
    r.tf_opt = ctx.frame_ms;
    r.pc_avg = ctx.pc;
    r.slacks.collision = sc.limits.pc_max - ctx.pc;
    if (op.op_case == OperatingCase::Infeasible) {
        r.feasible = false;
        r.objective = -kInf;
        return r;
    }

    DualProblem pr;
    pr.base.variant =
        sc.limits.peak() ? PolicyVariant::RateMinEePeakTx : PolicyVariant::RateMinEeAvgTx;
    pr.base.alpha = 0.0;
    pr.base.budget_delta = sc.solver.budget_delta;
    pr.ctx = ctx;
    if (std::isfinite(op.p_op)) pr.power_budget = op.p_op;
    pr.interference_budget = sc.limits.q_avg;
    const DualSolution sol = solve_dual(pr, sc);

    r.feasible = true;
    r.params = sol.params;
    r.iterations.inner = sol.iterations;
    r.iterations.outer = 1;
    fill_usage(r, sol.eval, ctx, sc);
    if (pr.power_budget) r.slacks.power = *pr.power_budget - r.avg_tx;
    if (has_ee_min(sc)) r.slacks.ee = r.ee - *sc.limits.ee_min;
    r.objective = r.rate;
    return r;
}

}  // namespace

const char* to_string(OperatingCase c) {
    switch (c) {
    case OperatingCase::BudgetBinds: return "budget-binds";
    case OperatingCase::AvgTxBinds: return "avg-tx-binds";
    case OperatingCase::Infeasible: return "infeasible";
    }
    return "?";
}

CollisionFeasibility collision_feasibility(const Scenario& sc) {
    const IdlePosterior post = posterior_given_idle(sc.traffic, sc.sensing.p_d, sc.sensing.p_f);
    CollisionFeasibility cf{};
    cf.post_busy = post.post_busy;
    cf.pc_max = sc.limits.pc_max;
    if (sc.frame_ms) {
        // A fixed frame only needs a collision level reachable at some frame.
        cf.feasible = post.post_busy <= sc.limits.pc_max;
        cf.tf_max_ms = *sc.frame_ms;
        return cf;
    }
    const FrameBound fb =
        max_frame_for_collision(sc.traffic, sc.sensing, sc.limits.pc_max, sc.tf_cap());
    cf.feasible = fb.status != FrameBoundStatus::Infeasible;
    cf.unbounded = fb.status == FrameBoundStatus::Unbounded;
    cf.tf_max_ms = fb.tf_max_ms;
    return cf;
}

DinkelbachResult dinkelbach_ee(const Scenario& sc) {
    const SolverConfig& cfg = sc.solver;
    DinkelbachResult out;
    double alpha = 0.0;
    std::array<double, 2> warm{0.0, 0.0};
    for (int k = 0; k < cfg.max_outer; ++k) {
        const DualSolution sol = solve_multipliers(sc, alpha, warm);
        out.iterations.outer = k + 1;
        out.iterations.inner += sol.iterations;
        const double denom = sol.eval.usage.avg_tx_power + sc.limits.p_cr;
        const double f = sol.eval.rate - alpha * denom;
        out.alpha_history.push_back(alpha);
        out.f_history.push_back(f);
        if (std::abs(f) <= cfg.dinkelbach_eps) {
            out.alpha_star = alpha;
            out.f_value = f;
            out.ee = sol.eval.rate / denom;
            out.params = sol.params;
            out.eval = sol.eval;
            out.dual = sol;
            return out;
        }
        alpha = sol.eval.rate / denom;
        warm = sol.multipliers;
    }
    throw MaxIterations("Dinkelbach", cfg.max_outer);
}

OptResult optimize_ee(const Scenario& scenario) { return run_frames(scenario, ee_at_frame); }

OptResult optimize_constant_power_ee(const Scenario& scenario) {
    return run_frames(scenario, constant_at_frame);
}

PowerBudget min_ee_power_budget(const Scenario& sc) {
    if (!has_ee_min(sc)) throw InvalidArgument("min-EE budget needs a positive ee_min");
    const double ee_min = *sc.limits.ee_min;
    const FrameContext ctx = sc.context();
    PolicyParams p;
    p.variant = PolicyVariant::MinEeBudget;
    p.pc = ctx.pc;
    p.pr_idle_decision = ctx.pr_idle_decision;
    p.budget_delta = sc.solver.budget_delta;

    auto result = [&](double eta, const PolicyEvaluation& ev) {
        PowerBudget b;
        b.eta = eta;
        b.params = p;
        b.params.eta = eta;
        b.eval = ev;
        b.p_avg_star = ev.usage.avg_tx_power;
        return b;
    };

    const PolicyEvaluation at_inf = budget_policy_eval(sc, ctx, p, kInf);
    if (at_inf.ee < ee_min) throw NoBinding(at_inf.ee);
    if (sc.limits.peak()) {
        const PolicyEvaluation at_zero = budget_policy_eval(sc, ctx, p, 0.0);
        if (at_zero.ee >= ee_min) return result(0.0, at_zero);
    }
    double lo = 1e-12, hi = 1e12;
    PolicyEvaluation ev_lo = budget_policy_eval(sc, ctx, p, lo);
    if (ev_lo.ee >= ee_min) return result(lo, ev_lo);
    PolicyEvaluation ev_hi = budget_policy_eval(sc, ctx, p, hi);
    if (ev_hi.ee < ee_min) return result(kInf, at_inf);
    while (hi / lo - 1.0 > 1e-6) {
        const double mid = std::sqrt(lo * hi);
        const PolicyEvaluation ev = budget_policy_eval(sc, ctx, p, mid);
        if (ev.ee >= ee_min) {
            hi = mid;
            ev_hi = ev;
        } else {
            lo = mid;
        }
    }
    return result(hi, ev_hi);
}

OperatingPoint operating_power_case(const Scenario& sc, std::optional<double> p_avg_star) {
    const PowerConstraints& lim = sc.limits;
    if (!has_ee_min(sc))
        return {OperatingCase::BudgetBinds, lim.p_avg ? *lim.p_avg : kInf};
    const double target = *lim.ee_min - sc.solver.dinkelbach_eps;
    if (lim.peak()) {
        if (dinkelbach_ee(sc).ee < target || !p_avg_star) return {OperatingCase::Infeasible, 0.0};
        return {OperatingCase::BudgetBinds, *p_avg_star};
    }
    if (!p_avg_star) return {OperatingCase::Infeasible, 0.0};
    if (*lim.p_avg >= *p_avg_star) return {OperatingCase::BudgetBinds, *p_avg_star};
    if (dinkelbach_ee(sc).ee >= target) return {OperatingCase::AvgTxBinds, *lim.p_avg};
    return {OperatingCase::Infeasible, 0.0};
}

OptResult optimize_throughput_min_ee(const Scenario& scenario) {
    return run_frames(scenario, rate_at_frame);
}

}  // namespace cogra
