#include "cogra/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogra/errors.hpp"
#include "cogra/scenario.hpp"

namespace cogra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nonneg(double x) { return x >= 0.0 && std::isfinite(x); }

bool clamps_at_peak(PolicyVariant v, const PowerConstraints& limits) {
    switch (v) {
    case PolicyVariant::EePeakTx:
    case PolicyVariant::RateMinEePeakTx:
        if (!limits.p_pk) throw InvalidVariantParams(std::string(to_string(v)) + " needs p_pk");
        return true;
    case PolicyVariant::MinEeBudget:
        return limits.p_pk.has_value();
    default:
        return false;
    }
}

// Marginal rate dR/dP at one node for collision weight w.
double marginal_rate(double h, double p, double w, const ChannelConstants& c) {
    return kLog2e * ((1.0 - w) * h / (c.n0 + p * h) + w * h / (c.n0 + c.sigma_s2 + p * h));
}

double marginal_rate_slope(double h, double p, double w, const ChannelConstants& c) {
    const double a = c.n0 + p * h;
    const double b = c.n0 + c.sigma_s2 + p * h;
    return -kLog2e * h * h * ((1.0 - w) / (a * a) + w / (b * b));
}

}  // namespace

const char* to_string(PolicyVariant v) {
    switch (v) {
    case PolicyVariant::EeAvgTx: return "ee-avg-tx";
    case PolicyVariant::EePeakTx: return "ee-peak-tx";
    case PolicyVariant::MinEeBudget: return "min-ee-budget";
    case PolicyVariant::RateMinEeAvgTx: return "rate-min-ee-avg-tx";
    case PolicyVariant::RateMinEePeakTx: return "rate-min-ee-peak-tx";
    }
    return "?";
}

void ChannelConstants::validate() const {
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw InvalidArgument("n0 must be positive");
    if (!nonneg(sigma_s2)) throw InvalidArgument("sigma_s2 must be nonnegative");
}

void PowerConstraints::validate() const {
    if (p_avg.has_value() == p_pk.has_value())
        throw InvalidArgument("exactly one of p_avg / p_pk must be given");
    if (p_avg && !(*p_avg > 0.0)) throw InvalidArgument("p_avg must be positive");
    if (p_pk && !(*p_pk > 0.0 && std::isfinite(*p_pk)))
        throw InvalidArgument("p_pk must be positive and finite");
    if (!(q_avg > 0.0)) throw InvalidArgument("q_avg must be positive");
    if (!(pc_max > 0.0 && pc_max < 1.0)) throw InvalidArgument("pc_max must lie in (0, 1)");
    if (ee_min && !nonneg(*ee_min)) throw InvalidArgument("ee_min must be nonnegative");
    if (!(p_cr > 0.0) || !std::isfinite(p_cr)) throw InvalidArgument("p_cr must be positive");
}

void PolicyParams::validate() const {
    for (double m : {alpha, lambda, nu, mu, vartheta, varphi})
        if (!nonneg(m)) throw InvalidArgument("multipliers must be finite and nonnegative");
    if (!(pc >= 0.0 && pc <= 1.0)) throw InvalidArgument("pc must lie in [0, 1]");
    if (!(pr_idle_decision >= 0.0 && pr_idle_decision <= 1.0))
        throw InvalidArgument("pr_idle_decision must lie in [0, 1]");
    if (variant == PolicyVariant::MinEeBudget) {
        if (!eta) throw InvalidVariantParams("min-ee-budget policy needs eta");
        if (!(*eta >= 0.0)) throw InvalidArgument("eta must be nonnegative");
    }
}

double stationarity_level(const PolicyParams& p, double gain_g, const PowerConstraints& limits) {
    switch (p.variant) {
    case PolicyVariant::EeAvgTx:
        return p.alpha + p.lambda + p.nu * p.pc * gain_g;
    case PolicyVariant::EePeakTx:
        return p.alpha + p.mu * p.pc * gain_g;
    case PolicyVariant::MinEeBudget: {
        if (!p.eta) throw InvalidVariantParams("min-ee-budget policy needs eta");
        if (!limits.ee_min) throw InvalidVariantParams("min-ee-budget policy needs ee_min");
        const double eta = *p.eta;
        if (std::isinf(eta)) return *limits.ee_min;
        return eta * *limits.ee_min / (1.0 + eta);
    }
    case PolicyVariant::RateMinEeAvgTx:
    case PolicyVariant::RateMinEePeakTx:
        return p.vartheta + p.varphi * p.pc * gain_g;
    }
    return 0.0;
}

double collision_weight(const PolicyParams& p) {
    if (p.variant == PolicyVariant::MinEeBudget && p.budget_delta == BudgetDeltaForm::AsPrinted)
        return p.pr_idle_decision * p.pc;
    return p.pc;
}

QuadraticTerms quadratic_terms(double level, double gain_h, double weight,
                               const ChannelConstants& c) {
    const double cc = kLog2e / level;
    const double a = cc - (2.0 * c.n0 + c.sigma_s2) / gain_h;
    const double delta =
        a * a - 4.0 / gain_h *
                    (c.n0 * (c.n0 + c.sigma_s2) / gain_h - cc * (c.n0 + (1.0 - weight) * c.sigma_s2));
    return {a, delta};
}

double stationary_root(double level, double gain_h, double weight, const ChannelConstants& c) {
    if (!(gain_h > 0.0)) return -kInf;
    if (!(level > 0.0)) return kInf;
    // u = P + n0/h solves u^2 - (cc - s)u - cc(1-w)s = 0 with s = sigma/h.
    const double cc = kLog2e / level;
    const double s = c.sigma_s2 / gain_h;
    const double b = cc - s;
    const double k = cc * (1.0 - weight) * s;
    const double sq = std::sqrt(b * b + 4.0 * k);
    double u;
    if (b >= 0.0)
        u = 0.5 * (b + sq);
    else
        u = sq - b > 0.0 ? 2.0 * k / (sq - b) : 0.0;
    return u - c.n0 / gain_h;
}

PowerPoint optimal_power_point(const PolicyParams& params, Gains gains,
                               const ChannelConstants& consts, const PowerConstraints& limits) {
    const bool clamp = clamps_at_peak(params.variant, limits);
    const double level = stationarity_level(params, gains.g, limits);
    const double w = collision_weight(params);
    const double root = stationary_root(level, gains.h, w, consts);
    if (!(root > 0.0)) return {0.0, 0.0};
    if (clamp && root >= *limits.p_pk) return {*limits.p_pk, 0.0};
    if (std::isinf(root)) return {kInf, 0.0};
    return {root, 1.0 / marginal_rate_slope(gains.h, root, w, consts)};
}

double optimal_power(const PolicyParams& params, Gains gains, const ChannelConstants& consts,
                     const PowerConstraints& limits) {
    return optimal_power_point(params, gains, consts, limits).power;
}

double kkt_residual(const PolicyParams& params, Gains gains, double power,
                    const ChannelConstants& consts, const PowerConstraints& limits) {
    if (!(power >= 0.0)) throw InvalidArgument("power must be nonnegative");
    const double level = stationarity_level(params, gains.g, limits);
    const double r = marginal_rate(gains.h, power, collision_weight(params), consts) - level;
    if (params.variant == PolicyVariant::MinEeBudget && !std::isinf(*params.eta))
        return (1.0 + *params.eta) / *params.eta * r;
    return r;
}

FrameContext FrameContext::with_ratios(const TrafficModel& traffic, const SensingSpec& sensing,
                                       double frame_ms, double pc0, double pc1) {
    if (!(frame_ms > sensing.tau_ms))
        throw InvalidArgument("frame must exceed the sensing duration");
    const IdlePosterior post = posterior_given_idle(traffic, sensing.p_d, sensing.p_f);
    const double idle = traffic.pr_idle() * (1.0 - sensing.p_f);
    const double missed = traffic.pr_busy() * (1.0 - sensing.p_d);
    FrameContext ctx;
    ctx.frame_ms = frame_ms;
    ctx.ratio = (frame_ms - sensing.tau_ms) / frame_ms;
    ctx.pr_idle_decision = post.pr_idle_decision;
    ctx.pc0 = pc0;
    ctx.pc1 = pc1;
    ctx.pc = post.post_idle * pc0 + post.post_busy * pc1;
    ctx.w_clean = idle * (1.0 - pc0) + missed * (1.0 - pc1);
    ctx.w_interf = idle * pc0 + missed * pc1;
    return ctx;
}

FrameContext FrameContext::make(const TrafficModel& traffic, const SensingSpec& sensing,
                                double frame_ms) {
    const CollisionRatios cr = collision_ratios(traffic, sensing, frame_ms);
    return with_ratios(traffic, sensing, frame_ms, cr.pc0, cr.pc1);
}

PolicyEvaluation evaluate(const PolicyMoments& m, const FrameContext& ctx, double p_cr) {
    PolicyEvaluation ev;
    ev.moments = m;
    ev.rate = ctx.ratio * (ctx.w_clean * m.mean_log_clean + ctx.w_interf * m.mean_log_interf);
    const double kappa = ctx.ratio * ctx.pr_idle_decision;
    ev.usage.avg_tx_power = kappa * m.mean_power;
    ev.usage.avg_interference = kappa * ctx.pc * m.mean_power_gain;
    ev.ee = ev.rate / (ev.usage.avg_tx_power + p_cr);
    return ev;
}

PolicyMoments optimal_policy_moments(const PolicyParams& params, const FadingGrid& grid,
                                     const ChannelConstants& consts,
                                     const PowerConstraints& limits, Exec exec) {
    params.validate();
    clamps_at_peak(params.variant, limits);
    return policy_moments(
        grid,
        [&](double h, double g) { return optimal_power_point(params, {h, g}, consts, limits); },
        consts, exec);
}

PolicyEvaluation evaluate_policy(const PolicyParams& params, const Scenario& scenario) {
    const FrameContext ctx = scenario.context();
    PolicyParams p = params;
    p.pc = ctx.pc;
    p.pr_idle_decision = ctx.pr_idle_decision;
    const PolicyMoments m =
        optimal_policy_moments(p, scenario.fading(), scenario.consts, scenario.limits,
                               scenario.solver.exec);
    return evaluate(m, ctx, scenario.limits.p_cr);
}

double avg_rate(const PolicyParams& params, const Scenario& scenario) {
    return evaluate_policy(params, scenario).rate;
}

ResourceUsage resource_usage(const PolicyParams& params, const Scenario& scenario) {
    return evaluate_policy(params, scenario).usage;
}

double energy_efficiency(const PolicyParams& params, const Scenario& scenario) {
    return evaluate_policy(params, scenario).ee;
}

PolicyEvaluation evaluate_rule(const PowerRule& rule, const Scenario& scenario) {
    const FrameContext ctx = scenario.context();
    const PolicyMoments m = policy_moments(
        scenario.fading(), [&](double h, double g) { return PowerPoint{rule(h, g), 0.0}; },
        scenario.consts, scenario.solver.exec);
    return evaluate(m, ctx, scenario.limits.p_cr);
}

double interference_limited_power(const FrameContext& ctx, double p_pk, double q_avg) {
    const double per_unit = ctx.ratio * ctx.w_interf;
    if (!(per_unit > 0.0)) return p_pk;
    return std::min(p_pk, q_avg / per_unit);
}

}  // namespace cogra
