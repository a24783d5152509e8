#pragma once

// Closed-form power policies, their stationarity residual, and the average
// rate / resource / energy-efficiency evaluators built on a fading grid.

#include <cmath>
#include <functional>
#include <optional>

#include "cogra/fading.hpp"
#include "cogra/sensing.hpp"
#include "cogra/traffic.hpp"

namespace cogra {

struct Scenario;

inline constexpr double kLog2e = 1.4426950408889634074;

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

struct ChannelConstants {
    double n0 = 0.01;        ///< noise variance
    double sigma_s2 = 0.1;   ///< PU signal variance at the secondary receiver

    void validate() const;
};

/// Limits of one problem instance. Exactly one of p_avg / p_pk is set.
struct PowerConstraints {
    std::optional<double> p_avg;
    std::optional<double> p_pk;
    double q_avg = 0.01;
    double pc_max = 0.2;
    std::optional<double> ee_min;
    double p_cr = 1.0;

    bool peak() const { return p_pk.has_value(); }
    void validate() const;
};

enum class PolicyVariant {
    EeAvgTx,          ///< EE, average transmit + interference limits
    EePeakTx,         ///< EE, peak transmit + interference limits
    MinEeBudget,      ///< power level meeting a minimum EE
    RateMinEeAvgTx,   ///< throughput under min-EE, average transmit limit
    RateMinEePeakTx,  ///< throughput under min-EE, peak transmit limit
};

const char* to_string(PolicyVariant v);

/// Collision weight in the constant term of the min-EE budget policy:
/// Pr{sensed idle}*pc as printed, or the plain pc used by every other variant.
enum class BudgetDeltaForm { AsPrinted, CollisionComplement };

struct PolicyParams {
    PolicyVariant variant = PolicyVariant::EeAvgTx;
    double alpha = 0.0;
    double lambda = 0.0;
    double nu = 0.0;
    double mu = 0.0;
    double vartheta = 0.0;
    double varphi = 0.0;
    std::optional<double> eta;
    double pc = 0.0;
    double pr_idle_decision = 1.0;
    BudgetDeltaForm budget_delta = BudgetDeltaForm::AsPrinted;

    void validate() const;
};

struct Gains {
    double h;  ///< |h|^2, secondary link
    double g;  ///< |g|^2, interference link
};

/// Power and its sensitivity dP/dd to the stationarity level d (zero where
/// the power sits on a bound).
struct PowerPoint {
    double power;
    double slope;
};

/// The level d the marginal rate is matched against at this node.
double stationarity_level(const PolicyParams& params, double gain_g,
                          const PowerConstraints& limits);

/// Weight of the interference-corrupted term in the stationarity condition.
double collision_weight(const PolicyParams& params);

/// The (A, Delta) pair of the closed form [(A + sqrt(Delta))/2]^+.
struct QuadraticTerms {
    double a;
    double delta;
};
QuadraticTerms quadratic_terms(double level, double gain_h, double weight,
                               const ChannelConstants& consts);

/// Larger root of the stationarity quadratic, unprojected. Evaluated in the
/// shifted variable P + n0/|h|^2, where the discriminant is a sum of
/// nonnegative terms. +inf when level <= 0.
double stationary_root(double level, double gain_h, double weight,
                       const ChannelConstants& consts);

PowerPoint optimal_power_point(const PolicyParams& params, Gains gains,
                               const ChannelConstants& consts, const PowerConstraints& limits);

double optimal_power(const PolicyParams& params, Gains gains, const ChannelConstants& consts,
                     const PowerConstraints& limits);

/// Marginal rate minus the level. Zero at interior optima, <= 0 where the
/// power is zero, >= 0 where it is clamped at p_pk. The min-EE budget variant
/// is scaled by (1+eta)/eta.
double kkt_residual(const PolicyParams& params, Gains gains, double power,
                    const ChannelConstants& consts, const PowerConstraints& limits);

/// Frame-dependent weights shared by every evaluator at a fixed frame.
struct FrameContext {
    double frame_ms;
    double ratio;             ///< (T_f - tau)/T_f
    double pr_idle_decision;  ///< Pr{sensed idle}
    double pc0;
    double pc1;
    double pc;                ///< posterior mix
    double w_clean;           ///< weight of log2(1 + P h/n0)
    double w_interf;          ///< weight of log2(1 + P h/(n0 + sigma_s^2))

    static FrameContext make(const TrafficModel& traffic, const SensingSpec& sensing,
                             double frame_ms);
    /// Same, with pc0/pc1 supplied (e.g. 0 and 1 for the slotted special case).
    static FrameContext with_ratios(const TrafficModel& traffic, const SensingSpec& sensing,
                                    double frame_ms, double pc0, double pc1);
};

struct PolicyMoments {
    double mean_power = 0.0;       ///< E{P}
    double mean_power_gain = 0.0;  ///< E{P g}
    double mean_log_clean = 0.0;
    double mean_log_interf = 0.0;
    double mean_slope = 0.0;       ///< E{dP/dd}
    double mean_slope_g = 0.0;     ///< E{g dP/dd}
    double mean_slope_g2 = 0.0;    ///< E{g^2 dP/dd}
};

/// Grid moments of a power rule f(h, g) -> PowerPoint.
template <class PowerFn>
PolicyMoments policy_moments(const FadingGrid& grid, PowerFn&& rule,
                             const ChannelConstants& consts, Exec exec = Exec::Parallel) {
    const double inv_n0 = 1.0 / consts.n0;
    const double inv_ni = 1.0 / (consts.n0 + consts.sigma_s2);
    const Sums<7> s = expect_many<7>(
        grid,
        [&](double h, double g) {
            const PowerPoint pp = rule(h, g);
            const double ph = pp.power * h;
            return Sums<7>{pp.power,
                           pp.power * g,
                           kLog2e * std::log1p(ph * inv_n0),
                           kLog2e * std::log1p(ph * inv_ni),
                           pp.slope,
                           pp.slope * g,
                           pp.slope * g * g};
        },
        exec);
    return {s[0], s[1], s[2], s[3], s[4], s[5], s[6]};
}

struct ResourceUsage {
    double avg_tx_power;
    double avg_interference;
};

struct PolicyEvaluation {
    PolicyMoments moments;
    double rate = 0.0;  ///< bits/s/Hz
    ResourceUsage usage{0.0, 0.0};
    double ee = 0.0;    ///< bits/joule
};

PolicyEvaluation evaluate(const PolicyMoments& m, const FrameContext& ctx, double p_cr);

PolicyMoments optimal_policy_moments(const PolicyParams& params, const FadingGrid& grid,
                                     const ChannelConstants& consts,
                                     const PowerConstraints& limits, Exec exec = Exec::Parallel);

/// Evaluators at the scenario's (fixed) frame.
PolicyEvaluation evaluate_policy(const PolicyParams& params, const Scenario& scenario);
double avg_rate(const PolicyParams& params, const Scenario& scenario);
ResourceUsage resource_usage(const PolicyParams& params, const Scenario& scenario);
double energy_efficiency(const PolicyParams& params, const Scenario& scenario);

/// Arbitrary power rule P(h, g), e.g. constant power.
using PowerRule = std::function<double(double gain_h, double gain_g)>;
PolicyEvaluation evaluate_rule(const PowerRule& rule, const Scenario& scenario);

/// Constant power that meets q_avg with equality, capped at p_pk.
double interference_limited_power(const FrameContext& ctx, double p_pk, double q_avg);

}  // namespace cogra
