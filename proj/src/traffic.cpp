#include "cogra/traffic.hpp"

#include <cmath>
#include <string>

#include "cogra/errors.hpp"

namespace cogra {

namespace {

// (1 - e^{-x}) / x, accurate as x -> 0.
double relaxation_average(double x) {
    if (x < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0;
    return -std::expm1(-x) / x;
}

// 1 - (1 + x) e^{-x}, accurate as x -> 0.
double relaxation_curvature(double x) {
    if (x < 1e-3) {
        const double x2 = x * x;
        return x2 / 2.0 - x2 * x / 3.0 + x2 * x2 / 8.0 - x2 * x2 * x / 30.0;
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

double transmit_duration(const SensingSpec& sensing, double frame_ms) {
    if (!(frame_ms > sensing.tau_ms))
        throw InvalidArgument("frame (" + std::to_string(frame_ms) +
                              " ms) must exceed the sensing duration (" +
                              std::to_string(sensing.tau_ms) + " ms)");
    return frame_ms - sensing.tau_ms;
}

}  // namespace

TrafficModel::TrafficModel(double mean_on, double mean_off)
    : mean_on_ms(mean_on), mean_off_ms(mean_off) {
    if (!(mean_on > 0.0) || !(mean_off > 0.0) || !std::isfinite(mean_on) ||
        !std::isfinite(mean_off))
        throw InvalidArgument("ON/OFF means must be positive and finite");
}

Priors priors(const TrafficModel& traffic) {
    return {traffic.pr_idle(), traffic.pr_busy()};
}

double default_tf_cap(const TrafficModel& traffic) {
    return 10.0 * (traffic.mean_on_ms + traffic.mean_off_ms);
}

CollisionRatios collision_ratios(const TrafficModel& traffic, double tx_ms) {
    if (!(tx_ms >= 0.0)) throw InvalidArgument("transmit duration must be nonnegative");
    const double tc = traffic.characteristic_time();
    const double avg = relaxation_average(tx_ms / tc);
    const double pb = traffic.pr_busy();
    const double pi = traffic.pr_idle();
    // pc0 = pb - (tc*pb/T)(1 - e^{-T/tc}), pc1 = pb + (tc*pi/T)(1 - e^{-T/tc})
    CollisionRatios r;
    r.pc0 = pb * (1.0 - avg);
    r.pc1 = pb + pi * avg;
    r.pc_avg = r.pc0;
    return r;
}

CollisionRatios collision_ratios(const TrafficModel& traffic, const SensingSpec& sensing,
                                 double frame_ms) {
    CollisionRatios r = collision_ratios(traffic, transmit_duration(sensing, frame_ms));
    const IdlePosterior post = posterior_given_idle(traffic, sensing.p_d, sensing.p_f);
    r.pc_avg = post.post_idle * r.pc0 + post.post_busy * r.pc1;
    return r;
}

double collision_ratio_derivative(const TrafficModel& traffic, const SensingSpec& sensing,
                                  double frame_ms) {
    const double tx = transmit_duration(sensing, frame_ms);
    const IdlePosterior post = posterior_given_idle(traffic, sensing.p_d, sensing.p_f);
    const double tc = traffic.characteristic_time();
    // Prefactor: post_idle*lambda0*Pr{H1}^2 - post_busy*lambda1*Pr{H0}^2, with
    // lambda0*Pr{H1} = lambda1*Pr{H0} = tc.
    const double prefactor =
        tc * (post.post_idle * traffic.pr_busy() - post.post_busy * traffic.pr_idle());
    if (prefactor == 0.0) return 0.0;
    const double x = tx / tc;
    // (1 - e^{-x})/T^2 - e^{-x}/(tc*T) = (1 - (1+x)e^{-x}) / T^2
    double bracket;
    if (x < 1e-3) {
        bracket = (0.5 - x / 3.0 + x * x / 8.0) / (tc * tc);
    } else {
        bracket = relaxation_curvature(x) / (tx * tx);
    }
    return prefactor * bracket;
}

FrameBound max_frame_for_collision(const TrafficModel& traffic, const SensingSpec& sensing,
                                   double pc_max, double tf_cap_ms) {
    if (!(pc_max > 0.0 && pc_max < 1.0)) throw InvalidArgument("pc_max must lie in (0, 1)");
    if (!(tf_cap_ms > sensing.tau_ms)) throw InvalidArgument("tf_cap must exceed tau");

    const IdlePosterior post = posterior_given_idle(traffic, sensing.p_d, sensing.p_f);
    // pc_avg(tau+) = post_busy, pc_avg(inf) = pr_busy.
    if (sensing.p_f >= sensing.p_d) {
        if (post.post_busy <= pc_max) return {FrameBoundStatus::Unbounded, tf_cap_ms};
        return {FrameBoundStatus::Infeasible, 0.0};
    }
    if (post.post_busy > pc_max) return {FrameBoundStatus::Infeasible, 0.0};
    if (traffic.pr_busy() <= pc_max) return {FrameBoundStatus::Unbounded, tf_cap_ms};

    auto pc = [&](double tf) { return collision_ratios(traffic, sensing, tf).pc_avg; };
    if (pc(tf_cap_ms) <= pc_max) return {FrameBoundStatus::Unbounded, tf_cap_ms};

    double lo = sensing.tau_ms;  // pc(lo+) <= pc_max
    double hi = tf_cap_ms;       // pc(hi) > pc_max
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pc(mid) <= pc_max)
            lo = mid;
        else
            hi = mid;
    }
    if (!(lo > sensing.tau_ms)) lo = 0.5 * (lo + hi);
    return {FrameBoundStatus::Bounded, lo};
}

}  // namespace cogra
