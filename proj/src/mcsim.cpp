#include "cogra/mcsim.hpp"

#include <algorithm>
#include <cmath>

#include "cogra/errors.hpp"
#include "cogra/fading.hpp"

namespace cogra {

namespace {

SimEstimate summarize(const Sums<2>& s, std::size_t n) {
    const McEstimate e = mc_summary(s[0], s[1], n);
    return {e.estimate, e.standard_error};
}

template <class Trial>
SimEstimate run_trials(const SimConfig& cfg, Trial&& trial) {
    cfg.validate();
    const CounterRng master(cfg.seed);
    auto term = [&](std::size_t i) {
        RngStream rng(master.substream(i));
        const double v = trial(rng);
        return Sums<2>{v, v * v};
    };
    return summarize(reduce<2>(cfg.exec, cfg.trials, term), cfg.trials);
}

}  // namespace

void SimConfig::validate() const {
    if (trials < 1000) throw InvalidArgument("simulation needs at least 1000 trials");
}

double collision_fraction(RngStream& rng, const TrafficModel& traffic, bool busy, double tx_ms) {
    if (!(tx_ms > 0.0)) throw InvalidArgument("transmit duration must be positive");
    double t = 0.0;
    double on = 0.0;
    while (t < tx_ms) {
        const double dur = rng.exponential(busy ? traffic.mean_on_ms : traffic.mean_off_ms);
        const double end = std::min(t + dur, tx_ms);
        if (busy) on += end - t;
        t += dur;
        busy = !busy;
    }
    return on / tx_ms;
}

SimEstimate simulate_collision(const TrafficModel& traffic, double frame_ms, double tau_ms,
                               const SimConfig& cfg) {
    if (!(frame_ms > tau_ms)) throw InvalidArgument("frame must exceed the sensing duration");
    const double tx = frame_ms - tau_ms;
    const double pr_busy = traffic.pr_busy();
    return run_trials(cfg, [&](RngStream& rng) {
        bool busy = cfg.start == StartState::Busy;
        if (cfg.start == StartState::Stationary) busy = rng.bernoulli(pr_busy);
        return collision_fraction(rng, traffic, busy, tx);
    });
}

SimEstimate simulate_collision_given_idle(const TrafficModel& traffic, const SensingSpec& sensing,
                                          double frame_ms, const SimConfig& cfg) {
    if (!(frame_ms > sensing.tau_ms))
        throw InvalidArgument("frame must exceed the sensing duration");
    const double post_busy = posterior_given_idle(traffic, sensing.p_d, sensing.p_f).post_busy;
    const double tx = frame_ms - sensing.tau_ms;
    return run_trials(cfg, [&](RngStream& rng) {
        const bool busy = rng.bernoulli(post_busy);
        return collision_fraction(rng, traffic, busy, tx);
    });
}

SimEstimate simulate_on_fraction(const TrafficModel& traffic, double horizon_ms,
                                 const SimConfig& cfg) {
    SimConfig c = cfg;
    c.start = StartState::Stationary;
    return simulate_collision(traffic, horizon_ms, 0.0, c);
}

SimEstimate simulate_throughput(const Scenario& sc, const PowerRule& rule, const SimConfig& cfg) {
    const double frame = sc.frame();
    const double tau = sc.sensing.tau_ms;
    if (!(frame > tau)) throw InvalidArgument("frame must exceed the sensing duration");
    const double tx = frame - tau;
    const double ratio = tx / frame;
    const double pr_busy = sc.traffic.pr_busy();
    const double n0 = sc.consts.n0;
    const double ni = sc.consts.n0 + sc.consts.sigma_s2;
    return run_trials(cfg, [&](RngStream& rng) {
        const double h = rng.exponential(1.0);
        const double g = rng.exponential(1.0);
        const bool busy = rng.bernoulli(pr_busy);
        const double w = busy ? 1.0 - sc.sensing.p_d : 1.0 - sc.sensing.p_f;
        const double f = collision_fraction(rng, sc.traffic, busy, tx);
        const double p = rule(h, g);
        const double clean = kLog2e * std::log1p(p * h / n0);
        const double interf = kLog2e * std::log1p(p * h / ni);
        return ratio * w * (clean * (1.0 - f) + interf * f);
    });
}

}  // namespace cogra
