#pragma once

// Monte Carlo oracle: single-frame simulation of the ON/OFF primary user with
// fresh exponential sojourns at frame start.

#include <cstddef>
#include <cstdint>

#include "cogra/kernels.hpp"
#include "cogra/policy.hpp"
#include "cogra/rng.hpp"
#include "cogra/scenario.hpp"
#include "cogra/traffic.hpp"

namespace cogra {

enum class StartState { Idle, Busy, Stationary };

struct SimConfig {
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    StartState start = StartState::Stationary;
    Exec exec = Exec::Parallel;

    void validate() const;
};

struct SimEstimate {
    double mean;
    double standard_error;
};

/// Fraction of (0, tx_ms] the primary user spends ON, starting in the given state.
double collision_fraction(RngStream& rng, const TrafficModel& traffic, bool busy_at_start,
                          double tx_ms);

/// Mean collision ratio over (0, frame - tau] from cfg.start.
SimEstimate simulate_collision(const TrafficModel& traffic, double frame_ms, double tau_ms,
                               const SimConfig& cfg);

/// Collision ratio given an idle decision: the start state is busy with
/// probability Pr{busy | sensed idle}. cfg.start is ignored.
SimEstimate simulate_collision_given_idle(const TrafficModel& traffic, const SensingSpec& sensing,
                                          double frame_ms, const SimConfig& cfg);

/// Long-run ON fraction over a horizon, stationary start.
SimEstimate simulate_on_fraction(const TrafficModel& traffic, double horizon_ms,
                                 const SimConfig& cfg);

/// Average throughput of a power rule at the scenario's fixed frame. The PU
/// state at frame start is drawn from the priors; each trial is weighted by
/// the probability of an idle decision in that state. cfg.start is ignored.
SimEstimate simulate_throughput(const Scenario& scenario, const PowerRule& rule,
                                const SimConfig& cfg);

}  // namespace cogra
