#pragma once

// Unslotted ON/OFF primary user: priors, collision-duration ratios and the
// frame-duration bound implied by a collision limit. Times are in ms.

#include "cogra/sensing.hpp"

namespace cogra {

struct TrafficModel {
    double mean_on_ms;
    double mean_off_ms;

    TrafficModel(double mean_on, double mean_off);

    double pr_idle() const { return mean_off_ms / (mean_on_ms + mean_off_ms); }
    double pr_busy() const { return 1.0 - pr_idle(); }
    /// Relaxation time of the two-state chain, mean_on*mean_off/(mean_on+mean_off).
    double characteristic_time() const {
        return mean_on_ms * mean_off_ms / (mean_on_ms + mean_off_ms);
    }

    static TrafficModel voip() { return {352.0, 650.0}; }
    static TrafficModel heavy() { return {650.0, 350.0}; }
};

struct Priors {
    double pr_idle;
    double pr_busy;
};

struct CollisionRatios {
    double pc0;     ///< PU idle at frame start, sensed idle
    double pc1;     ///< PU busy at frame start, missed
    double pc_avg;  ///< posterior mix given an idle decision
};

Priors priors(const TrafficModel& traffic);

/// pc0/pc1 as functions of the transmit duration only (no sensing needed).
CollisionRatios collision_ratios(const TrafficModel& traffic, double tx_ms);

CollisionRatios collision_ratios(const TrafficModel& traffic, const SensingSpec& sensing,
                                 double frame_ms);

/// d pc_avg / d T_f. Positive iff p_f < p_d.
double collision_ratio_derivative(const TrafficModel& traffic, const SensingSpec& sensing,
                                  double frame_ms);

enum class FrameBoundStatus { Bounded, Unbounded, Infeasible };

struct FrameBound {
    FrameBoundStatus status;
    double tf_max_ms;  ///< 0 when infeasible, tf_cap when unbounded
};

/// Largest frame with pc_avg(T_f) <= pc_max, searched on (tau, tf_cap].
FrameBound max_frame_for_collision(const TrafficModel& traffic, const SensingSpec& sensing,
                                   double pc_max, double tf_cap_ms);

double default_tf_cap(const TrafficModel& traffic);

}  // namespace cogra
