#pragma once

#include <utility>

namespace cogra {

struct TrafficModel;

/// Gaussian tail Q(x) and its inverse.
double q_function(double x);
double q_inverse(double p);

struct SensingSpec {
    double p_d;
    double p_f;
    double tau_ms;
    double fs_hz = 100e3;
    double snr_s = 0.1;

    /// Operating point (p_d, p_f) with the duration needed to reach it.
    static SensingSpec from_targets(double target_pd, double target_pf, double snr_s = 0.1,
                                    double fs_hz = 100e3);
    /// Threshold set for target_pf at a given duration; p_d follows from the ROC.
    static SensingSpec from_roc(double tau_ms, double target_pf, double snr_s = 0.1,
                                double fs_hz = 100e3);

    void validate() const;
};

struct DetectorPoint {
    double p_d;
    double p_f;
};

/// Energy-detector ROC. `threshold` is the decision level normalized by N0.
DetectorPoint detector_roc(double snr_s, double tau_ms, double fs_hz, double threshold);

/// Threshold that yields false-alarm probability `p_f` at the given duration.
double threshold_for_false_alarm(double tau_ms, double fs_hz, double p_f);

/// Sensing duration (ms) at which one threshold meets both targets.
double sensing_duration_for_targets(double snr_s, double fs_hz, double target_pd,
                                    double target_pf);

struct IdlePosterior {
    double pr_idle_decision;  ///< Pr{sensed idle}
    double post_idle;         ///< Pr{idle | sensed idle}
    double post_busy;         ///< Pr{busy | sensed idle}
};

IdlePosterior posterior_given_idle(const TrafficModel& traffic, double p_d, double p_f);

}  // namespace cogra
