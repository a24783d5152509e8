#include "cogra/sensing.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "cogra/errors.hpp"
#include "cogra/traffic.hpp"

namespace cogra {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("Q^-1 needs p in (0, 1)");
    return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

DetectorPoint detector_roc(double snr_s, double tau_ms, double fs_hz, double threshold) {
    const double samples = tau_ms * 1e-3 * fs_hz;
    if (!(samples >= 1.0)) throw InvalidArgument("sensing window holds fewer than one sample");
    if (!(snr_s > 0.0)) throw InvalidArgument("snr_s must be positive");
    DetectorPoint pt;
    pt.p_d = q_function((threshold - snr_s - 1.0) * std::sqrt(samples / (2.0 * snr_s + 1.0)));
    pt.p_f = q_function((threshold - 1.0) * std::sqrt(samples));
    return pt;
}

double threshold_for_false_alarm(double tau_ms, double fs_hz, double p_f) {
    const double samples = tau_ms * 1e-3 * fs_hz;
    if (!(samples >= 1.0)) throw InvalidArgument("sensing window holds fewer than one sample");
    return 1.0 + q_inverse(p_f) / std::sqrt(samples);
}

double sensing_duration_for_targets(double snr_s, double fs_hz, double target_pd,
                                    double target_pf) {
    if (!(target_pf > 0.0 && target_pf < target_pd && target_pd < 1.0))
        throw InvalidArgument("need 0 < target_pf < target_pd < 1");
    if (!(snr_s > 0.0) || !(fs_hz > 0.0)) throw InvalidArgument("snr_s and fs must be positive");
    const double num = q_inverse(target_pf) - std::sqrt(2.0 * snr_s + 1.0) * q_inverse(target_pd);
    const double r = num / snr_s;
    return r * r / fs_hz * 1e3;
}

IdlePosterior posterior_given_idle(const TrafficModel& traffic, double p_d, double p_f) {
    const double idle = traffic.pr_idle() * (1.0 - p_f);
    const double missed = traffic.pr_busy() * (1.0 - p_d);
    const double den = idle + missed;
    if (!(den > 0.0)) throw ZeroIdleProbability();
    return {den, idle / den, missed / den};
}

SensingSpec SensingSpec::from_targets(double target_pd, double target_pf, double snr_s,
                                      double fs_hz) {
    SensingSpec s{target_pd, target_pf,
                  sensing_duration_for_targets(snr_s, fs_hz, target_pd, target_pf), fs_hz, snr_s};
    return s;
}

SensingSpec SensingSpec::from_roc(double tau_ms, double target_pf, double snr_s, double fs_hz) {
    const double thr = threshold_for_false_alarm(tau_ms, fs_hz, target_pf);
    const DetectorPoint pt = detector_roc(snr_s, tau_ms, fs_hz, thr);
    return SensingSpec{pt.p_d, pt.p_f, tau_ms, fs_hz, snr_s};
}

void SensingSpec::validate() const {
    if (!(p_d >= 0.0 && p_d <= 1.0) || !(p_f >= 0.0 && p_f <= 1.0))
        throw InvalidArgument("detection/false-alarm probabilities must lie in [0, 1]");
    if (!(tau_ms >= 0.0) || !std::isfinite(tau_ms))
        throw InvalidArgument("sensing duration must be finite and nonnegative");
    if (!(fs_hz > 0.0) || !(snr_s > 0.0)) throw InvalidArgument("fs and snr_s must be positive");
}

}  // namespace cogra
