#pragma once

#include "cogra/scenario.hpp"

namespace cogra::testing {

/// VoIP traffic, targets (0.9, 0.1), P_avg = 10 dB, Q_avg = -20 dB, pc_max = 0.2.
inline Scenario voip_scenario(std::optional<double> frame_ms = 107.21148577351723) {
    Scenario sc;
    sc.traffic = TrafficModel::voip();
    sc.sensing = SensingSpec::from_targets(0.9, 0.1);
    sc.limits.p_avg = from_db(10.0);
    sc.limits.q_avg = from_db(-20.0);
    sc.limits.pc_max = 0.2;
    sc.frame_ms = frame_ms;
    sc.grid = default_grid(64);
    return sc;
}

inline Scenario peak_scenario(double p_pk_db, std::optional<double> frame_ms = 107.21148577351723) {
    Scenario sc = voip_scenario(frame_ms);
    sc.limits.p_avg.reset();
    sc.limits.p_pk = from_db(p_pk_db);
    return sc;
}

}  // namespace cogra::testing
