#pragma once

// EE maximization (Dinkelbach outer loop over the dual multiplier solve) and
// throughput maximization under a minimum EE, each with the frame search.

#include <limits>
#include <optional>
#include <vector>

#include "cogra/multipliers.hpp"
#include "cogra/policy.hpp"
#include "cogra/scenario.hpp"

namespace cogra {

enum class OperatingCase { BudgetBinds, AvgTxBinds, Infeasible };

const char* to_string(OperatingCase c);

struct Slacks {
    double power = std::numeric_limits<double>::infinity();         ///< budget - avg tx power
    double interference = std::numeric_limits<double>::infinity();  ///< q_avg - avg interference
    double collision = 0.0;                                         ///< pc_max - pc_avg
    double ee = std::numeric_limits<double>::infinity();            ///< ee - ee_min
};

struct IterationCounts {
    int outer = 0;
    int inner = 0;
};

struct DinkelbachResult {
    double alpha_star = 0.0;
    double f_value = 0.0;  ///< F(alpha*) = R - alpha*(P + p_cr)
    double ee = 0.0;
    PolicyParams params;
    PolicyEvaluation eval;
    DualSolution dual;
    IterationCounts iterations;
    std::vector<double> alpha_history;
    std::vector<double> f_history;
};

/// Maximum EE at the scenario's fixed frame under its transmit and
/// interference limits.
DinkelbachResult dinkelbach_ee(const Scenario& scenario);

struct OptResult {
    bool feasible = false;
    double tf_opt = 0.0;
    double ee = 0.0;
    double rate = 0.0;
    PolicyParams params;
    Slacks slacks;
    IterationCounts iterations;
    double pc_avg = 0.0;
    double post_busy = 0.0;
    bool multimodal = false;
    double alpha_star = 0.0;
    double f_value = 0.0;
    double avg_tx = 0.0;
    double avg_interference = 0.0;
    OperatingCase op_case = OperatingCase::BudgetBinds;
    double p_op = 0.0;                      ///< effective average power budget
    double p_star = std::numeric_limits<double>::infinity();
    std::optional<double> eta;
    double constant_power = 0.0;            ///< level of the constant-power policy
    double objective = -std::numeric_limits<double>::infinity();
};

/// Joint power policy and frame duration maximizing EE. A fixed frame in the
/// scenario is evaluated as given.
OptResult optimize_ee(const Scenario& scenario);

/// Best constant (channel-independent) power, optimizing the frame when free.
OptResult optimize_constant_power_ee(const Scenario& scenario);

struct PowerBudget {
    double p_avg_star = 0.0;
    double eta = 0.0;  ///< +inf when the level equals ee_min exactly
    PolicyParams params;
    PolicyEvaluation eval;
};

/// Average power at which the min-EE policy meets ee_min with equality.
/// Throws NoBinding when no policy of the family reaches ee_min.
PowerBudget min_ee_power_budget(const Scenario& scenario);

struct OperatingPoint {
    OperatingCase op_case;
    double p_op;  ///< budget used by the throughput solve; 0 when infeasible
};

/// `p_avg_star` empty means the budget computation reported NoBinding.
OperatingPoint operating_power_case(const Scenario& scenario,
                                    std::optional<double> p_avg_star);

OptResult optimize_throughput_min_ee(const Scenario& scenario);

/// Feasibility of the collision limit alone.
struct CollisionFeasibility {
    bool feasible;
    double post_busy;
    double pc_max;
    double tf_max_ms;
    bool unbounded;
};
CollisionFeasibility collision_feasibility(const Scenario& scenario);

}  // namespace cogra
