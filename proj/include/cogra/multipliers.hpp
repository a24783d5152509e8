#pragma once

// Lagrange multipliers of the inner power-allocation problem at a fixed
// frame and Dinkelbach parameter. Coordinate 0 prices the average transmit
// power budget, coordinate 1 the average interference budget.

#include <array>
#include <optional>

#include "cogra/policy.hpp"
#include "cogra/scenario.hpp"

namespace cogra {

struct DualProblem {
    PolicyParams base;                  ///< variant, alpha, budget_delta; pc filled from ctx
    FrameContext ctx;
    std::optional<double> power_budget; ///< absent: no average transmit constraint
    double interference_budget;
};

struct DualSolution {
    std::array<double, 2> multipliers{0.0, 0.0};
    PolicyParams params;
    PolicyEvaluation eval;
    double slack_power = 0.0;         ///< budget - avg transmit power (inf when absent)
    double slack_interference = 0.0;  ///< q_avg - avg interference
    int iterations = 0;
};

/// Writes the two multipliers into the fields the variant reads.
PolicyParams with_multipliers(PolicyParams base, const std::array<double, 2>& m);

DualSolution solve_dual(const DualProblem& problem, const Scenario& scenario,
                        std::array<double, 2> start = {0.0, 0.0});

/// EE-variant multipliers (lambda, nu) or (mu) at the scenario's fixed frame.
DualSolution solve_multipliers(const Scenario& scenario, double alpha,
                               std::array<double, 2> start = {0.0, 0.0});

}  // namespace cogra
