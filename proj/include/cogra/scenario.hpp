#pragma once

#include <memory>
#include <optional>

#include "cogra/fading.hpp"
#include "cogra/policy.hpp"
#include "cogra/sensing.hpp"
#include "cogra/traffic.hpp"

namespace cogra {

/// How multiplier iterates move along the constraint slacks.
enum class MultiplierUpdate {
    Scaled,  ///< slack scaled by the inverse constraint sensitivity, backtracked on the dual
    Plain,   ///< fixed step step_t on the raw slack
};

struct SolverConfig {
    double step_t = 0.1;
    MultiplierUpdate update = MultiplierUpdate::Scaled;
    double dinkelbach_eps = 1e-5;
    double slack_delta = 1e-4;
    int max_inner = 5000;
    int max_outer = 50;
    int frame_grid = 200;
    double frame_tol = 1e-3;
    std::optional<double> tf_cap_ms;
    BudgetDeltaForm budget_delta = BudgetDeltaForm::AsPrinted;
    Exec exec = Exec::Parallel;

    void validate() const;
};

struct Scenario {
    TrafficModel traffic = TrafficModel::voip();
    SensingSpec sensing = SensingSpec::from_targets(0.9, 0.1);
    ChannelConstants consts;
    PowerConstraints limits;
    std::optional<double> frame_ms;  ///< empty: frame is optimized
    std::shared_ptr<const FadingGrid> grid;
    SolverConfig solver;

    const FadingGrid& fading() const;
    Scenario at_frame(double frame) const;
    double frame() const;  ///< throws when the frame is free
    FrameContext context() const;
    double tf_cap() const;
    void validate() const;
};

/// Shared default-order grid.
std::shared_ptr<const FadingGrid> default_grid(int order = kDefaultGridOrder);

}  // namespace cogra
