#include "cogra/scenario.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cogra/errors.hpp"

namespace cogra {

void SolverConfig::validate() const {
    if (!(step_t > 0.0) || !(dinkelbach_eps > 0.0) || !(slack_delta > 0.0) || !(frame_tol > 0.0))
        throw InvalidArgument("solver tolerances and step must be positive");
    if (max_inner < 1 || max_outer < 1) throw InvalidArgument("iteration caps must be positive");
    if (frame_grid < 3) throw InvalidArgument("frame_grid needs at least 3 points");
    if (tf_cap_ms && !(*tf_cap_ms > 0.0)) throw InvalidArgument("tf_cap must be positive");
}

const FadingGrid& Scenario::fading() const {
    if (!grid) throw InvalidArgument("scenario has no fading grid");
    return *grid;
}

Scenario Scenario::at_frame(double frame) const {
    Scenario s = *this;
    s.frame_ms = frame;
    return s;
}

double Scenario::frame() const {
    if (!frame_ms) throw InvalidArgument("scenario frame is free; fix it first");
    return *frame_ms;
}

FrameContext Scenario::context() const { return FrameContext::make(traffic, sensing, frame()); }

double Scenario::tf_cap() const { return solver.tf_cap_ms.value_or(default_tf_cap(traffic)); }

void Scenario::validate() const {
    sensing.validate();
    consts.validate();
    limits.validate();
    solver.validate();
    if (frame_ms && !(*frame_ms > sensing.tau_ms))
        throw InvalidArgument("frame must exceed the sensing duration");
    if (!(tf_cap() > sensing.tau_ms)) throw InvalidArgument("tf_cap must exceed tau");
    fading();
}

std::shared_ptr<const FadingGrid> default_grid(int order) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const FadingGrid>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = std::make_shared<const FadingGrid>(FadingGrid::build(order));
    return slot;
}

}  // namespace cogra
