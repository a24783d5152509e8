#pragma once

// Scenario files: JSON (comments allowed) with traffic, sensing, channel,
// constraints, frame, solver and sweep sections. Powers ending in _db are
// converted as 10^(x/10).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cogra/errors.hpp"
#include "cogra/scenario.hpp"

namespace cogra {

/// Schema violation; `line` is 1-based in the scenario file (0 if unknown).
class SchemaError : public Error {
public:
    SchemaError(const std::string& origin, int line, const std::string& msg)
        : Error(origin + ":" + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

enum class SensingMode { Targets, Roc };

struct SensingInput {
    SensingMode mode = SensingMode::Targets;
    double pd = 0.9;
    double pf = 0.1;
    double snr_s = 0.1;
    double fs_hz = 100e3;
    std::optional<double> tau_ms;  ///< targets: hold tau fixed; roc: required
};

struct ConstraintInput {
    std::optional<double> p_avg_db;
    std::optional<double> p_pk_db;
    double q_avg_db = -20.0;
    double pc_max = 0.2;
    std::optional<double> ee_min;
    std::optional<double> ee_min_gain;  ///< ee_min as a fraction of the maximum EE
    double p_cr = 1.0;
};

enum class SweepObjective { Ee, RateMinEe, ConstantPowerRate };

struct SweepInput {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int points = 2;
    SweepObjective objective = SweepObjective::Ee;
    bool compare_constant = false;
};

struct ScenarioSpec {
    std::string origin = "<scenario>";
    double mean_on_ms = 352.0;
    double mean_off_ms = 650.0;
    SensingInput sensing;
    ChannelConstants channel;
    ConstraintInput constraints;
    std::optional<double> frame_ms;
    SolverConfig solver;
    int grid_order = kDefaultGridOrder;
    std::optional<SweepInput> sweep;
    std::vector<double> validate_frames_ms;
    std::map<std::string, int> lines;  ///< JSON pointer -> line
};

ScenarioSpec parse_scenario_spec(const std::string& text, const std::string& origin);
ScenarioSpec load_scenario_spec(const std::string& path);

/// Line of a JSON pointer, falling back to its closest recorded ancestor.
int line_of(const ScenarioSpec& spec, const std::string& pointer);

/// Resolves sensing mode and dB units. ee_min_gain is left to the caller.
Scenario build_scenario(const ScenarioSpec& spec);

/// Names accepted by sweep.parameter.
const std::vector<std::string>& sweep_parameters();
std::vector<double> sweep_values(const SweepInput& sweep);
void set_parameter(ScenarioSpec& spec, const std::string& name, double value);

SweepObjective parse_objective(const std::string& s);
const char* to_string(SweepObjective o);

/// Key -> line map of a JSON text, keyed by JSON pointer.
std::map<std::string, int> json_key_lines(const std::string& text);

}  // namespace cogra
