#include "cogra/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cogra {

using nlohmann::json;

namespace {

class Reader {
public:
    explicit Reader(ScenarioSpec& spec) : spec_(spec) {}

    [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
        throw SchemaError(spec_.origin, line_of(spec_, ptr), msg);
    }

    void allow_keys(const json& obj, const std::string& ptr,
                    std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(ptr, "'" + name(ptr) + "' must be an object");
        for (const auto& [k, v] : obj.items()) {
            (void)v;
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
                fail(ptr + "/" + k, "unknown key '" + k + "' in '" + name(ptr) + "'");
        }
    }

    std::optional<double> number(const json& obj, const std::string& ptr, const char* key) const {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number()) fail(ptr + "/" + key, std::string("'") + key + "' must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(ptr + "/" + key, std::string("'") + key + "' must be finite");
        return x;
    }

    double required(const json& obj, const std::string& ptr, const char* key) const {
        const auto x = number(obj, ptr, key);
        if (!x) fail(ptr, std::string("missing required key '") + key + "'");
        return *x;
    }

    std::optional<int> integer(const json& obj, const std::string& ptr, const char* key) const {
        const auto x = number(obj, ptr, key);
        if (!x) return std::nullopt;
        if (std::floor(*x) != *x || std::abs(*x) > 1e9)
            fail(ptr + "/" + key, std::string("'") + key + "' must be an integer");
        return static_cast<int>(*x);
    }

    std::optional<std::string> string(const json& obj, const std::string& ptr,
                                      const char* key) const {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_string()) fail(ptr + "/" + key, std::string("'") + key + "' must be a string");
        return obj.at(key).get<std::string>();
    }

    void positive(double x, const std::string& ptr) const {
        if (!(x > 0.0)) fail(ptr, "'" + name(ptr) + "' must be positive");
    }

    void probability(double x, const std::string& ptr) const {
        if (!(x >= 0.0 && x <= 1.0)) fail(ptr, "'" + name(ptr) + "' must lie in [0, 1]");
    }

private:
    static std::string name(const std::string& ptr) {
        return ptr.empty() ? "scenario" : ptr.substr(ptr.rfind('/') + 1);
    }
    ScenarioSpec& spec_;
};

void read_traffic(const Reader& r, const json& t, ScenarioSpec& s) {
    r.allow_keys(t, "/traffic", {"mean_on_ms", "mean_off_ms", "preset"});
    if (const auto preset = r.string(t, "/traffic", "preset")) {
        if (t.contains("mean_on_ms") || t.contains("mean_off_ms"))
            r.fail("/traffic/preset", "give either 'preset' or the ON/OFF means, not both");
        if (*preset == "voip") {
            s.mean_on_ms = 352.0;
            s.mean_off_ms = 650.0;
        } else if (*preset == "heavy") {
            s.mean_on_ms = 650.0;
            s.mean_off_ms = 350.0;
        } else {
            r.fail("/traffic/preset", "preset must be 'voip' or 'heavy'");
        }
        return;
    }
    s.mean_on_ms = r.required(t, "/traffic", "mean_on_ms");
    s.mean_off_ms = r.required(t, "/traffic", "mean_off_ms");
    r.positive(s.mean_on_ms, "/traffic/mean_on_ms");
    r.positive(s.mean_off_ms, "/traffic/mean_off_ms");
}

void read_sensing(const Reader& r, const json& j, ScenarioSpec& s) {
    const std::string p = "/sensing";
    r.allow_keys(j, p, {"mode", "pd", "pf", "snr_s", "fs_hz", "tau_ms"});
    SensingInput& in = s.sensing;
    const std::string mode = r.string(j, p, "mode").value_or("targets");
    if (mode == "targets") {
        in.mode = SensingMode::Targets;
        in.pd = r.required(j, p, "pd");
        in.pf = r.required(j, p, "pf");
    } else if (mode == "roc") {
        in.mode = SensingMode::Roc;
        if (j.contains("pd")) r.fail(p + "/pd", "'pd' follows from the ROC in roc mode; remove it");
        in.pf = r.required(j, p, "pf");
        if (!j.contains("tau_ms")) r.fail(p, "roc mode needs 'tau_ms'");
    } else {
        r.fail(p + "/mode", "mode must be 'targets' or 'roc'");
    }
    r.probability(in.pd, p + "/pd");
    r.probability(in.pf, p + "/pf");
    in.snr_s = r.number(j, p, "snr_s").value_or(in.snr_s);
    in.fs_hz = r.number(j, p, "fs_hz").value_or(in.fs_hz);
    in.tau_ms = r.number(j, p, "tau_ms");
    r.positive(in.snr_s, p + "/snr_s");
    r.positive(in.fs_hz, p + "/fs_hz");
    if (in.tau_ms) r.positive(*in.tau_ms, p + "/tau_ms");
}

void read_channel(const Reader& r, const json& j, ScenarioSpec& s) {
    r.allow_keys(j, "/channel", {"n0", "sigma_s2"});
    s.channel.n0 = r.number(j, "/channel", "n0").value_or(s.channel.n0);
    s.channel.sigma_s2 = r.number(j, "/channel", "sigma_s2").value_or(s.channel.sigma_s2);
    r.positive(s.channel.n0, "/channel/n0");
    if (s.channel.sigma_s2 < 0.0) r.fail("/channel/sigma_s2", "'sigma_s2' must be nonnegative");
}

void read_constraints(const Reader& r, const json& j, ScenarioSpec& s) {
    const std::string p = "/constraints";
    r.allow_keys(j, p, {"p_avg_db", "p_pk_db", "q_avg_db", "pc_max", "ee_min", "ee_min_gain", "p_cr"});
    ConstraintInput& c = s.constraints;
    c.p_avg_db = r.number(j, p, "p_avg_db");
    c.p_pk_db = r.number(j, p, "p_pk_db");
    if (c.p_avg_db.has_value() == c.p_pk_db.has_value())
        r.fail(p, "exactly one of 'p_avg_db' and 'p_pk_db' is required");
    c.q_avg_db = r.required(j, p, "q_avg_db");
    c.pc_max = r.required(j, p, "pc_max");
    if (!(c.pc_max > 0.0 && c.pc_max < 1.0)) r.fail(p + "/pc_max", "'pc_max' must lie in (0, 1)");
    c.ee_min = r.number(j, p, "ee_min");
    c.ee_min_gain = r.number(j, p, "ee_min_gain");
    if (c.ee_min && c.ee_min_gain) r.fail(p + "/ee_min_gain", "give 'ee_min' or 'ee_min_gain', not both");
    if (c.ee_min && *c.ee_min < 0.0) r.fail(p + "/ee_min", "'ee_min' must be nonnegative");
    if (c.ee_min_gain && !(*c.ee_min_gain >= 0.0 && *c.ee_min_gain <= 1.0))
        r.fail(p + "/ee_min_gain", "'ee_min_gain' must lie in [0, 1]");
    c.p_cr = r.number(j, p, "p_cr").value_or(c.p_cr);
    r.positive(c.p_cr, p + "/p_cr");
}

void read_frame(const Reader& r, const json& j, ScenarioSpec& s) {
    if (j.is_string()) {
        if (j.get<std::string>() != "free") r.fail("/frame", "frame must be \"free\" or an object");
        return;
    }
    r.allow_keys(j, "/frame", {"fixed_ms", "free"});
    const bool free = j.contains("free");
    if (free && !j.at("free").is_boolean()) r.fail("/frame/free", "'free' must be a boolean");
    s.frame_ms = r.number(j, "/frame", "fixed_ms");
    if (s.frame_ms && free && j.at("free").get<bool>())
        r.fail("/frame", "frame cannot be both fixed and free");
    if (!s.frame_ms && !(free && j.at("free").get<bool>()))
        r.fail("/frame", "frame needs 'fixed_ms' or \"free\": true");
    if (s.frame_ms) r.positive(*s.frame_ms, "/frame/fixed_ms");
}

void read_solver(const Reader& r, const json& j, ScenarioSpec& s) {
    const std::string p = "/solver";
    r.allow_keys(j, p, {"step_t", "update", "dinkelbach_eps", "slack_delta", "max_inner",
                        "max_outer", "frame_grid", "frame_tol_ms", "tf_cap_ms", "budget_delta",
                        "grid_order"});
    SolverConfig& c = s.solver;
    c.step_t = r.number(j, p, "step_t").value_or(c.step_t);
    c.dinkelbach_eps = r.number(j, p, "dinkelbach_eps").value_or(c.dinkelbach_eps);
    c.slack_delta = r.number(j, p, "slack_delta").value_or(c.slack_delta);
    c.max_inner = r.integer(j, p, "max_inner").value_or(c.max_inner);
    c.max_outer = r.integer(j, p, "max_outer").value_or(c.max_outer);
    c.frame_grid = r.integer(j, p, "frame_grid").value_or(c.frame_grid);
    c.frame_tol = r.number(j, p, "frame_tol_ms").value_or(c.frame_tol);
    c.tf_cap_ms = r.number(j, p, "tf_cap_ms");
    s.grid_order = r.integer(j, p, "grid_order").value_or(s.grid_order);
    if (const auto u = r.string(j, p, "update")) {
        if (*u == "scaled")
            c.update = MultiplierUpdate::Scaled;
        else if (*u == "plain")
            c.update = MultiplierUpdate::Plain;
        else
            r.fail(p + "/update", "update must be 'scaled' or 'plain'");
    }
    if (const auto b = r.string(j, p, "budget_delta")) {
        if (*b == "as-printed")
            c.budget_delta = BudgetDeltaForm::AsPrinted;
        else if (*b == "collision-complement")
            c.budget_delta = BudgetDeltaForm::CollisionComplement;
        else
            r.fail(p + "/budget_delta", "budget_delta must be 'as-printed' or 'collision-complement'");
    }
    for (const char* k : {"step_t", "dinkelbach_eps", "slack_delta", "frame_tol_ms"})
        if (j.contains(k)) r.positive(*r.number(j, p, k), p + "/" + k);
    for (const char* k : {"max_inner", "max_outer"})
        if (j.contains(k) && *r.integer(j, p, k) < 1) r.fail(p + "/" + k, std::string("'") + k + "' must be positive");
    if (c.frame_grid < 3) r.fail(p + "/frame_grid", "'frame_grid' must be at least 3");
    if (c.tf_cap_ms) r.positive(*c.tf_cap_ms, p + "/tf_cap_ms");
    if (s.grid_order < 2 || s.grid_order > 512) r.fail(p + "/grid_order", "'grid_order' must lie in [2, 512]");
}

void read_sweep(const Reader& r, const json& j, ScenarioSpec& s) {
    const std::string p = "/sweep";
    r.allow_keys(j, p, {"parameter", "from", "to", "points", "objective", "compare_constant"});
    SweepInput w;
    const auto param = r.string(j, p, "parameter");
    if (!param) r.fail(p, "missing required key 'parameter'");
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), *param) == names.end())
        r.fail(p + "/parameter", "unknown sweep parameter '" + *param + "'");
    w.parameter = *param;
    w.from = r.required(j, p, "from");
    w.to = r.required(j, p, "to");
    const auto pts = r.integer(j, p, "points");
    if (!pts) r.fail(p, "missing required key 'points'");
    if (*pts < 1 || *pts > 10000) r.fail(p + "/points", "'points' must lie in [1, 10000]");
    w.points = *pts;
    if (const auto o = r.string(j, p, "objective")) {
        try {
            w.objective = parse_objective(*o);
        } catch (const InvalidArgument& e) {
            r.fail(p + "/objective", e.what());
        }
    }
    if (j.contains("compare_constant")) {
        if (!j.at("compare_constant").is_boolean())
            r.fail(p + "/compare_constant", "'compare_constant' must be a boolean");
        w.compare_constant = j.at("compare_constant").get<bool>();
    }
    s.sweep = w;
}

void read_validate(const Reader& r, const json& j, ScenarioSpec& s) {
    r.allow_keys(j, "/validate", {"frames_ms"});
    if (!j.contains("frames_ms")) return;
    const json& a = j.at("frames_ms");
    if (!a.is_array() || a.empty()) r.fail("/validate/frames_ms", "'frames_ms' must be a nonempty array");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string ptr = "/validate/frames_ms/" + std::to_string(i);
        if (!a[i].is_number()) r.fail(ptr, "frame must be a number");
        const double v = a[i].get<double>();
        r.positive(v, ptr);
        s.validate_frames_ms.push_back(v);
    }
}

int line_at_byte(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::map<std::string, int> json_key_lines(const std::string& text) {
    struct Level {
        bool object;
        std::string key;
        int index = 0;
        bool expect_key = false;
    };
    std::map<std::string, int> out;
    std::vector<Level> st;
    int line = 1;
    auto prefix = [&]() {
        std::string s;
        for (std::size_t i = 0; i + 1 < st.size(); ++i)
            s += "/" + (st[i].object ? st[i].key : std::to_string(st[i].index));
        return s;
    };
    out[""] = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            --i;
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            i += 2;
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
                if (text[i] == '\n') ++line;
                ++i;
            }
            ++i;
        } else if (c == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                s += text[i];
            }
            if (!st.empty() && st.back().object && st.back().expect_key) {
                st.back().key = s;
                st.back().expect_key = false;
                out[prefix() + "/" + s] = line;
            }
        } else if (c == '{' || c == '[') {
            st.push_back({c == '{', "", 0, c == '{'});
        } else if (c == '}' || c == ']') {
            if (!st.empty()) st.pop_back();
        } else if (c == ',' && !st.empty()) {
            if (st.back().object)
                st.back().expect_key = true;
            else {
                ++st.back().index;
                out[prefix() + "/" + std::to_string(st.back().index)] = line;
            }
        } else if (!st.empty() && !st.back().object && st.back().index == 0 &&
                   !std::isspace(static_cast<unsigned char>(c))) {
            out.try_emplace(prefix() + "/0", line);
        }
    }
    return out;
}

int line_of(const ScenarioSpec& spec, const std::string& pointer) {
    std::string p = pointer;
    for (;;) {
        const auto it = spec.lines.find(p);
        if (it != spec.lines.end()) return it->second;
        if (p.empty()) return 0;
        p = p.substr(0, p.rfind('/'));
    }
}

ScenarioSpec parse_scenario_spec(const std::string& text, const std::string& origin) {
    ScenarioSpec s;
    s.origin = origin;
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw SchemaError(origin, line_at_byte(text, e.byte), "malformed JSON");
    }
    s.lines = json_key_lines(text);
    const Reader r(s);
    r.allow_keys(root, "", {"description", "traffic", "sensing", "channel", "constraints",
                            "frame", "solver", "sweep", "validate"});
    if (root.contains("description") && !root.at("description").is_string())
        r.fail("/description", "'description' must be a string");
    for (const char* k : {"traffic", "sensing", "constraints"})
        if (!root.contains(k)) r.fail("", std::string("missing required section '") + k + "'");
    read_traffic(r, root.at("traffic"), s);
    read_sensing(r, root.at("sensing"), s);
    if (root.contains("channel")) read_channel(r, root.at("channel"), s);
    read_constraints(r, root.at("constraints"), s);
    if (root.contains("frame")) read_frame(r, root.at("frame"), s);
    if (root.contains("solver")) read_solver(r, root.at("solver"), s);
    if (root.contains("sweep")) read_sweep(r, root.at("sweep"), s);
    if (root.contains("validate")) read_validate(r, root.at("validate"), s);
    return s;
}

ScenarioSpec load_scenario_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path, 0, "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_spec(buf.str(), path);
}

Scenario build_scenario(const ScenarioSpec& spec) {
    const Reader r(const_cast<ScenarioSpec&>(spec));
    Scenario sc;
    try {
        sc.traffic = TrafficModel(spec.mean_on_ms, spec.mean_off_ms);
    } catch (const InvalidArgument& e) {
        r.fail("/traffic", e.what());
    }
    const SensingInput& in = spec.sensing;
    try {
        if (in.mode == SensingMode::Roc)
            sc.sensing = SensingSpec::from_roc(*in.tau_ms, in.pf, in.snr_s, in.fs_hz);
        else if (in.tau_ms)
            sc.sensing = SensingSpec{in.pd, in.pf, *in.tau_ms, in.fs_hz, in.snr_s};
        else
            sc.sensing = SensingSpec::from_targets(in.pd, in.pf, in.snr_s, in.fs_hz);
        sc.sensing.validate();
    } catch (const InvalidArgument& e) {
        r.fail("/sensing", e.what());
    }
    sc.consts = spec.channel;
    const ConstraintInput& c = spec.constraints;
    if (c.p_avg_db) sc.limits.p_avg = from_db(*c.p_avg_db);
    if (c.p_pk_db) sc.limits.p_pk = from_db(*c.p_pk_db);
    sc.limits.q_avg = from_db(c.q_avg_db);
    sc.limits.pc_max = c.pc_max;
    sc.limits.ee_min = c.ee_min;
    sc.limits.p_cr = c.p_cr;
    try {
        sc.limits.validate();
    } catch (const InvalidArgument& e) {
        r.fail("/constraints", e.what());
    }
    sc.frame_ms = spec.frame_ms;
    if (sc.frame_ms && !(*sc.frame_ms > sc.sensing.tau_ms))
        r.fail("/frame/fixed_ms", "fixed frame must exceed the sensing duration (" +
                                      std::to_string(sc.sensing.tau_ms) + " ms)");
    sc.solver = spec.solver;
    sc.grid = default_grid(spec.grid_order);
    try {
        sc.validate();
    } catch (const InvalidArgument& e) {
        r.fail("/solver", e.what());
    }
    return sc;
}

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names = {
        "pd",       "pf",       "tau_ms", "snr_s",  "mean_on_ms", "mean_off_ms", "n0",
        "sigma_s2", "p_avg_db", "p_pk_db", "q_avg_db", "pc_max",  "ee_min",      "ee_min_gain",
        "p_cr",     "frame_ms"};
    return names;
}

std::vector<double> sweep_values(const SweepInput& w) {
    std::vector<double> v(static_cast<std::size_t>(w.points));
    const int n = w.points - 1;
    for (int i = 0; i <= n; ++i) {
        const double x = n == 0 ? w.from : (w.from * (n - i) + w.to * i) / n;
        // 15 significant digits: 0.15 rather than 0.15000000000000002
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", x);
        v[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
    }
    return v;
}

void set_parameter(ScenarioSpec& s, const std::string& name, double x) {
    ConstraintInput& c = s.constraints;
    if (name == "pd") s.sensing.pd = x;
    else if (name == "pf") s.sensing.pf = x;
    else if (name == "tau_ms") s.sensing.tau_ms = x;
    else if (name == "snr_s") s.sensing.snr_s = x;
    else if (name == "mean_on_ms") s.mean_on_ms = x;
    else if (name == "mean_off_ms") s.mean_off_ms = x;
    else if (name == "n0") s.channel.n0 = x;
    else if (name == "sigma_s2") s.channel.sigma_s2 = x;
    else if (name == "p_avg_db") { c.p_avg_db = x; c.p_pk_db.reset(); }
    else if (name == "p_pk_db") { c.p_pk_db = x; c.p_avg_db.reset(); }
    else if (name == "q_avg_db") c.q_avg_db = x;
    else if (name == "pc_max") c.pc_max = x;
    else if (name == "ee_min") { c.ee_min = x; c.ee_min_gain.reset(); }
    else if (name == "ee_min_gain") { c.ee_min_gain = x; c.ee_min.reset(); }
    else if (name == "p_cr") c.p_cr = x;
    else if (name == "frame_ms") s.frame_ms = x;
    else throw InvalidArgument("unknown parameter '" + name + "'");
}

SweepObjective parse_objective(const std::string& s) {
    if (s == "ee") return SweepObjective::Ee;
    if (s == "rate-min-ee") return SweepObjective::RateMinEe;
    if (s == "constant-power-rate") return SweepObjective::ConstantPowerRate;
    throw InvalidArgument("objective must be 'ee', 'rate-min-ee' or 'constant-power-rate'");
}

const char* to_string(SweepObjective o) {
    switch (o) {
    case SweepObjective::Ee: return "ee";
    case SweepObjective::RateMinEe: return "rate-min-ee";
    case SweepObjective::ConstantPowerRate: return "constant-power-rate";
    }
    return "?";
}

}  // namespace cogra
