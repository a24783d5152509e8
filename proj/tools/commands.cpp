#include "commands.hpp"

#include <omp.h>

#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>

#include "cogra/csv.hpp"
#include "cogra/mcsim.hpp"
#include "cogra/optimizer.hpp"
#include "cogra/scenario_io.hpp"

namespace cogra::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double x) { return format_number(x); }
std::string flag(bool b) { return b ? "1" : "0"; }

const std::vector<std::string> kResultColumns = {
    "ee_bits_per_joule", "rate_bits_s_hz", "tf_opt_ms",   "pc_avg",      "lambda",
    "nu",                "mu",             "vartheta",    "varphi",      "eta",
    "feasible",          "iterations",     "inner_iterations", "alpha",  "f_value",
    "avg_tx_power",      "avg_interference", "post_busy", "pc_max",      "operating_case",
    "p_op",              "ee_min",         "multimodal",  "tau_ms",      "pd",
    "pf"};

const std::vector<std::string> kConstantColumns = {"const_ee_bits_per_joule",
                                                    "const_rate_bits_s_hz", "const_tf_opt_ms",
                                                    "const_pc_avg", "const_power"};

const std::vector<std::string> kMcColumns = {"constant_power", "mc_rate_bits_s_hz",
                                             "mc_standard_error"};

Row result_fields(const OptResult& r, const Scenario& sc) {
    const PolicyParams& p = r.params;
    return {num(r.ee),
            num(r.rate),
            num(r.tf_opt),
            num(r.pc_avg),
            num(p.lambda),
            num(p.nu),
            num(p.mu),
            num(p.vartheta),
            num(p.varphi),
            r.eta ? num(*r.eta) : "",
            flag(r.feasible),
            std::to_string(r.iterations.outer),
            std::to_string(r.iterations.inner),
            num(r.alpha_star),
            num(r.f_value),
            num(r.avg_tx),
            num(r.avg_interference),
            num(r.post_busy),
            num(sc.limits.pc_max),
            to_string(r.op_case),
            num(r.p_op),
            sc.limits.ee_min ? num(*sc.limits.ee_min) : "",
            flag(r.multimodal),
            num(sc.sensing.tau_ms),
            num(sc.sensing.p_d),
            num(sc.sensing.p_f)};
}

void append(Row& a, const Row& b) { a.insert(a.end(), b.begin(), b.end()); }

std::vector<std::string> header(const std::string& first, bool constant, bool mc) {
    std::vector<std::string> h{first};
    append(h, kResultColumns);
    if (constant) append(h, kConstantColumns);
    if (mc) append(h, kMcColumns);
    return h;
}

// ee_min given as a fraction of the maximum EE of the same scenario.
Scenario resolve(const ScenarioSpec& spec) {
    Scenario sc = build_scenario(spec);
    if (spec.constraints.ee_min_gain) {
        Scenario base = sc;
        base.limits.ee_min.reset();
        const OptResult best = optimize_ee(base);
        sc.limits.ee_min = *spec.constraints.ee_min_gain * (best.feasible ? best.ee : 0.0);
    }
    return sc;
}

double transmit_power_cap(const Scenario& sc, const FrameContext& ctx) {
    if (sc.limits.peak()) return *sc.limits.p_pk;
    return *sc.limits.p_avg / (ctx.ratio * ctx.pr_idle_decision);
}

std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) {
    return CounterRng::mix(seed ^ CounterRng::mix(row + 1));
}

struct PointOutput {
    Row fields;
    bool feasible = true;
};

PointOutput constant_power_rate_point(const Scenario& sc, const Options& opt, std::uint64_t row) {
    const CollisionFeasibility cf = collision_feasibility(sc);
    OptResult r;
    r.post_busy = cf.post_busy;
    Row extra;
    if (!cf.feasible) {
        r.pc_avg = cf.post_busy;
        r.op_case = OperatingCase::Infeasible;
        extra = {"0", "0", "0"};
    } else {
        const FrameContext ctx = sc.context();
        const double power = interference_limited_power(ctx, transmit_power_cap(sc, ctx), sc.limits.q_avg);
        const PowerRule rule = [power](double, double) { return power; };
        const PolicyEvaluation ev = evaluate_rule(rule, sc);
        SimConfig cfg;
        cfg.trials = opt.trials;
        cfg.seed = row_seed(opt.seed, row);
        const SimEstimate mc = simulate_throughput(sc, rule, cfg);
        r.feasible = true;
        r.tf_opt = ctx.frame_ms;
        r.pc_avg = ctx.pc;
        r.rate = ev.rate;
        r.ee = ev.ee;
        r.avg_tx = ev.usage.avg_tx_power;
        r.avg_interference = ev.usage.avg_interference;
        r.p_op = power;
        r.objective = ev.rate;
        extra = {num(power), num(mc.mean), num(mc.standard_error)};
    }
    PointOutput out{result_fields(r, sc), r.feasible};
    append(out.fields, extra);
    return out;
}

PointOutput sweep_point(const ScenarioSpec& spec, const Options& opt, std::uint64_t row) {
    const Scenario sc = resolve(spec);
    const SweepInput& w = *spec.sweep;
    if (w.objective == SweepObjective::ConstantPowerRate) {
        if (!sc.frame_ms)
            throw SchemaError(spec.origin, line_of(spec, "/sweep/objective"),
                              "constant-power-rate needs a fixed frame (sweep frame_ms or set frame.fixed_ms)");
        return constant_power_rate_point(sc, opt, row);
    }
    const OptResult r = w.objective == SweepObjective::Ee ? optimize_ee(sc)
                                                          : optimize_throughput_min_ee(sc);
    PointOutput out{result_fields(r, sc), r.feasible};
    if (w.compare_constant) {
        const OptResult c = optimize_constant_power_ee(sc);
        append(out.fields, {num(c.ee), num(c.rate), num(c.tf_opt), num(c.pc_avg), num(c.constant_power)});
    }
    return out;
}

std::string scenario_name(const Options& opt) {
    return std::filesystem::path(opt.scenario).stem().string();
}

int report_infeasible(const OptResult& r, const Scenario& sc, std::ostream& err) {
    if (r.feasible) return kExitOk;
    if (r.post_busy > sc.limits.pc_max)
        err << "infeasible: post_busy = " << num(r.post_busy) << " exceeds pc_max = "
            << num(sc.limits.pc_max) << "; no frame meets the collision limit\n";
    else
        err << "infeasible: minimum EE " << num(sc.limits.ee_min.value_or(0.0))
            << " cannot be met at any frame (post_busy = " << num(r.post_busy)
            << ", pc_max = " << num(sc.limits.pc_max) << ")\n";
    return kExitInfeasible;
}

int cmd_optimize(const ScenarioSpec& spec, const Options& opt, bool rate, std::ostream& err) {
    const Scenario sc = resolve(spec);
    if (rate && !sc.limits.ee_min)
        throw SchemaError(spec.origin, line_of(spec, "/constraints"),
                          "optimize-rate-min-ee needs 'ee_min' or 'ee_min_gain'");
    const OptResult r = rate ? optimize_throughput_min_ee(sc) : optimize_ee(sc);
    CsvTable t(header("scenario", false, false));
    Row row{scenario_name(opt)};
    append(row, result_fields(r, sc));
    t.add_row(row);
    t.write(opt.out);
    return report_infeasible(r, sc, err);
}

int cmd_feasibility(const ScenarioSpec& spec, const Options& opt, std::ostream& err) {
    const bool sweeping = spec.sweep.has_value();
    const std::string first = sweeping ? spec.sweep->parameter : "scenario";
    CsvTable t({first, "feasible", "post_busy", "pc_max", "pr_busy", "tf_max_ms", "bound",
                "tau_ms", "pd", "pf", "pr_idle_decision"});
    const std::vector<double> values = sweeping ? sweep_values(*spec.sweep) : std::vector<double>{0.0};
    bool all = true;
    CollisionFeasibility last{};
    double last_pc_max = 0.0;
    for (double v : values) {
        ScenarioSpec s = spec;
        if (sweeping) set_parameter(s, s.sweep->parameter, v);
        Scenario sc = build_scenario(s);
        sc.frame_ms.reset();
        const CollisionFeasibility cf = collision_feasibility(sc);
        const IdlePosterior post = posterior_given_idle(sc.traffic, sc.sensing.p_d, sc.sensing.p_f);
        t.add_row({sweeping ? num(v) : scenario_name(opt), flag(cf.feasible), num(cf.post_busy),
                   num(cf.pc_max), num(sc.traffic.pr_busy()), num(cf.tf_max_ms),
                   !cf.feasible ? "infeasible" : (cf.unbounded ? "unbounded" : "bounded"),
                   num(sc.sensing.tau_ms), num(sc.sensing.p_d), num(sc.sensing.p_f),
                   num(post.pr_idle_decision)});
        if (!cf.feasible) {
            all = false;
            last = cf;
            last_pc_max = sc.limits.pc_max;
        }
    }
    t.write(opt.out);
    if (!sweeping && !all) {
        err << "infeasible: post_busy = " << num(last.post_busy) << " exceeds pc_max = "
            << num(last_pc_max) << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_validate(const ScenarioSpec& spec, const Options& opt, std::ostream& err) {
    Scenario sc = build_scenario(spec);
    std::vector<double> frames = spec.validate_frames_ms;
    if (frames.empty()) {
        if (sc.frame_ms)
            frames = {*sc.frame_ms};
        else
            frames = {25.0, 50.0, 100.0, 200.0};
    }
    CsvTable t({"quantity", "frame_ms", "analytic", "mc_estimate", "mc_standard_error", "z_score",
                "within_3se", "trials", "seed"});
    std::uint64_t k = 0;
    int outside = 0;
    auto add = [&](const std::string& q, double frame, double analytic, const SimEstimate& mc,
                   std::uint64_t seed) {
        const double z = mc.standard_error > 0.0 ? (mc.mean - analytic) / mc.standard_error
                                                 : (mc.mean == analytic ? 0.0 : std::numeric_limits<double>::infinity());
        const bool ok = std::abs(z) <= 3.0;
        if (!ok) ++outside;
        t.add_row({q, num(frame), num(analytic), num(mc.mean), num(mc.standard_error), num(z),
                   flag(ok), std::to_string(opt.trials), std::to_string(seed)});
    };
    for (double frame : frames) {
        if (!(frame > sc.sensing.tau_ms))
            throw SchemaError(spec.origin, line_of(spec, "/validate/frames_ms"),
                              "validation frame " + num(frame) + " ms does not exceed tau");
        const CollisionRatios cr = collision_ratios(sc.traffic, sc.sensing, frame);
        SimConfig cfg;
        cfg.trials = opt.trials;

        cfg.start = StartState::Idle;
        cfg.seed = row_seed(opt.seed, k++);
        add("pc0", frame, cr.pc0, simulate_collision(sc.traffic, frame, sc.sensing.tau_ms, cfg), cfg.seed);
        cfg.start = StartState::Busy;
        cfg.seed = row_seed(opt.seed, k++);
        add("pc1", frame, cr.pc1, simulate_collision(sc.traffic, frame, sc.sensing.tau_ms, cfg), cfg.seed);
        cfg.seed = row_seed(opt.seed, k++);
        add("pc_avg", frame, cr.pc_avg,
            simulate_collision_given_idle(sc.traffic, sc.sensing, frame, cfg), cfg.seed);

        const Scenario at = sc.at_frame(frame);
        const FrameContext ctx = at.context();
        const double power =
            interference_limited_power(ctx, transmit_power_cap(at, ctx), at.limits.q_avg);
        const PowerRule rule = [power](double, double) { return power; };
        cfg.seed = row_seed(opt.seed, k++);
        add("rate_constant_power", frame, evaluate_rule(rule, at).rate,
            simulate_throughput(at, rule, cfg), cfg.seed);
    }
    t.write(opt.out);
    if (outside > 0)
        err << outside << " of " << t.rows() << " rows fall outside 3 standard errors\n";
    return kExitOk;
}

int cmd_sweep(const ScenarioSpec& spec, const Options& opt) {
    if (!spec.sweep) throw SchemaError(spec.origin, 1, "sweep command needs a 'sweep' section");
    const SweepInput& w = *spec.sweep;
    const std::vector<double> values = sweep_values(w);
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<PointOutput> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            ScenarioSpec s = spec;
            set_parameter(s, w.parameter, values[i]);
            rows[i] = sweep_point(s, opt, static_cast<std::uint64_t>(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    CsvTable t(header(w.parameter, w.compare_constant,
                      w.objective == SweepObjective::ConstantPowerRate));
    for (std::size_t i = 0; i < values.size(); ++i) {
        Row row{num(values[i])};
        append(row, rows[i].fields);
        t.add_row(row);
    }
    t.write(opt.out);
    return kExitOk;
}

}  // namespace

int run(const Options& opt, std::ostream& err) {
    try {
        ScenarioSpec spec = load_scenario_spec(opt.scenario);
        if (opt.grid_order) spec.grid_order = *opt.grid_order;
        if (opt.command == "optimize-ee") return cmd_optimize(spec, opt, false, err);
        if (opt.command == "optimize-rate-min-ee") return cmd_optimize(spec, opt, true, err);
        if (opt.command == "feasibility") return cmd_feasibility(spec, opt, err);
        if (opt.command == "validate") return cmd_validate(spec, opt, err);
        if (opt.command == "sweep") return cmd_sweep(spec, opt);
        err << "unknown command '" << opt.command << "'\n";
        return kExitError;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitError;
    } catch (const MaxIterations& e) {
        err << "solver error: " << e.what() << " (last slacks: power " << num(e.slack_power)
            << ", interference " << num(e.slack_interference) << ")\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace cogra::cli
