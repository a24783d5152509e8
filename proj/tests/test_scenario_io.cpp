#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "cogra/scenario_io.hpp"

using namespace cogra;

namespace {

const char* kBase = R"({
  // VoIP at the default detector targets
  "traffic": {"preset": "voip"},
  "sensing": {"mode": "targets", "pd": 0.9, "pf": 0.1},
  "constraints": {
    "p_avg_db": 10,
    "q_avg_db": -20,
    "pc_max": 0.2
  },
  "frame": {"fixed_ms": 100}
})";

int error_line(const std::string& text) {
    try {
        build_scenario(parse_scenario_spec(text, "t.json"));
    } catch (const SchemaError& e) {
        return e.line;
    }
    return -1;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("base scenario parses and converts dB") {
    const ScenarioSpec spec = parse_scenario_spec(kBase, "t.json");
    CHECK(spec.mean_on_ms == 352.0);
    CHECK(spec.mean_off_ms == 650.0);
    const Scenario sc = build_scenario(spec);
    CHECK(*sc.limits.p_avg == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(sc.limits.q_avg == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_FALSE(sc.limits.p_pk);
    CHECK(*sc.frame_ms == 100.0);
    CHECK(sc.sensing.tau_ms == doctest::Approx(7.21).epsilon(5e-3));
}

TEST_CASE("schema errors point at the offending line") {
    CHECK(error_line(replace(kBase, "\"pc_max\": 0.2", "\"pc_max\": 1.5")) == 8);
    CHECK(error_line(replace(kBase, "\"pc_max\": 0.2", "\"pc_max\": \"x\"")) == 8);
    CHECK(error_line(replace(kBase, "\"q_avg_db\": -20,", "\"q_avg_db\": -20, \"bogus\": 1,")) == 7);
    CHECK(error_line(replace(kBase, "\"pd\": 0.9", "\"pd\": 0.05")) == 4);
    // malformed JSON reports the line of the parse failure
    CHECK(error_line(replace(kBase, "\"pc_max\": 0.2", "\"pc_max\": ")) == 9);
}

TEST_CASE("error message carries origin and line") {
    try {
        parse_scenario_spec(replace(kBase, "\"pc_max\": 0.2", "\"pc_max\": -1"), "fig.json");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).rfind("fig.json:8:", 0) == 0);
    }
}

TEST_CASE("exactly one power limit") {
    CHECK(error_line(replace(kBase, "\"p_avg_db\": 10,", "")) > 0);
    CHECK(error_line(replace(kBase, "\"p_avg_db\": 10,", "\"p_avg_db\": 10, \"p_pk_db\": 10,")) > 0);
    const ScenarioSpec pk =
        parse_scenario_spec(replace(kBase, "\"p_avg_db\": 10,", "\"p_pk_db\": 3,"), "t");
    const Scenario sc = build_scenario(pk);
    CHECK(sc.limits.peak());
    CHECK(*sc.limits.p_pk == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("required sections and keys") {
    CHECK(error_line(R"({"traffic": {"preset": "voip"}})") == 1);
    CHECK(error_line(replace(kBase, "\"preset\": \"voip\"", "\"mean_on_ms\": 352")) == 3);
    CHECK(error_line(replace(kBase, "\"preset\": \"voip\"", "\"preset\": \"bursty\"")) == 3);
}

TEST_CASE("sensing modes") {
    const std::string roc = replace(kBase, "\"mode\": \"targets\", \"pd\": 0.9, \"pf\": 0.1",
                                    "\"mode\": \"roc\", \"tau_ms\": 5, \"pf\": 0.1");
    const Scenario sc = build_scenario(parse_scenario_spec(roc, "t"));
    CHECK(sc.sensing.tau_ms == 5.0);
    CHECK(sc.sensing.p_f == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sc.sensing.p_d > 0.8);
    CHECK(sc.sensing.p_d < 0.9);
    CHECK(error_line(replace(kBase, "\"mode\": \"targets\"", "\"mode\": \"roc\"")) == 4);

    const std::string held =
        replace(kBase, "\"pf\": 0.1}", "\"pf\": 0.1, \"tau_ms\": 7.2115}");
    const Scenario h = build_scenario(parse_scenario_spec(held, "t"));
    CHECK(h.sensing.tau_ms == 7.2115);
    CHECK(h.sensing.p_d == 0.9);
}

TEST_CASE("frame forms") {
    const Scenario fixed = build_scenario(parse_scenario_spec(kBase, "t"));
    CHECK(fixed.frame_ms);
    const std::string free_s = replace(kBase, "{\"fixed_ms\": 100}", "\"free\"");
    CHECK_FALSE(build_scenario(parse_scenario_spec(free_s, "t")).frame_ms);
    const std::string free_o = replace(kBase, "{\"fixed_ms\": 100}", "{\"free\": true}");
    CHECK_FALSE(build_scenario(parse_scenario_spec(free_o, "t")).frame_ms);
    CHECK(error_line(replace(kBase, "{\"fixed_ms\": 100}", "{\"fixed_ms\": 5}")) > 0);
}

TEST_CASE("sweep values and parameter updates") {
    const std::string sw = replace(
        kBase, "\"frame\": {\"fixed_ms\": 100}",
        "\"frame\": {\"fixed_ms\": 100},\n  \"sweep\": {\"parameter\": \"pd\", \"from\": 0.5, "
        "\"to\": 1.0, \"points\": 6}");
    ScenarioSpec spec = parse_scenario_spec(sw, "t");
    REQUIRE(spec.sweep);
    const std::vector<double> v = sweep_values(*spec.sweep);
    REQUIRE(v.size() == 6);
    CHECK(v.front() == 0.5);
    CHECK(v.back() == 1.0);
    CHECK(v[2] == doctest::Approx(0.7));

    set_parameter(spec, "p_pk_db", 4.0);
    CHECK_FALSE(spec.constraints.p_avg_db);
    CHECK(*spec.constraints.p_pk_db == 4.0);
    set_parameter(spec, "ee_min", 1.0);
    set_parameter(spec, "ee_min_gain", 0.5);
    CHECK_FALSE(spec.constraints.ee_min);
    CHECK_THROWS(set_parameter(spec, "nope", 1.0));

    CHECK(error_line(replace(sw, "\"pd\", \"from\"", "\"bogus\", \"from\"")) == 11);
}

TEST_CASE("key line map") {
    const auto lines = json_key_lines(kBase);
    CHECK(lines.at("/traffic") == 3);
    CHECK(lines.at("/traffic/preset") == 3);
    CHECK(lines.at("/constraints/q_avg_db") == 7);
    CHECK(lines.at("/frame/fixed_ms") == 10);
}

TEST_CASE("comments are accepted") {
    const std::string c = replace(kBase, "\"pc_max\": 0.2", "\"pc_max\": 0.2 /* cap */");
    CHECK(parse_scenario_spec(c, "t").constraints.pc_max == 0.2);
}

TEST_CASE("every checked-in figure scenario loads") {
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(COGRA_SCENARIO_DIR)) {
        if (e.path().extension() != ".json") continue;
        INFO(e.path().string());
        const ScenarioSpec spec = load_scenario_spec(e.path().string());
        REQUIRE(spec.sweep);
        for (double v : sweep_values(*spec.sweep)) {
            ScenarioSpec s = spec;
            set_parameter(s, spec.sweep->parameter, v);
            CHECK_NOTHROW(build_scenario(s));
        }
        ++count;
    }
    CHECK(count >= 15);
}
