#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cogra/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string output;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" COGRA_OPT_PATH "\" " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / "cogra_cli_test";
    fs::create_directories(d);
    return d;
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

const char* kFixed = R"({
  "traffic": {"preset": "voip"},
  "sensing": {"mode": "targets", "pd": 0.9, "pf": 0.1},
  "constraints": {"p_avg_db": 10, "q_avg_db": -20, "pc_max": 0.2},
  "frame": {"fixed_ms": 100},
  "solver": {"grid_order": 32}
})";

std::string args(const std::string& cmd, const fs::path& sc, const fs::path& out,
                 const std::string& extra = "") {
    return cmd + " --scenario \"" + sc.string() + "\" --out \"" + out.string() + "\" " + extra;
}

}  // namespace

TEST_CASE("optimize-ee writes the required columns") {
    const fs::path sc = write("fixed.json", kFixed);
    const fs::path out = scratch() / "fixed.csv";
    const Run r = run(args("optimize-ee", sc, out));
    REQUIRE(r.code == 0);
    const auto rows = cogra::parse_csv(slurp(out));
    REQUIRE(rows.size() == 2);
    const auto& h = rows[0];
    for (const char* col : {"ee_bits_per_joule", "rate_bits_s_hz", "tf_opt_ms", "pc_avg",
                            "lambda", "nu", "feasible", "iterations"})
        CHECK(std::find(h.begin(), h.end(), col) != h.end());
    CHECK(h[0] == "scenario");
    CHECK(rows[1][0] == "fixed");
}

TEST_CASE("identical inputs give byte-identical CSV across thread counts") {
    const fs::path sc = write("fixed.json", kFixed);
    const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
    REQUIRE(run(args("optimize-ee", sc, a), "COGRA_THREADS=1").code == 0);
    REQUIRE(run(args("optimize-ee", sc, b), "COGRA_THREADS=4").code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("infeasible collision limit exits 2 with both values") {
    std::string text = kFixed;
    text.replace(text.find("\"pd\": 0.9"), 9, "\"pd\": 0.5");
    const fs::path sc = write("infeasible.json", text);
    const Run r = run(args("optimize-ee", sc, scratch() / "inf.csv"));
    CHECK(r.code == 2);
    CHECK(r.output.find("post_busy") != std::string::npos);
    CHECK(r.output.find("pc_max") != std::string::npos);
}

TEST_CASE("schema errors exit 1 with a line reference") {
    std::string text = kFixed;
    text.replace(text.find("\"pc_max\": 0.2"), 13, "\"pc_max\": 7");
    const fs::path sc = write("bad.json", text);
    const Run r = run(args("optimize-ee", sc, scratch() / "bad.csv"));
    CHECK(r.code == 1);
    CHECK(r.output.find("bad.json:4:") != std::string::npos);
}

TEST_CASE("argument errors exit 1") {
    CHECK(run("optimize-ee").code == 1);
    CHECK(run("bogus --scenario x --out y").code == 1);
    const fs::path sc = write("fixed.json", kFixed);
    CHECK(run(args("optimize-ee", sc, scratch() / "t.csv"), "COGRA_THREADS=zero").code == 1);
    CHECK(run(args("optimize-ee", scratch() / "missing.json", scratch() / "t.csv")).code == 1);
}

TEST_CASE("feasibility and validate commands") {
    const fs::path sc = write("fixed.json", kFixed);
    const fs::path f = scratch() / "feas.csv";
    REQUIRE(run(args("feasibility", sc, f)).code == 0);
    const auto fr = cogra::parse_csv(slurp(f));
    REQUIRE(fr.size() == 2);
    CHECK(fr[1][1] == "1");

    const fs::path v = scratch() / "val.csv";
    const Run r = run(args("validate", sc, v, "--trials 20000 --seed 7"));
    REQUIRE(r.code == 0);
    const auto vr = cogra::parse_csv(slurp(v));
    REQUIRE(vr.size() == 5);
    const auto& h = vr[0];
    const auto col = std::find(h.begin(), h.end(), "within_3se") - h.begin();
    REQUIRE(col < static_cast<long>(h.size()));
    for (std::size_t i = 1; i < vr.size(); ++i) CHECK(vr[i][col] == "1");
}

TEST_CASE("sweep rows follow the sweep order") {
    std::string text = kFixed;
    text.replace(text.rfind('}'), 1,
                 ", \"sweep\": {\"parameter\": \"q_avg_db\", \"from\": -20, \"to\": 0, "
                 "\"points\": 3}}");
    const fs::path sc = write("sweep.json", text);
    const fs::path out = scratch() / "sweep.csv";
    REQUIRE(run(args("sweep", sc, out)).code == 0);
    const auto rows = cogra::parse_csv(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "q_avg_db");
    CHECK(rows[1][0] == "-20");
    CHECK(rows[2][0] == "-10");
    CHECK(rows[3][0] == "0");
}
