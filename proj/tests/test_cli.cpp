#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lifeopt/commands.hpp"
#include "lifeopt/config.hpp"
#include "lifeopt/report.hpp"

using namespace lifeopt;
namespace fs = std::filesystem;

namespace {

const char* kBaseline = R"({
  "model": {"r": 0.2, "mu": 0.3, "sigma": 0.25, "rho": 0.2, "alpha": 0.5, "delta": 100,
            "horizon": 10, "mortality": 0.01, "income": 10},
  "solver": {"grid_steps": 2000},
  "sweep": {"thetas": [0, 1], "x_points": 11}
})";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lifeopt_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(kBaseline);
    CHECK(c.model.alpha == 0.5);
    CHECK(c.model.initial_wealth == 1.0);
    CHECK(c.model.mortality(3.0) == 0.01);
    CHECK(c.solver.grid_steps == 2000);
    CHECK(c.mc.seed == 42);
    CHECK(c.sweep.thetas == std::vector<double>{0.0, 1.0});
}

TEST_CASE("piecewise inputs and theta ranges") {
    const RunConfig c = parse_config(R"({
      "model": {"r": 0.2, "mu": 0.3, "sigma": 0.25, "rho": 0.2, "alpha": 0.5, "delta": 100,
                "horizon": 10, "mortality": {"breaks": [5], "values": [0.01, 0.02]}, "income": 10},
      "sweep": {"thetas": {"min": 0, "max": 2, "step": 0.25}}
    })");
    CHECK(c.model.mortality(6.0) == 0.02);
    REQUIRE(c.sweep.thetas.size() == 9);
    CHECK(c.sweep.thetas.back() == doctest::Approx(2.0));
}

TEST_CASE("config errors") {
    std::string text = kBaseline;
    text.replace(text.find("\"alpha\": 0.5, "), 14, "");
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    std::string negative = kBaseline;
    negative.replace(negative.find("\"sigma\": 0.25"), 13, "\"sigma\": -1");
    CHECK_THROWS_AS(parse_config(negative), ParameterError);
    CHECK_THROWS_AS(load_config("/nonexistent/lifeopt.json"), ConfigError);
}

TEST_CASE("theta list") {
    CHECK(parse_theta_list("0,0.5,1") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parse_theta_list("2") == std::vector<double>{2.0});
    CHECK_THROWS(parse_theta_list("0,,1"));
    CHECK_THROWS(parse_theta_list("a"));
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(1e-5) == "1e-05");
    CHECK(format_number(0.0001) == "0.0001");
    for (double v : {0.1, 1.0 / 3.0, -0.046742230063240506, 2.5e-7, 123456.789, 1e300})
        CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv round trip") {
    const fs::path dir = scratch("csv");
    {
        CsvWriter w(dir / "t.csv", {"a", "b"});
        w.row(std::vector<double>{1.0 / 3.0, -7e-9});
        w.row(std::vector<double>{2.0, 0.1});
    }
    const std::string raw = slurp(dir / "t.csv");
    CHECK(raw.find('\r') == std::string::npos);
    const CsvTable t = read_csv(dir / "t.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == 1.0 / 3.0);
    CHECK(t.rows[0][1] == -7e-9);
}

TEST_CASE("solve writes the expected files") {
    RunConfig c = parse_config(kBaseline);
    c.output_dir = scratch("solve").string();
    std::ostringstream log;
    CHECK(cmd_solve(c, log) == kExitOk);
    const CsvTable hjb = read_csv(fs::path(c.output_dir) / "hjb.csv");
    CHECK(hjb.header == std::vector<std::string>{"t", "A", "B_theta_0", "B_theta_1"});
    const CsvTable cf = read_csv(fs::path(c.output_dir) / "closed_form.csv");
    CHECK(cf.header == std::vector<std::string>{"t", "g1", "g2", "w_hat"});
    const std::string summary = slurp(fs::path(c.output_dir) / "summary.txt");
    CHECK(summary.find("theta_hat: 0\n") != std::string::npos);
    CHECK(summary.find("seed: 42") != std::string::npos);
    CHECK(summary.find("cross_check: PASS") != std::string::npos);
}

TEST_CASE("sweep with a single theta has no monotonicity verdict") {
    RunConfig c = parse_config(kBaseline);
    c.sweep.thetas = {0.0};
    c.output_dir = scratch("sweep1").string();
    std::ostringstream log;
    CHECK(cmd_sweep_theta(c, log) == kExitOk);
    CHECK(read_csv(fs::path(c.output_dir) / "figure1b.csv").rows.size() == 1);
    CHECK(log.str().find("SKIPPED") != std::string::npos);
}

TEST_CASE("sweep orders the value functions") {
    RunConfig c = parse_config(kBaseline);
    c.output_dir = scratch("sweep2").string();
    std::ostringstream log;
    CHECK(cmd_sweep_theta(c, log) == kExitOk);
    const CsvTable a = read_csv(fs::path(c.output_dir) / "figure1a.csv");
    CHECK(a.rows.size() == 11);
    for (const auto& row : a.rows) CHECK(row[1] > row[2]);
}

TEST_CASE("indifference rows") {
    RunConfig c = parse_config(kBaseline);
    c.output_dir = scratch("indiff").string();
    std::ostringstream log;
    CHECK(cmd_indifference(c, log) == kExitOk);
    const CsvTable t = read_csv(fs::path(c.output_dir) / "indifference.csv");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == 0.0);
    CHECK(t.rows[1][1] < 0.0);
}

TEST_CASE("validate flags a corrupted drift") {
    RunConfig c = parse_config(kBaseline);
    c.output_dir = scratch("validate").string();
    c.mc.paths = 2000;
    c.mc.dt = 0.01;
    c.mc.mu_shift = 1.0;
    c.mc.utility_thetas = {0.0};
    std::ostringstream log;
    CHECK(cmd_validate(c, log) == kExitValidation);
    CHECK(slurp(fs::path(c.output_dir) / "validation.txt").find("FAIL") != std::string::npos);
}

TEST_CASE("run_command maps errors to exit codes") {
    RunConfig c = parse_config(kBaseline);
    c.output_dir = scratch("errors").string();
    std::ostringstream log, err;
    CHECK(run_command("bogus", c, log, err) != kExitOk);
    c.model.r = -0.05;
    CHECK(run_command("solve", c, log, err) == kExitSolver);
}
