#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "nzsdg/config.hpp"
#include "nzsdg/error.hpp"
#include "nzsdg/io.hpp"
#include "nzsdg/run.hpp"

using namespace nzsdg;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nzsdg_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string parse_error_pointer(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ParseError& e) {
        return e.pointer();
    }
    return "<none>";
}

RunConfig small_config(const fs::path& out) {
    RunConfig config = parse_config_text(R"({"problem": {}, "grid": {"nx": 81, "nt": 80}})");
    config.sim.n_paths = 2000;
    config.sim.n_steps = 40;
    config.verify.deviations_per_player = 4;
    config.verify.isaacs_samples = 1000;
    config.output_dir = out;
    return config;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const auto config = parse_config_text(R"({"problem": {}})");
    CHECK(config.problem == base_problem());
    CHECK(config.grid.nx == 401);
    CHECK(config.grid.nt == 400);
    CHECK(config.grid.x_min == -8.0);
    CHECK(config.sim.n_paths == 200000);
    CHECK(config.sim.n_steps == 200);
    CHECK(config.smoothing.schedule == std::vector<int>{8, 16, 32, 64, 128});
    CHECK(config.smoothing.tol == 1e-3);
    CHECK(config.verify.deviations_per_player == 50);
    CHECK(config.verify.slack == 5e-3);
    CHECK(config.verify.isaacs_samples == 100000);
}

TEST_CASE("config errors") {
    try {
        parse_config_text(R"({"problem": {"horizon": 0}})");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("horizon must be positive") != std::string::npos);
        CHECK_FALSE(e.report().ok);
    }
    CHECK_THROWS_AS(parse_config("/nonexistent/nzsdg/config.json"), IoError);
    CHECK(parse_error_pointer(R"({})") == "/problem");
    CHECK(parse_error_pointer(R"({"problem": {"horizon": "one"}})") == "/problem/horizon");
    CHECK(parse_error_pointer(R"({"problem": {"terminal_1": {"type": "cubic"}}})") == "/problem/terminal_1/type");
    CHECK(parse_error_pointer(R"({"problem": {"u_interval": [0]}})") == "/problem/u_interval");
    CHECK(parse_error_pointer(R"({"problem": {}, "grid": {"nx": 1.5}})") == "/grid/nx");
    CHECK(parse_error_pointer(R"({"problem": {}, "sim": {"seed": -1}})") == "/sim/seed");
    CHECK(parse_error_pointer(R"({"problem": {}, "sim": {"mode": "weak"}})") == "/sim/mode");
    CHECK(parse_error_pointer(R"({"problem": {}, "extra": 1})") == "/extra");
    CHECK(parse_error_pointer(R"({"problem": {}, "smoothing": {"schedule": [8, "x"]}})") == "/smoothing/schedule/1");
    CHECK(parse_error_pointer("{not json") == "/");
    CHECK_THROWS_AS(parse_config_text(R"({"problem": {}, "smoothing": {"schedule": [16, 8]}})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"problem": {}, "grid": {"x_min": 1}})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"problem": {"diffusion": {"type": "elliptic", "amplitude": 1.5}}})"),
                    ValidationError);
}

TEST_CASE("config round trip") {
    const char* text = R"({
      "problem": {
        "horizon": 1.75, "start_x": -0.3,
        "drift": {"type": "sinusoidal", "amplitude": 0.4, "frequency": 2.5, "offset": 0.1},
        "terminal_1": {"type": "sigmoid", "lower": -1, "upper": 2, "steepness": 0.7, "center": 0.2},
        "terminal_2": {"type": "power", "exponent": 1.5, "signed": true},
        "diffusion": {"type": "elliptic", "base": 1.0, "amplitude": 0.25},
        "u_interval": [0, 2], "v_interval": [-0.5, 1.5],
        "transform_h": {"type": "tanh", "amplitude": 2, "rate": 0.3},
        "transform_l": {"type": "affine", "scale": -1, "shift": 0.25},
        "tie_eps1": 0.1
      },
      "grid": {"x_min": -12.5, "x_max": 11, "nx": 301, "nt": 250},
      "smoothing": {"schedule": [4, 9, 20], "tol": "inf"},
      "sim": {"n_paths": 1234, "n_steps": 77, "seed": 18446744073709551615, "mode": "girsanov"},
      "verify": {"deviations_per_player": 12, "slack": 0.01, "isaacs_samples": 500},
      "output_dir": "some/where"
    })";
    const auto config = parse_config_text(text);
    CHECK(config.smoothing.tol == std::numeric_limits<double>::infinity());
    CHECK(config.sim.seed == 18446744073709551615ull);
    CHECK(config.problem.tie_eps1 == 0.1);
    CHECK_FALSE(config.problem.tie_eps2.has_value());
    const auto again = config_from_json(to_json(config));
    CHECK(again == config);
    CHECK(to_json(again).dump() == to_json(config).dump());

    const auto minimal = parse_config_text(R"({"problem": {}})");
    CHECK(config_from_json(to_json(minimal)) == minimal);
}

TEST_CASE("command parsing") {
    CHECK(parse_command("verify") == Command::verify);
    CHECK(parse_command("oracle") == Command::oracle);
    CHECK_FALSE(parse_command("plot").has_value());
}

TEST_CASE("run commands write artifacts") {
    const auto dir = scratch_dir("run");
    RunConfig config = small_config(dir);
    std::ostringstream err;

    CHECK(run(Command::validate, config, err) == 0);
    CHECK(fs::exists(dir / "validation.json"));

    config.problem.terminal_1 = AffineTerminal{0.0, 0.0};
    config.problem.terminal_2 = AffineTerminal{0.0, 0.0};
    CHECK(run(Command::solve, config, err) == 0);
    std::istringstream csv(read_text_file(dir / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        std::istringstream fields(line);
        std::string t, x, eta1, eta2;
        std::getline(fields, t, ',');
        std::getline(fields, x, ',');
        std::getline(fields, eta1, ',');
        std::getline(fields, eta2, ',');
        CHECK(std::stod(eta1) == 0.0);
        CHECK(std::stod(eta2) == 0.0);
    }

    config.problem = base_problem();
    config.smoothing.schedule = {8, 16};
    config.smoothing.tol = std::numeric_limits<double>::infinity();
    CHECK(run(Command::refine, config, err) == 0);
    const auto cauchy = Json::parse(read_text_file(dir / "cauchy.json"));
    CHECK(cauchy["cauchy"]["converged"] == true);
    CHECK(cauchy["cauchy"]["gaps"].size() == 1);

    CHECK(run(Command::simulate, config, err) == 0);
    const auto payoffs = Json::parse(read_text_file(dir / "payoffs.json"));
    CHECK(payoffs["payoffs"][0]["player"] == 1);

    CHECK(run(Command::oracle, config, err) == 0);
    const auto oracles = Json::parse(read_text_file(dir / "oracle.json"));
    CHECK(oracles["linear"]["sup_gap"].get<double>() <= 1e-2);
    CHECK(oracles["quadrature"]["eta_at_start"][0].get<double>() == doctest::Approx(2.0));

    config.problem.terminal_1 = PowerTerminal{2.0, false};
    CHECK(run(Command::oracle, config, err) == 0);
    const auto declined = Json::parse(read_text_file(dir / "oracle.json"));
    CHECK(declined["linear"].contains("declined"));
    CHECK(declined["quadrature"].contains("declined"));
}

TEST_CASE("verify exit codes") {
    const auto dir = scratch_dir("verify");
    RunConfig config = small_config(dir);
    std::ostringstream err;
    CHECK(run(Command::verify, config, err) == 0);
    const auto first = read_text_file(dir / "verdict.json");
    const auto verdict = Json::parse(first);
    CHECK(verdict["pass"] == true);
    CHECK(verdict["deviation"]["violations"] == 0);
    CHECK(run(Command::verify, config, err) == 0);
    CHECK(read_text_file(dir / "verdict.json") == first);

    // An unwritable output location is an infrastructure error.
    write_text_file(dir / "blocker", "x");
    config.output_dir = dir / "blocker" / "sub";
    CHECK(run(Command::verify, config, err) == 2);
    CHECK(run(Command::solve, config, err) == 2);
    CHECK(err.str().find("error:") != std::string::npos);
}

TEST_CASE("command-line front end") {
    const auto dir = scratch_dir("binary");
    const std::string binary = NZSDG_BINARY;
    write_text_file(dir / "config.json", R"({"problem": {}, "grid": {"nx": 81, "nt": 80},
        "sim": {"n_paths": 1000, "n_steps": 20}, "verify": {"deviations_per_player": 3, "isaacs_samples": 100}})");
    write_text_file(dir / "bad.json", R"({"problem": {"horizon": 0}})");
    auto invoke = [&](const std::string& args) {
        const int status = std::system((binary + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    const std::string cfg = (dir / "config.json").string();
    CHECK(invoke("validate --config " + cfg + " --out " + (dir / "a").string()) == 0);
    CHECK(fs::exists(dir / "a" / "validation.json"));
    CHECK(invoke("verify --config " + cfg + " --out " + (dir / "b").string() + " --seed 5 --threads 2") == 0);
    CHECK(Json::parse(read_text_file(dir / "b" / "verdict.json"))["deviation"]["sim"]["seed"] == 5);
    CHECK(invoke("verify --config " + (dir / "bad.json").string()) == 2);
    CHECK(invoke("verify --config " + (dir / "missing.json").string()) == 2);
    CHECK(invoke("dance --config " + cfg) == 2);
    CHECK(invoke("solve") == 2);
}
