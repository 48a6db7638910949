#include "nzsdg/run.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>

#include "nzsdg/error.hpp"
#include "nzsdg/io.hpp"
#include "nzsdg/report.hpp"
#include "nzsdg/verify.hpp"

namespace nzsdg {

namespace {

void write_json(const RunConfig& config, const char* name, const Json& value) {
    write_text_file(config.output_dir / name, dump_json(value));
}

void write_csv(const RunConfig& config, const char* name, const ValueSolution& solution, const TiePolicy& tie) {
    std::ostringstream out;
    write_solution_csv(out, solution, config.problem, tie);
    write_text_file(config.output_dir / name, out.str());
}

Json tie_json(const TiePolicy& tie) { return Json{{"eps1", tie.eps1}, {"eps2", tie.eps2}}; }

Json initial_values(const ValueSolution& solution, double x0) {
    return Json::array({solution.value_at(1, 0.0, x0), solution.value_at(2, 0.0, x0)});
}

int do_validate(const RunConfig& config) {
    write_json(config, "validation.json",
               Json{{"report", validate_spec(config.problem)}, {"config", to_json(config)}});
    return 0;
}

int do_solve(const RunConfig& config) {
    const TiePolicy tie = default_tie(config.problem);
    const auto solution = solve_limit(config.problem, config.grid, tie);
    write_csv(config, "solution.csv", solution, tie);
    write_json(config, "diagnostics.json",
               Json{{"mode", "limit"},
                    {"tie", tie_json(tie)},
                    {"eta_at_start", initial_values(solution, config.problem.start_x)},
                    {"diagnostics", solution.diagnostics}});
    return 0;
}

int do_refine(const RunConfig& config) {
    const auto [solution, report] =
        refine_in_n(config.problem, config.grid, config.smoothing.schedule, config.smoothing.tol);
    write_csv(config, "refined.csv", solution, default_tie(config.problem));
    Json out{{"cauchy", report},
             {"eta_at_start", initial_values(solution, config.problem.start_x)},
             {"diagnostics", solution.diagnostics}};
    out["tol"] = std::isinf(config.smoothing.tol) ? Json("inf") : Json(config.smoothing.tol);
    write_json(config, "cauchy.json", out);
    return 0;
}

int do_simulate(const RunConfig& config) {
    const TiePolicy tie = default_tie(config.problem);
    auto solution = std::make_shared<const ValueSolution>(solve_limit(config.problem, config.grid, tie));
    const auto [u, v] = bang_bang_pair(solution, config.problem, tie);
    const auto [j1, j2] = estimate_payoffs(config.problem, u, v, config.sim);
    write_json(config, "payoffs.json",
               Json{{"sim", config.sim},
                    {"payoffs", Json::array({j1, j2})},
                    {"eta_at_start", initial_values(*solution, config.problem.start_x)}});
    return 0;
}

int do_verify(const RunConfig& config) {
    const TiePolicy tie = default_tie(config.problem);
    auto solution = std::make_shared<const ValueSolution>(solve_limit(config.problem, config.grid, tie));
    const auto consistency = y0_consistency(config.problem, solution, tie, config.sim);
    const auto verdict = nash_deviation_suite(config.problem, solution, tie, config.verify.deviations_per_player,
                                              config.sim, config.verify.slack, "config");
    const auto isaacs = isaacs_sweep(config.problem, config.verify.isaacs_samples, config.sim.seed);
    const bool pass = consistency.ok && verdict.pass && isaacs.ok;
    write_json(config, "verdict.json",
               Json{{"pass", pass},
                    {"tie", tie_json(tie)},
                    {"consistency", consistency},
                    {"deviation", verdict},
                    {"isaacs", isaacs},
                    {"solver", solution->diagnostics}});
    return pass ? 0 : 1;
}

int do_oracle(const RunConfig& config) {
    const TiePolicy tie = default_tie(config.problem);
    const auto solution = solve_limit(config.problem, config.grid, tie);
    const double x0 = config.problem.start_x;
    Json out{{"solver_eta_at_start", initial_values(solution, x0)}};
    try {
        const auto exact = linear_oracle(config.problem, config.grid);
        out["linear"] = Json{{"eta_at_start", initial_values(exact, x0)}, {"sup_gap", sup_gap(solution, exact)}};
    } catch (const OracleDeclined& e) {
        out["linear"] = Json{{"declined", e.what()}};
    }
    try {
        const auto [j1, j2] = quadrature_oracle(config.problem);
        out["quadrature"] = Json{{"eta_at_start", Json::array({j1, j2})},
                                 {"abs_error", Json::array({std::abs(solution.value_at(1, 0.0, x0) - j1),
                                                            std::abs(solution.value_at(2, 0.0, x0) - j2)})}};
    } catch (const OracleDeclined& e) {
        out["quadrature"] = Json{{"declined", e.what()}};
    }
    write_json(config, "oracle.json", out);
    return 0;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "validate") return Command::validate;
    if (name == "solve") return Command::solve;
    if (name == "refine") return Command::refine;
    if (name == "simulate") return Command::simulate;
    if (name == "verify") return Command::verify;
    if (name == "oracle") return Command::oracle;
    return std::nullopt;
}

int run(Command command, const RunConfig& config, std::ostream& err) {
    try {
        switch (command) {
            case Command::validate: return do_validate(config);
            case Command::solve: return do_solve(config);
            case Command::refine: return do_refine(config);
            case Command::simulate: return do_simulate(config);
            case Command::verify: return do_verify(config);
            case Command::oracle: return do_oracle(config);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace nzsdg
