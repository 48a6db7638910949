#include "nzsdg/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nzsdg/error.hpp"
#include "nzsdg/rng.hpp"

namespace nzsdg {

ValueSolution linear_oracle(const ProblemSpec& spec, const GridSpec& grid) {
    const auto* g1 = std::get_if<AffineTerminal>(&spec.terminal_1);
    const auto* g2 = std::get_if<AffineTerminal>(&spec.terminal_2);
    const auto* f = std::get_if<ConstantDrift>(&spec.drift_base);
    if (!g1 || !g2) throw OracleDeclined("linear oracle needs affine terminals");
    if (!f) throw OracleDeclined("linear oracle needs a constant drift");
    if (!std::holds_alternative<IdentityDiffusion>(spec.diffusion)) {
        throw OracleDeclined("linear oracle needs unit diffusion");
    }
    if (g1->slope == 0.0 || g2->slope == 0.0) {
        throw OracleDeclined("linear oracle declines zero slopes (tie branch)");
    }
    check_grid(grid, spec);

    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const double rate = f->kappa + select_bang(g1->slope, u_eff, 0.0) + select_bang(g2->slope, v_eff, 0.0);

    ValueSolution sol;
    sol.grid = grid;
    sol.horizon = spec.horizon;
    sol.eta1 = Field(grid.nt + 1, grid.nx);
    sol.eta2 = Field(grid.nt + 1, grid.nx);
    sol.zeta1 = Field(grid.nt + 1, grid.nx, g1->slope);
    sol.zeta2 = Field(grid.nt + 1, grid.nx, g2->slope);
    for (int k = 0; k <= grid.nt; ++k) {
        const double remaining = spec.horizon - sol.t(k);
        for (int j = 0; j < grid.nx; ++j) {
            const double x = grid.x(j);
            sol.eta1(k, j) = g1->slope * x + g1->intercept + g1->slope * rate * remaining;
            sol.eta2(k, j) = g2->slope * x + g2->intercept + g2->slope * rate * remaining;
        }
    }
    return sol;
}

GaussHermiteRule gauss_hermite_rule(int order) {
    if (order < 1) throw DomainError("Gauss-Hermite order must be >= 1");
    // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussHermiteRule rule;
    for (int k = 0; k < order; ++k) {
        rule.nodes.push_back(solver.eigenvalues()(k));
        const double first = solver.eigenvectors()(0, k);
        rule.weights.push_back(first * first);
    }
    return rule;
}

std::pair<double, double> quadrature_oracle(const ProblemSpec& spec, int order) {
    const auto* f = std::get_if<ConstantDrift>(&spec.drift_base);
    if (!f) throw OracleDeclined("quadrature oracle needs a constant drift");
    if (!std::holds_alternative<IdentityDiffusion>(spec.diffusion)) {
        throw OracleDeclined("quadrature oracle needs unit diffusion");
    }
    if (!is_nondecreasing(spec.terminal_1) || !is_nondecreasing(spec.terminal_2)) {
        throw OracleDeclined("quadrature oracle needs nondecreasing terminals");
    }
    // A constant terminal leaves that player's gradient at zero, so the tie
    // value, not the upper endpoint, would be selected.
    if (is_constant(spec.terminal_1) || is_constant(spec.terminal_2)) {
        throw OracleDeclined("quadrature oracle needs non-constant terminals");
    }
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const double centre = spec.start_x + (f->kappa + u_eff.hi + v_eff.hi) * spec.horizon;
    const double scale = std::sqrt(spec.horizon);
    const auto rule = gauss_hermite_rule(order);
    double j1 = 0.0, j2 = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = centre + scale * rule.nodes[k];
        j1 += rule.weights[k] * terminal_value(spec.terminal_1, x);
        j2 += rule.weights[k] * terminal_value(spec.terminal_2, x);
    }
    return {j1, j2};
}

IsaacsReport isaacs_sweep(const ProblemSpec& spec, std::int64_t n_samples, std::uint64_t seed, double tolerance) {
    if (n_samples < 1) throw DomainError("Isaacs sweep needs n_samples >= 1");
    const TiePolicy tie = default_tie(spec);
    StreamEngine rng(seed, 0);
    IsaacsReport report;
    report.samples = n_samples;
    report.tolerance = tolerance;
    report.min_gap1 = std::numeric_limits<double>::infinity();
    report.min_gap2 = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double t = rng.uniform(0.0, spec.horizon);
        const double x = rng.uniform(-5.0, 5.0);
        const double p = rng.uniform(-10.0, 10.0);
        const double q = rng.uniform(-10.0, 10.0);
        const double u = transform_value(spec.transform_h, rng.uniform(spec.u_interval.lo, spec.u_interval.hi));
        const double v = transform_value(spec.transform_l, rng.uniform(spec.v_interval.lo, spec.v_interval.hi));
        const auto [gap1, gap2] = isaacs_gap(spec, t, x, p, q, u, v, tie);
        report.min_gap1 = std::min(report.min_gap1, gap1);
        report.min_gap2 = std::min(report.min_gap2, gap2);
        if (gap1 < -tolerance || gap2 < -tolerance) ++report.violations;
    }
    report.ok = report.violations == 0;
    return report;
}

SmoothingLimitReport smoothing_limit_suite(std::uint64_t seed, std::int64_t n_samples, const ProblemSpec& spec) {
    const TiePolicy tie = default_tie(spec);
    StreamEngine rng(seed, 1);
    SmoothingLimitReport report;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        double grad = rng.uniform(-10.0, 10.0);
        if (grad == 0.0) grad = 1.0;
        // Spread |grad| over several decades so both branches get exercised.
        grad *= std::pow(10.0, -rng.uniform(0.0, 3.0));
        const SmoothingLevel level(1 + static_cast<int>(rng.uniform() * 2000.0));
        if (level.value() > 1.0 / std::abs(grad)) {
            for (int player : {1, 2}) {
                ++report.equality_checks;
                if (smoothed_selector(player, grad, level, spec) != bang_selector(player, grad, tie, spec)) {
                    ++report.equality_failures;
                }
            }
        } else {
            ++report.exempt;
        }
        const double x = rng.uniform(-50.0, 50.0);
        const double truncated = truncate(x, level);
        ++report.truncation_checks;
        if (std::abs(truncated) > std::min(std::abs(x), level.value())) ++report.truncation_failures;
    }
    report.ok = report.equality_failures == 0 && report.truncation_failures == 0;
    return report;
}

GapEstimate paired_payoff_gap(const ProblemSpec& spec, int player, const std::vector<double>& star_terminal,
                              const std::vector<double>& deviation_terminal) {
    if (star_terminal.size() != deviation_terminal.size()) throw DomainError("paired samples differ in size");
    const auto& g = player == 1 ? spec.terminal_1 : spec.terminal_2;
    std::vector<double> diff(star_terminal.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = terminal_value(g, deviation_terminal[i]) - terminal_value(g, star_terminal[i]);
    }
    const auto stats = sample_mean(diff);
    return {stats.mean, stats.std_err};
}

VerdictReport nash_deviation_suite(const ProblemSpec& spec, std::shared_ptr<const ValueSolution> solution,
                                   const TiePolicy& tie, int deviations_per_player, const SimConfig& config,
                                   double slack, std::string case_name, double z) {
    SimConfig strong = config;
    strong.mode = SimMode::strong;
    const auto [u_star, v_star] = bang_bang_pair(solution, spec, tie);
    const auto star_terminal = simulate_terminal_states(spec, u_star, v_star, strong);

    VerdictReport report;
    report.case_name = std::move(case_name);
    std::tie(report.star1, report.star2) = simulate_payoffs(spec, u_star, v_star, strong);
    report.z = z;
    report.slack = slack;
    report.deviations_per_player = deviations_per_player;
    report.sim = strong;
    report.family_composition =
        "per player: constant(lower), constant(upper), constant(midpoint), then alternating random "
        "rectangular overrides of the equilibrium strategy and random 5x9 tables; values drawn half from "
        "the interval endpoints, half uniformly";

    for (int player : {1, 2}) {
        const FeedbackStrategy& star = player == 1 ? u_star : v_star;
        const auto family = deviation_family(star, deviations_per_player, config.seed, spec);
        // Batches share each path's increments; the size bounds memory.
        constexpr std::size_t batch = 16;
        for (std::size_t first = 0; first < family.size(); first += batch) {
            const std::size_t last = std::min(family.size(), first + batch);
            std::vector<StrategyPair> pairs;
            for (std::size_t d = first; d < last; ++d) {
                pairs.push_back(player == 1 ? StrategyPair{&family[d], &v_star} : StrategyPair{&u_star, &family[d]});
            }
            const auto terminals = simulate_terminal_states(spec, pairs, strong);
            for (std::size_t d = first; d < last; ++d) {
                const auto gap = paired_payoff_gap(spec, player, star_terminal, terminals[d - first]);
                DeviationRecord record;
                record.player = player;
                record.description = family[d].describe();
                record.gap = gap.mean;
                record.std_err = gap.std_err;
                record.threshold = z * gap.std_err + slack;
                record.violates = gap.mean > record.threshold;
                report.records.push_back(std::move(record));
            }
        }
    }
    report.pass = std::none_of(report.records.begin(), report.records.end(),
                               [](const DeviationRecord& r) { return r.violates; });
    return report;
}

}  // namespace nzsdg
