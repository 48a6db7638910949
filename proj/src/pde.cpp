#include "nzsdg/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "nzsdg/error.hpp"
#include "nzsdg/io.hpp"

namespace nzsdg {

GridSpec default_grid(const ProblemSpec& spec) {
    const double half_width = 8.0 * std::sqrt(spec.horizon) * diffusion_sup(spec);
    GridSpec grid;
    grid.x_min = spec.start_x - half_width;
    grid.x_max = spec.start_x + half_width;
    return grid;
}

void check_grid(const GridSpec& grid, const ProblemSpec& spec) {
    if (grid.nx < 3) throw DomainError("grid needs nx >= 3 spatial nodes");
    if (grid.nt < 1) throw DomainError("grid needs nt >= 1 time steps");
    if (!(grid.x_min < spec.start_x && spec.start_x < grid.x_max)) {
        throw DomainError("grid must satisfy x_min < start_x < x_max");
    }
}

double ValueSolution::value_at(int player, double time, double x) const {
    const auto row = eta(player).row(nearest_time(time));
    const double position = std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.nx - 1));
    const int left = std::min(static_cast<int>(position), grid.nx - 2);
    const double weight = position - left;
    if (weight == 0.0) return row[left];
    return (1.0 - weight) * row[left] + weight * row[left + 1];
}

std::vector<double> gradient_slice(std::span<const double> values, const GridSpec& grid, const ProblemSpec& spec,
                                   double t) {
    const int nx = grid.nx;
    const double inv_2dx = 1.0 / (2.0 * grid.dx());
    std::vector<double> out(nx);
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv_2dx;
    out[nx - 1] = (3.0 * values[nx - 1] - 4.0 * values[nx - 2] + values[nx - 3]) * inv_2dx;
    for (int j = 1; j < nx - 1; ++j) out[j] = (values[j + 1] - values[j - 1]) * inv_2dx;
    for (int j = 0; j < nx; ++j) out[j] *= diffusion_value(spec, t, grid.x(j));
    return out;
}

Field gradient_field(const Field& values, const GridSpec& grid, const ProblemSpec& spec, double horizon) {
    Field out(values.rows(), values.cols());
    for (int k = 0; k < values.rows(); ++k) {
        const auto slice = gradient_slice(values.row(k), grid, spec, horizon * k / grid.nt);
        std::copy(slice.begin(), slice.end(), out.row(k).begin());
    }
    return out;
}

namespace {

struct SourceRule {
    std::optional<double> level;  // smoothing level n; empty = bang-bang limit
    TiePolicy tie;
};

// Solves a_j y_{j-1} + b_j y_j + c_j y_{j+1} = d_j in place (Thomas algorithm).
void solve_tridiagonal(std::span<const double> lower, std::span<double> diag, std::span<const double> upper,
                       std::span<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t j = 1; j < n; ++j) {
        const double m = lower[j] / diag[j - 1];
        diag[j] -= m * upper[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

int sign_of(double value) { return (value > 0.0) - (value < 0.0); }

ValueSolution solve_backward(const ProblemSpec& spec, const GridSpec& grid, const SourceRule& rule) {
    check_grid(grid, spec);
    const int nx = grid.nx;
    const int nt = grid.nt;
    const double dx = grid.dx();
    const double dt = spec.horizon / nt;
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const TiePolicy own_tie = rule.level ? default_tie(spec) : rule.tie;

    ValueSolution sol;
    sol.grid = grid;
    sol.horizon = spec.horizon;
    sol.smoothing = rule.level ? std::optional<int>(static_cast<int>(*rule.level)) : std::nullopt;
    sol.eta1 = Field(nt + 1, nx);
    sol.eta2 = Field(nt + 1, nx);

    std::vector<double> xs(nx);
    for (int j = 0; j < nx; ++j) xs[j] = grid.x(j);
    for (int j = 0; j < nx; ++j) {
        sol.eta1(nt, j) = terminal_value(spec.terminal_1, xs[j]);
        sol.eta2(nt, j) = terminal_value(spec.terminal_2, xs[j]);
    }

    std::vector<double> w1(nx), w2(nx), source1(nx), source2(nx);
    std::vector<double> lower(nx - 2), diag(nx - 2), upper(nx - 2), rhs(nx - 2), r(nx);
    std::vector<int> last_sign1(nx), last_sign2(nx), flips(nx, 0);
    auto& diag_out = sol.diagnostics;

    auto central = [&](std::span<const double> eta, std::vector<double>& out) {
        out[0] = (-3.0 * eta[0] + 4.0 * eta[1] - eta[2]) / (2.0 * dx);
        out[nx - 1] = (3.0 * eta[nx - 1] - 4.0 * eta[nx - 2] + eta[nx - 3]) / (2.0 * dx);
        for (int j = 1; j < nx - 1; ++j) out[j] = (eta[j + 1] - eta[j - 1]) / (2.0 * dx);
    };
    // One-sided difference in the direction the drift carries information from.
    auto upwind = [&](std::span<const double> eta, int j, double drift, double centered) {
        if (j == 0) return (eta[1] - eta[0]) / dx;
        if (j == nx - 1) return (eta[nx - 1] - eta[nx - 2]) / dx;
        if (drift > 0.0) return (eta[j + 1] - eta[j]) / dx;
        if (drift < 0.0) return (eta[j] - eta[j - 1]) / dx;
        return centered;
    };

    for (int k = nt - 1; k >= 0; --k) {
        const double t_next = spec.horizon * (k + 1) / nt;
        const double t_now = spec.horizon * k / nt;
        const auto next1 = sol.eta1.row(k + 1);
        const auto next2 = sol.eta2.row(k + 1);
        central(next1, w1);
        central(next2, w2);

        for (int j = 0; j < nx; ++j) {
            const double f = drift_base_value(spec, t_next, xs[j]);
            if (!rule.level) {
                const double u = select_bang(w1[j], u_eff, rule.tie.eps1);
                const double v = select_bang(w2[j], v_eff, rule.tie.eps2);
                const double b = f + u + v;
                source1[j] = upwind(next1, j, b, w1[j]) * b;
                source2[j] = upwind(next2, j, b, w2[j]) * b;
                diag_out.max_courant = std::max(diag_out.max_courant, std::abs(b) * dt / dx);
                continue;
            }
            const double n = *rule.level;
            const double ft = truncate(f, n);
            // Each player's own control maximizes; the opponent's is ramped.
            const double u1 = select_bang(w1[j], u_eff, own_tie.eps1);
            const double v1 = ramp_player2(w2[j], v_eff, n);
            const double b1 = f + u1 + v1;
            const double g1 = upwind(next1, j, b1, w1[j]);
            source1[j] = truncate(g1, n) * ft + truncate(g1 * u1, n) + truncate(g1, n) * v1;

            const double v2 = select_bang(w2[j], v_eff, own_tie.eps2);
            const double u2 = ramp_player1(w1[j], u_eff, n);
            const double b2 = f + u2 + v2;
            const double g2 = upwind(next2, j, b2, w2[j]);
            source2[j] = truncate(g2, n) * ft + truncate(g2 * v2, n) + truncate(g2, n) * u2;
            diag_out.max_courant = std::max(diag_out.max_courant, std::max(std::abs(b1), std::abs(b2)) * dt / dx);
        }

        if (!rule.level) {
            for (int j = 0; j < nx; ++j) {
                const int s1 = sign_of(w1[j]);
                const int s2 = sign_of(w2[j]);
                if (k < nt - 1 && ((s1 * last_sign1[j] < 0) || (s2 * last_sign2[j] < 0))) ++flips[j];
                if (s1 != 0) last_sign1[j] = s1;
                if (s2 != 0) last_sign2[j] = s2;
            }
        }

        for (int j = 0; j < nx; ++j) {
            const double sigma = diffusion_value(spec, t_now, xs[j]);
            r[j] = 0.5 * sigma * sigma * dt / (dx * dx);
        }

        for (int player = 1; player <= 2; ++player) {
            Field& eta = player == 1 ? sol.eta1 : sol.eta2;
            const auto& source = player == 1 ? source1 : source2;
            const auto next = eta.row(k + 1);
            auto now = eta.row(k);

            now[0] = next[0] + dt * source[0];
            now[nx - 1] = next[nx - 1] + dt * source[nx - 1];
            for (int j = 1; j < nx - 1; ++j) {
                const int i = j - 1;
                lower[i] = -r[j];
                upper[i] = -r[j];
                diag[i] = 1.0 + 2.0 * r[j];
                rhs[i] = dt * source[j] + r[j] * (next[j + 1] - 2.0 * next[j] + next[j - 1]);
            }
            // Solving for the increment keeps flat data flat bit for bit.
            rhs.front() += r[1] * (now[0] - next[0]);
            rhs.back() += r[nx - 2] * (now[nx - 1] - next[nx - 1]);
            solve_tridiagonal(lower, diag, upper, rhs);
            for (int j = 1; j < nx - 1; ++j) now[j] = next[j] + rhs[j - 1];

            for (int j = 0; j < nx; ++j) {
                if (!std::isfinite(now[j])) {
                    throw InstabilityError("non-finite value function at time step " + std::to_string(k) +
                                               " (player " + std::to_string(player) + ")",
                                           k);
                }
            }
            for (int j = 1; j < nx - 1; ++j) {
                const double lhs = now[j] - r[j] * (now[j + 1] - 2.0 * now[j] + now[j - 1]);
                const double residual = std::abs(lhs - next[j] - dt * source[j]) / dt;
                diag_out.max_residual = std::max(diag_out.max_residual, residual);
            }
        }
    }

    sol.zeta1 = gradient_field(sol.eta1, grid, spec, spec.horizon);
    sol.zeta2 = gradient_field(sol.eta2, grid, spec, spec.horizon);

    if (!rule.level) {
        diag_out.max_sign_flips = *std::max_element(flips.begin(), flips.end());
        diag_out.chatter_warning = diag_out.max_sign_flips > std::max(10, nt / 10);
    }
    const auto growth = validate_spec(spec).terminal_growth;
    diag_out.growth = growth_diagnostic(sol, growth.exponent, growth.constant);
    return sol;
}

}  // namespace

ValueSolution solve_smoothed(const ProblemSpec& spec, const GridSpec& grid, SmoothingLevel n) {
    return solve_backward(spec, grid, SourceRule{n.value(), {}});
}

ValueSolution solve_limit(const ProblemSpec& spec, const GridSpec& grid, const TiePolicy& tie) {
    return solve_backward(spec, grid, SourceRule{std::nullopt, tie});
}

double sup_gap(const ValueSolution& a, const ValueSolution& b) {
    if (!(a.grid == b.grid)) throw DomainError("sup_gap needs solutions on the same grid");
    double gap = 0.0;
    for (int player = 1; player <= 2; ++player) {
        const auto& lhs = a.eta(player).data();
        const auto& rhs = b.eta(player).data();
        for (std::size_t i = 0; i < lhs.size(); ++i) gap = std::max(gap, std::abs(lhs[i] - rhs[i]));
    }
    return gap;
}

std::pair<ValueSolution, CauchyReport> refine_in_n(const ProblemSpec& spec, const GridSpec& grid,
                                                   const std::vector<int>& schedule, double tol) {
    if (schedule.empty()) throw DomainError("refinement schedule is empty");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] <= schedule[i - 1]) throw DomainError("refinement schedule must be strictly increasing");
    }

    CauchyReport report;
    ValueSolution previous = solve_smoothed(spec, grid, SmoothingLevel(schedule.front()));
    report.levels.push_back(schedule.front());
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        ValueSolution current = solve_smoothed(spec, grid, SmoothingLevel(schedule[i]));
        report.levels.push_back(schedule[i]);
        report.gaps.push_back(sup_gap(previous, current));
        previous = std::move(current);
        if (report.gaps.back() <= tol) {
            report.converged = true;
            break;
        }
    }
    report.final_level = report.levels.back();
    return {std::move(previous), std::move(report)};
}

GrowthReport growth_diagnostic(const ValueSolution& solution, double lambda, double bound) {
    GrowthReport report;
    report.lambda = lambda;
    report.bound = bound;
    for (int player = 1; player <= 2; ++player) {
        const Field& eta = solution.eta(player);
        for (int k = 0; k < eta.rows(); ++k) {
            for (int j = 0; j < eta.cols(); ++j) {
                const double weight = 1.0 + std::pow(std::abs(solution.grid.x(j)), lambda);
                report.max_ratio = std::max(report.max_ratio, std::abs(eta(k, j)) / weight);
            }
        }
    }
    report.within = report.max_ratio <= bound;
    return report;
}

void write_solution_csv(std::ostream& out, const ValueSolution& solution, const ProblemSpec& spec,
                        const TiePolicy& tie) {
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    out << "t,x,eta1,eta2,zeta1,zeta2,ustar,vstar\n";
    for (int k = 0; k <= solution.grid.nt; ++k) {
        const std::string t = format_real(solution.t(k));
        for (int j = 0; j < solution.grid.nx; ++j) {
            const double z1 = solution.zeta1(k, j);
            const double z2 = solution.zeta2(k, j);
            out << t << ',' << format_real(solution.grid.x(j)) << ',' << format_real(solution.eta1(k, j)) << ','
                << format_real(solution.eta2(k, j)) << ',' << format_real(z1) << ',' << format_real(z2) << ','
                << format_real(select_bang(z1, u_eff, tie.eps1)) << ','
                << format_real(select_bang(z2, v_eff, tie.eps2)) << '\n';
        }
    }
}

}  // namespace nzsdg
