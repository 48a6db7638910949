#pragma once

// Backward solver for the coupled pair of semilinear parabolic equations
//
//   d_t eta_i + 1/2 sigma^2 d_xx eta_i + H_i(t, x, sigma d_x eta_1, sigma d_x eta_2) = 0,
//   eta_i(T, .) = g_i,
//
// whose solutions represent the value processes Y^i = eta_i(t, X_t) and
// Z^i = zeta_i(t, X_t) = sigma d_x eta_i(t, X_t). H_i is either the truncated
// smoothed Hamiltonian of level n or the discontinuous bang-bang one.
//
// Scheme: implicit diffusion (one tridiagonal solve per player and step),
// explicit Hamiltonian source evaluated on the later time level, first
// differences upwinded by the sign of the frozen effective drift. Boundary
// nodes drop the second difference (linear extrapolation).

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nzsdg/hamiltonian.hpp"
#include "nzsdg/model.hpp"

namespace nzsdg {

enum class BoundaryPolicy { linear_extrapolation };

struct GridSpec {
    double x_min = -8.0;
    double x_max = 8.0;
    int nx = 401;  // spatial nodes
    int nt = 400;  // time steps
    BoundaryPolicy boundary = BoundaryPolicy::linear_extrapolation;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double x(int j) const { return x_min + (x_max - x_min) * j / (nx - 1); }

    bool operator==(const GridSpec&) const = default;
};

// [x0 - 8 sqrt(T) sigma_max, x0 + 8 sqrt(T) sigma_max], 401 nodes, 400 steps.
GridSpec default_grid(const ProblemSpec& spec);

// Throws DomainError for nx < 3, nt < 1, or x0 outside (x_min, x_max).
void check_grid(const GridSpec& grid, const ProblemSpec& spec);

// Row-major (nt + 1) x nx field; row k is time k * T / nt.
class Field {
public:
    Field() = default;
    Field(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int k, int j) { return data_[static_cast<std::size_t>(k) * cols_ + j]; }
    double operator()(int k, int j) const { return data_[static_cast<std::size_t>(k) * cols_ + j]; }

    std::span<double> row(int k) { return {data_.data() + static_cast<std::size_t>(k) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int k) const {
        return {data_.data() + static_cast<std::size_t>(k) * cols_, static_cast<std::size_t>(cols_)};
    }
    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Field&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct GrowthReport {
    double lambda = 1.0;
    double bound = 0.0;
    double max_ratio = 0.0;  // max over grid and players of |eta| / (1 + |x|^lambda)
    bool within = true;      // max_ratio <= bound
};

struct SolveDiagnostics {
    double max_residual = 0.0;  // algebraic residual of the implicit steps
    double max_courant = 0.0;   // max |drift| dt / dx of the explicit advection
    int max_sign_flips = 0;     // limit mode: most step-to-step gradient sign changes at one node
    bool chatter_warning = false;
    GrowthReport growth;
};

struct ValueSolution {
    GridSpec grid;
    double horizon = 1.0;
    Field eta1, eta2;
    Field zeta1, zeta2;
    std::optional<int> smoothing;  // level n, or empty for the bang-bang limit
    SolveDiagnostics diagnostics;

    double dt() const { return horizon / grid.nt; }
    double t(int k) const { return horizon * k / grid.nt; }
    const Field& eta(int player) const { return player == 1 ? eta1 : eta2; }
    const Field& zeta(int player) const { return player == 1 ? zeta1 : zeta2; }

    // Round-half-up after clamping; inlined because simulation calls these per step.
    int nearest_time(double time) const {
        const double k = std::clamp(time / horizon * grid.nt, 0.0, static_cast<double>(grid.nt));
        return static_cast<int>(k + 0.5);
    }
    int nearest_node(double x) const {
        const double j = std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.nx - 1));
        return static_cast<int>(j + 0.5);
    }
    // Nearest time level, linear interpolation in x (clamped to the grid).
    double value_at(int player, double time, double x) const;
};

struct CauchyReport {
    std::vector<int> levels;
    std::vector<double> gaps;  // gaps[k] = sup gap between levels[k] and levels[k + 1]
    bool converged = false;
    int final_level = 0;
};

ValueSolution solve_smoothed(const ProblemSpec& spec, const GridSpec& grid, SmoothingLevel n);
ValueSolution solve_limit(const ProblemSpec& spec, const GridSpec& grid, const TiePolicy& tie);

// Solves each level of `schedule` (strictly increasing) until the sup gap
// between consecutive levels drops to `tol`. Returns the last solution.
std::pair<ValueSolution, CauchyReport> refine_in_n(const ProblemSpec& spec, const GridSpec& grid,
                                                   const std::vector<int>& schedule, double tol);

// Central differences inside, second-order one-sided at the ends, times sigma(t, x).
std::vector<double> gradient_slice(std::span<const double> values, const GridSpec& grid, const ProblemSpec& spec,
                                   double t);
Field gradient_field(const Field& values, const GridSpec& grid, const ProblemSpec& spec, double horizon);

GrowthReport growth_diagnostic(const ValueSolution& solution, double lambda, double bound);

// max over players and all grid nodes of |a.eta_i - b.eta_i|; grids must match.
double sup_gap(const ValueSolution& a, const ValueSolution& b);

// Header t,x,eta1,eta2,zeta1,zeta2,ustar,vstar; rows by time then space.
void write_solution_csv(std::ostream& out, const ValueSolution& solution, const ProblemSpec& spec,
                        const TiePolicy& tie);

}  // namespace nzsdg
