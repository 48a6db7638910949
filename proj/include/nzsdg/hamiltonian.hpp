#pragma once

// Bang-bang selectors, their Lipschitz ramps, the truncation map and the
// Hamiltonians built from them. All control values here are effective
// controls, i.e. points of h(U) and l(V).
//
// Gradient arguments named z are "Z-type" values (sigma times the spatial
// derivative of a value function). Hamiltonians divide them by sigma(t,x)
// before use; for unit diffusion this is the identity.

#include <utility>

#include "nzsdg/model.hpp"

namespace nzsdg {

struct TiePolicy {
    double eps1 = 0.0;  // player 1 control at zero gradient
    double eps2 = 0.0;  // player 2 control at zero gradient

    bool operator==(const TiePolicy&) const = default;
};

class SmoothingLevel {
public:
    // Throws DomainError when n < 1.
    explicit SmoothingLevel(int n);

    int n() const noexcept { return n_; }
    double value() const noexcept { return static_cast<double>(n_); }

private:
    int n_;
};

// 0 when the effective interval contains it, midpoint otherwise; explicit
// values in the spec take precedence.
TiePolicy default_tie(const ProblemSpec& spec);

// Interval-level primitives, used on hot paths where the effective
// intervals are already known.
double select_bang(double grad, const Interval& bounds, double tie);
double ramp_player1(double grad, const Interval& bounds, double n);
double ramp_player2(double grad, const Interval& bounds, double n);

// grad > 0 -> upper end, grad < 0 -> lower end, grad == 0 -> tie value.
double bang_selector(int player, double grad, const TiePolicy& tie, const ProblemSpec& spec);

// Player 1 ramps on (-1/n, 0), player 2 on (-1/n, 1/n).
double smoothed_selector(int player, double grad, SmoothingLevel n, const ProblemSpec& spec);

// (x ^ n) v (-n)
double truncate(double x, SmoothingLevel n);
double truncate(double x, double n);

// z sigma^{-1}(t,x) (f(t,x) + u + v), u and v effective controls.
double hamiltonian(const ProblemSpec& spec, int player, double t, double x, double z, double u, double v);

// Hamiltonian at the bang-bang pair (u(z1), v(z2)).
double hamiltonian_star(const ProblemSpec& spec, int player, double t, double x, double z1, double z2,
                        const TiePolicy& tie);

// Truncated Hamiltonian of the approximating system at level n.
double hamiltonian_smoothed(const ProblemSpec& spec, int player, double t, double x, double z1, double z2,
                            SmoothingLevel n);

// (H_1^*(p,q) - H_1(p, u, v(q)),  H_2^*(p,q) - H_2(q, u(p), v)), u and v
// effective controls. Both components are nonnegative.
std::pair<double, double> isaacs_gap(const ProblemSpec& spec, double t, double x, double p, double q, double u,
                                     double v, const TiePolicy& tie);

}  // namespace nzsdg
