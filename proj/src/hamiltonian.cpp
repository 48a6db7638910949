#include "nzsdg/hamiltonian.hpp"

#include <algorithm>

#include "nzsdg/error.hpp"

namespace nzsdg {

SmoothingLevel::SmoothingLevel(int n) : n_(n) {
    if (n < 1) throw DomainError("smoothing level must be >= 1");
}

namespace {

double default_tie_value(const Interval& bounds) { return bounds.contains(0.0) ? 0.0 : bounds.midpoint(); }

void check_player(int player) {
    if (player != 1 && player != 2) throw DomainError("player must be 1 or 2");
}

}  // namespace

TiePolicy default_tie(const ProblemSpec& spec) {
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    return {spec.tie_eps1.value_or(default_tie_value(u_eff)), spec.tie_eps2.value_or(default_tie_value(v_eff))};
}

double select_bang(double grad, const Interval& bounds, double tie) {
    if (grad > 0.0) return bounds.hi;
    if (grad < 0.0) return bounds.lo;
    return tie;
}

double ramp_player1(double grad, const Interval& bounds, double n) {
    if (grad >= 0.0) return bounds.hi;
    if (grad <= -1.0 / n) return bounds.lo;
    return bounds.lo + bounds.width() * (n * grad + 1.0);
}

double ramp_player2(double grad, const Interval& bounds, double n) {
    if (grad >= 1.0 / n) return bounds.hi;
    if (grad <= -1.0 / n) return bounds.lo;
    return bounds.lo + bounds.width() * 0.5 * (n * grad + 1.0);
}

double bang_selector(int player, double grad, const TiePolicy& tie, const ProblemSpec& spec) {
    check_player(player);
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    return player == 1 ? select_bang(grad, u_eff, tie.eps1) : select_bang(grad, v_eff, tie.eps2);
}

double smoothed_selector(int player, double grad, SmoothingLevel n, const ProblemSpec& spec) {
    check_player(player);
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    return player == 1 ? ramp_player1(grad, u_eff, n.value()) : ramp_player2(grad, v_eff, n.value());
}

double truncate(double x, double n) { return std::min(std::max(x, -n), n); }

double truncate(double x, SmoothingLevel n) { return truncate(x, n.value()); }

double hamiltonian(const ProblemSpec& spec, int player, double t, double x, double z, double u, double v) {
    check_player(player);
    return z / diffusion_value(spec, t, x) * effective_drift(spec, t, x, u, v);
}

double hamiltonian_star(const ProblemSpec& spec, int player, double t, double x, double z1, double z2,
                        const TiePolicy& tie) {
    check_player(player);
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    // sigma > 0, so selecting on z or on z / sigma is the same thing
    const double u = select_bang(z1, u_eff, tie.eps1);
    const double v = select_bang(z2, v_eff, tie.eps2);
    return hamiltonian(spec, player, t, x, player == 1 ? z1 : z2, u, v);
}

double hamiltonian_smoothed(const ProblemSpec& spec, int player, double t, double x, double z1, double z2,
                            SmoothingLevel level) {
    check_player(player);
    const double n = level.value();
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const double inv_sigma = 1.0 / diffusion_value(spec, t, x);
    const double w1 = z1 * inv_sigma;
    const double w2 = z2 * inv_sigma;
    const double f = truncate(drift_base_value(spec, t, x), n);

    if (player == 1) {
        const double own = std::max(w1 * u_eff.lo, w1 * u_eff.hi);  // sup over h(U) of w1 u
        return truncate(w1, n) * f + truncate(own, n) + truncate(w1, n) * ramp_player2(w2, v_eff, n);
    }
    const double own = std::max(w2 * v_eff.lo, w2 * v_eff.hi);
    return truncate(w2, n) * f + truncate(own, n) + truncate(w2, n) * ramp_player1(w1, u_eff, n);
}

std::pair<double, double> isaacs_gap(const ProblemSpec& spec, double t, double x, double p, double q, double u,
                                     double v, const TiePolicy& tie) {
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const double u_bar = select_bang(p, u_eff, tie.eps1);
    const double v_bar = select_bang(q, v_eff, tie.eps2);
    const double gap1 = hamiltonian_star(spec, 1, t, x, p, q, tie) - hamiltonian(spec, 1, t, x, p, u, v_bar);
    const double gap2 = hamiltonian_star(spec, 2, t, x, p, q, tie) - hamiltonian(spec, 2, t, x, q, u_bar, v);
    return {gap1, gap2};
}

}  // namespace nzsdg
