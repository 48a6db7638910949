#pragma once

// Independent reference values used by the tests. Nothing here calls into
// the library: closed-form Gaussian integrals and brute-force maximization.

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// E[max(Z - K, 0)], Z ~ N(m, s^2).
inline double ramp_expectation(double m, double s, double strike) {
    const double d = (m - strike) / s;
    return (m - strike) * normal_cdf(d) + s * normal_pdf(d);
}

// E[Z^2], Z ~ N(m, s^2).
inline double second_moment(double m, double s) { return m * m + s * s; }

// Affine terminals a_i x + b_i under constant drift kappa, unit diffusion
// and bang-bang controls chosen by the signs of a_1, a_2.
struct Linear {
    double a1, b1, a2, b2, kappa;
    double u_lo = 0.0, u_hi = 1.0, v_lo = -1.0, v_hi = 1.0;

    double rate() const { return kappa + (a1 > 0 ? u_hi : u_lo) + (a2 > 0 ? v_hi : v_lo); }
    double eta(int player, double remaining, double x) const {
        const double a = player == 1 ? a1 : a2;
        const double b = player == 1 ? b1 : b2;
        return a * x + b + a * rate() * remaining;
    }
};

// sup over a dense control lattice of z * (f + u + v) with one control free.
// The linear objective peaks at an endpoint, which the lattice contains.
inline double brute_force_sup(double z, double f, double other, double lo, double hi, int points = 1001) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        const double c = lo + (hi - lo) * k / (points - 1);
        best = std::max(best, z * (f + c + other));
    }
    return best;
}

}  // namespace oracle
