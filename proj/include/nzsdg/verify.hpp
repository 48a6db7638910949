#pragma once

// Certification layer: closed-form and quadrature oracles, the Isaacs
// sweep, the smoothing-limit checks and the unilateral deviation test.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nzsdg/hamiltonian.hpp"
#include "nzsdg/mc.hpp"
#include "nzsdg/model.hpp"
#include "nzsdg/pde.hpp"
#include "nzsdg/strategy.hpp"

namespace nzsdg {

// Affine terminals g_i = a_i x + b_i, constant drift kappa, unit diffusion:
//   eta_i(t,x) = a_i x + b_i + a_i (kappa + u(a_1) + v(a_2)) (T - t),  zeta_i = a_i.
// Throws OracleDeclined when a slope is zero or the case is outside that family.
ValueSolution linear_oracle(const ProblemSpec& spec, const GridSpec& grid);

// Probabilists' Gauss-Hermite rule: sum_k weights[k] h(nodes[k]) ~ E[h(xi)], xi ~ N(0,1).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermiteRule gauss_hermite_rule(int order);

// (J_1*, J_2*) = E[g_i(x0 + (kappa + u_hi + v_hi) T + sqrt(T) xi)] for
// constant drift, unit diffusion and nondecreasing, non-constant terminals.
// Heat-kernel smoothing then makes both value functions strictly increasing
// before T, so both players pick their upper endpoints. Throws
// OracleDeclined otherwise.
std::pair<double, double> quadrature_oracle(const ProblemSpec& spec, int order = 64);

struct IsaacsReport {
    std::int64_t samples = 0;
    std::int64_t violations = 0;
    double min_gap1 = 0.0;
    double min_gap2 = 0.0;
    double tolerance = 1e-12;
    bool ok = false;
};

// Uniform (t,x,p,q,u,v) over [0,T] x [-5,5] x [-10,10]^2 x U x V (raw
// controls mapped through h and l).
IsaacsReport isaacs_sweep(const ProblemSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                          double tolerance = 1e-12);

struct SmoothingLimitReport {
    std::int64_t equality_checks = 0;
    std::int64_t exempt = 0;  // samples with n <= 1/|grad|
    std::int64_t equality_failures = 0;
    std::int64_t truncation_checks = 0;
    std::int64_t truncation_failures = 0;
    bool ok = false;
};

// Smoothed selectors equal the bang-bang ones exactly once n > 1/|grad|;
// |truncate(x, n)| <= min(|x|, n).
SmoothingLimitReport smoothing_limit_suite(std::uint64_t seed, std::int64_t n_samples,
                                           const ProblemSpec& spec = base_problem());

struct DeviationRecord {
    int player = 1;
    std::string description;
    double gap = 0.0;      // J_i(deviation) - J_i(star), common random numbers
    double std_err = 0.0;  // of the paired difference
    double threshold = 0.0;
    bool violates = false;
};

struct VerdictReport {
    std::string case_name;
    PayoffEstimate star1, star2;
    std::vector<DeviationRecord> records;
    bool pass = false;
    double z = 3.0;
    double slack = 0.0;
    int deviations_per_player = 0;
    SimConfig sim;
    std::string family_composition;
};

struct GapEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

// Paired estimate of J_player(deviation, other star) - J_player(u*, v*)
// from terminal states simulated with the same seed.
GapEstimate paired_payoff_gap(const ProblemSpec& spec, int player, const std::vector<double>& star_terminal,
                              const std::vector<double>& deviation_terminal);

// Violation iff gap > z * std_err + slack.
VerdictReport nash_deviation_suite(const ProblemSpec& spec, std::shared_ptr<const ValueSolution> solution,
                                   const TiePolicy& tie, int deviations_per_player, const SimConfig& config,
                                   double slack, std::string case_name = {}, double z = 3.0);

}  // namespace nzsdg
