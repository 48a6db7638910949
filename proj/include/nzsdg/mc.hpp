#pragma once

// Forward Monte Carlo for the controlled state and the payoffs
// J_i(u, v) = E^{u,v}[g_i(X_T)].
//
// Path p draws its Brownian increments from StreamEngine(seed, p), so two
// runs with the same seed share increments path by path (common random
// numbers) and results do not depend on the worker count.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nzsdg/model.hpp"
#include "nzsdg/pde.hpp"
#include "nzsdg/strategy.hpp"

namespace nzsdg {

enum class SimMode { strong, girsanov };

std::string to_string(SimMode mode);

struct SimConfig {
    std::int64_t n_paths = 200000;
    int n_steps = 200;
    std::uint64_t seed = 20240601;
    SimMode mode = SimMode::strong;

    bool operator==(const SimConfig&) const = default;
};

struct PayoffEstimate {
    int player = 1;
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t n_paths = 0;
    std::optional<double> ess;  // Kish effective sample size, girsanov mode only
    SimMode mode = SimMode::strong;
    bool heavy_tail_warning = false;  // ess < 1% of n_paths
};

// Mean and standard error of a sample; identical values give std_err == 0.
struct SampleMean {
    double mean = 0.0;
    double std_err = 0.0;
};
SampleMean sample_mean(const std::vector<double>& values);

// Euler-Maruyama X_T per path under the strong formulation.
std::vector<double> simulate_terminal_states(const ProblemSpec& spec, const FeedbackStrategy& u,
                                             const FeedbackStrategy& v, const SimConfig& config);

struct StrategyPair {
    const FeedbackStrategy* u = nullptr;
    const FeedbackStrategy* v = nullptr;
};

// One terminal sample per pair; entry q equals the single-pair call on pairs[q].
std::vector<std::vector<double>> simulate_terminal_states(const ProblemSpec& spec,
                                                          std::span<const StrategyPair> pairs,
                                                          const SimConfig& config);

// Requires config.mode == strong.
std::pair<PayoffEstimate, PayoffEstimate> simulate_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config);

// Uncontrolled state X = x0 + int sigma dB with log-density weights;
// self-normalized estimates. Requires config.mode == girsanov.
std::pair<PayoffEstimate, PayoffEstimate> girsanov_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config);

// Dispatches on config.mode.
std::pair<PayoffEstimate, PayoffEstimate> estimate_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config);

struct ConsistencyEntry {
    int player = 1;
    double value = 0.0;    // eta_i(0, x0)
    double mc_mean = 0.0;  // J_i(u*, v*)
    double std_err = 0.0;
    double discrepancy = 0.0;
    double bound = 0.0;  // 3 std_err + grid tolerance
    bool ok = false;
};

struct ConsistencyReport {
    ConsistencyEntry player1, player2;
    bool ok = false;
};

// |eta_i(0, x0) - J_i(u*, v*)| for the bang-bang pair of `solution`.
ConsistencyReport y0_consistency(const ProblemSpec& spec, std::shared_ptr<const ValueSolution> solution,
                                 const TiePolicy& tie, const SimConfig& config, double grid_tolerance = 1e-2);

}  // namespace nzsdg
