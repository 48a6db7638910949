#include "nzsdg/mc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nzsdg/error.hpp"
#include "nzsdg/parallel.hpp"
#include "nzsdg/rng.hpp"

namespace nzsdg {

std::string to_string(SimMode mode) { return mode == SimMode::strong ? "strong" : "girsanov"; }

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            carry_ += (sum_ - t) + value;
        } else {
            carry_ += (value - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void check_config(const SimConfig& config) {
    if (config.n_paths < 1) throw DomainError("simulation needs n_paths >= 1");
    if (config.n_steps < 1) throw DomainError("simulation needs n_steps >= 1");
}

struct PathOutcome {
    std::vector<double> terminal;
    std::vector<double> log_weight;  // empty in strong mode
};

// Path p draws its increments once and replays them for every pair, so a
// batch returns exactly what one call per pair would.
std::vector<PathOutcome> simulate_paths(const ProblemSpec& spec, std::span<const StrategyPair> pairs,
                                        const SimConfig& config, bool weighted) {
    check_config(config);
    const auto n_paths = static_cast<std::size_t>(config.n_paths);
    const int n_steps = config.n_steps;
    const double dt = spec.horizon / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> times(n_steps);
    for (int k = 0; k < n_steps; ++k) times[k] = spec.horizon * k / n_steps;

    std::vector<PathOutcome> out(pairs.size());
    for (auto& o : out) {
        o.terminal.resize(n_paths);
        if (weighted) o.log_weight.resize(n_paths);
    }

    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
        std::vector<double> increments(n_steps);
        for (std::size_t p = begin; p < end; ++p) {
            StreamEngine engine(config.seed, p);
            std::normal_distribution<double> normal;
            for (double& db : increments) db = sqrt_dt * normal(engine);
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                const FeedbackStrategy& u = *pairs[q].u;
                const FeedbackStrategy& v = *pairs[q].v;
                double x = spec.start_x;
                double log_weight = 0.0;
                for (int k = 0; k < n_steps; ++k) {
                    const double t = times[k];
                    const double b = drift_base_value(spec, t, x) + u(t, x) + v(t, x);
                    const double sigma = diffusion_value(spec, t, x);
                    const double db = increments[k];
                    if (weighted) {
                        const double theta = b / sigma;
                        log_weight += theta * db - 0.5 * theta * theta * dt;
                        x += sigma * db;
                    } else {
                        x += b * dt + sigma * db;
                    }
                }
                out[q].terminal[p] = x;
                if (weighted) out[q].log_weight[p] = log_weight;
            }
        }
    });
    return out;
}

PathOutcome simulate_paths(const ProblemSpec& spec, const FeedbackStrategy& u, const FeedbackStrategy& v,
                           const SimConfig& config, bool weighted) {
    const StrategyPair pair{&u, &v};
    return std::move(simulate_paths(spec, std::span<const StrategyPair>(&pair, 1), config, weighted).front());
}

PayoffEstimate weighted_estimate(int player, const std::vector<double>& payoff, const std::vector<double>& weight) {
    CompensatedSum sum_w, sum_w2, sum_wg;
    for (std::size_t i = 0; i < payoff.size(); ++i) {
        sum_w.add(weight[i]);
        sum_w2.add(weight[i] * weight[i]);
        sum_wg.add(weight[i] * payoff[i]);
    }
    const double total = sum_w.value();
    const double mean = sum_wg.value() / total;
    CompensatedSum spread;
    for (std::size_t i = 0; i < payoff.size(); ++i) {
        const double d = weight[i] * (payoff[i] - mean);
        spread.add(d * d);
    }
    PayoffEstimate est;
    est.player = player;
    est.mean = mean;
    est.std_err = std::sqrt(spread.value()) / total;  // delta method for the ratio estimator
    est.n_paths = static_cast<std::int64_t>(payoff.size());
    est.ess = total * total / sum_w2.value();
    est.mode = SimMode::girsanov;
    est.heavy_tail_warning = *est.ess < 0.01 * static_cast<double>(payoff.size());
    return est;
}

std::vector<double> payoffs_of(const ProblemSpec& spec, int player, const std::vector<double>& terminal) {
    std::vector<double> out(terminal.size());
    const auto& g = player == 1 ? spec.terminal_1 : spec.terminal_2;
    std::transform(terminal.begin(), terminal.end(), out.begin(), [&](double x) { return terminal_value(g, x); });
    return out;
}

}  // namespace

SampleMean sample_mean(const std::vector<double>& values) {
    SampleMean out;
    if (values.empty()) return out;
    // Shifting by the first value keeps a constant sample exact.
    const double shift = values.front();
    CompensatedSum sum;
    for (double v : values) sum.add(v - shift);
    const double n = static_cast<double>(values.size());
    const double offset = sum.value() / n;
    out.mean = shift + offset;
    if (values.size() < 2) return out;
    CompensatedSum squares;
    for (double v : values) {
        const double d = (v - shift) - offset;
        squares.add(d * d);
    }
    out.std_err = std::sqrt(squares.value() / (n - 1.0) / n);
    return out;
}

std::vector<double> simulate_terminal_states(const ProblemSpec& spec, const FeedbackStrategy& u,
                                             const FeedbackStrategy& v, const SimConfig& config) {
    return simulate_paths(spec, u, v, config, false).terminal;
}

std::vector<std::vector<double>> simulate_terminal_states(const ProblemSpec& spec,
                                                          std::span<const StrategyPair> pairs,
                                                          const SimConfig& config) {
    auto outcomes = simulate_paths(spec, pairs, config, false);
    std::vector<std::vector<double>> terminal;
    terminal.reserve(outcomes.size());
    for (auto& o : outcomes) terminal.push_back(std::move(o.terminal));
    return terminal;
}

std::pair<PayoffEstimate, PayoffEstimate> simulate_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config) {
    if (config.mode != SimMode::strong) throw DomainError("simulate_payoffs needs strong mode");
    const auto terminal = simulate_terminal_states(spec, u, v, config);
    auto estimate = [&](int player) {
        const auto stats = sample_mean(payoffs_of(spec, player, terminal));
        PayoffEstimate est;
        est.player = player;
        est.mean = stats.mean;
        est.std_err = stats.std_err;
        est.n_paths = config.n_paths;
        est.mode = SimMode::strong;
        return est;
    };
    return {estimate(1), estimate(2)};
}

std::pair<PayoffEstimate, PayoffEstimate> girsanov_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config) {
    if (config.mode != SimMode::girsanov) throw DomainError("girsanov_payoffs needs girsanov mode");
    const auto paths = simulate_paths(spec, u, v, config, true);
    // Self-normalization makes the common factor exp(-max) irrelevant.
    const double top = *std::max_element(paths.log_weight.begin(), paths.log_weight.end());
    std::vector<double> weight(paths.log_weight.size());
    std::transform(paths.log_weight.begin(), paths.log_weight.end(), weight.begin(),
                   [&](double lw) { return std::exp(lw - top); });
    return {weighted_estimate(1, payoffs_of(spec, 1, paths.terminal), weight),
            weighted_estimate(2, payoffs_of(spec, 2, paths.terminal), weight)};
}

std::pair<PayoffEstimate, PayoffEstimate> estimate_payoffs(const ProblemSpec& spec, const FeedbackStrategy& u,
                                                           const FeedbackStrategy& v, const SimConfig& config) {
    return config.mode == SimMode::strong ? simulate_payoffs(spec, u, v, config)
                                          : girsanov_payoffs(spec, u, v, config);
}

ConsistencyReport y0_consistency(const ProblemSpec& spec, std::shared_ptr<const ValueSolution> solution,
                                 const TiePolicy& tie, const SimConfig& config, double grid_tolerance) {
    const auto [u_star, v_star] = bang_bang_pair(solution, spec, tie);
    SimConfig strong = config;
    strong.mode = SimMode::strong;
    const auto [j1, j2] = simulate_payoffs(spec, u_star, v_star, strong);

    auto entry = [&](const PayoffEstimate& est) {
        ConsistencyEntry e;
        e.player = est.player;
        e.value = solution->value_at(est.player, 0.0, spec.start_x);
        e.mc_mean = est.mean;
        e.std_err = est.std_err;
        e.discrepancy = std::abs(e.value - e.mc_mean);
        e.bound = 3.0 * est.std_err + grid_tolerance;
        e.ok = e.discrepancy <= e.bound;
        return e;
    };
    ConsistencyReport report;
    report.player1 = entry(j1);
    report.player2 = entry(j2);
    report.ok = report.player1.ok && report.player2.ok;
    return report;
}

}  // namespace nzsdg
