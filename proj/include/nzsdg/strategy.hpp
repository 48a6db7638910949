#pragma once

// Markovian feedback controls (t, x) -> effective control value.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nzsdg/hamiltonian.hpp"
#include "nzsdg/model.hpp"
#include "nzsdg/pde.hpp"

namespace nzsdg {

class FeedbackStrategy;

// Selector applied to the nearest-node zeta value of a solution.
struct BangBangRule {
    std::shared_ptr<const ValueSolution> solution;
    double tie = 0.0;
};

struct ConstantRule {
    double value = 0.0;
};

// Values on a (times x xs) lattice, row-major by time; nearest-node lookup.
struct TableRule {
    std::vector<double> times;
    std::vector<double> xs;
    std::vector<double> values;
};

// `value` inside [t_lo, t_hi] x [x_lo, x_hi], `base` elsewhere.
struct OverrideRule {
    std::shared_ptr<const FeedbackStrategy> base;
    double t_lo = 0.0, t_hi = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double value = 0.0;
};

class FeedbackStrategy {
public:
    using Rule = std::variant<BangBangRule, ConstantRule, TableRule, OverrideRule>;

    static FeedbackStrategy bang_bang(int player, std::shared_ptr<const ValueSolution> solution,
                                      const Interval& bounds, double tie);
    // The factories below throw DomainError for values outside `bounds`.
    static FeedbackStrategy constant(int player, const Interval& bounds, double value);
    static FeedbackStrategy table(int player, const Interval& bounds, TableRule table);
    static FeedbackStrategy override_region(const FeedbackStrategy& base, double t_lo, double t_hi, double x_lo,
                                            double x_hi, double value);

    int player() const noexcept { return player_; }
    const Interval& bounds() const noexcept { return bounds_; }
    const Rule& rule() const noexcept { return rule_; }

    double operator()(double t, double x) const;
    std::string describe() const;

private:
    FeedbackStrategy(int player, const Interval& bounds, Rule rule);

    int player_;
    Interval bounds_;
    Rule rule_;
};

double eval_strategy(const FeedbackStrategy& strategy, double t, double x);

// (u*, v*) reading zeta_1 / zeta_2 at the nearest grid node.
std::pair<FeedbackStrategy, FeedbackStrategy> bang_bang_pair(std::shared_ptr<const ValueSolution> solution,
                                                             const ProblemSpec& spec, const TiePolicy& tie);

// Deterministic adversarial family for `base`'s player: constants at the
// lower end, upper end and midpoint of the control interval, then
// alternating random rectangular overrides of `base` and random tables.
// Returns max(count, 2) strategies; the two endpoint constants are always
// present.
std::vector<FeedbackStrategy> deviation_family(const FeedbackStrategy& base, int count, std::uint64_t seed,
                                               const ProblemSpec& spec);

// CSV `t,x,value`, one row per lattice node.
void write_table_csv(std::ostream& out, const TableRule& table);
TableRule read_table_csv(std::istream& in);

}  // namespace nzsdg
