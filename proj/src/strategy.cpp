#include "nzsdg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nzsdg/error.hpp"
#include "nzsdg/io.hpp"
#include "nzsdg/rng.hpp"
#include "overloaded.hpp"

namespace nzsdg {

using detail::overloaded;

namespace {

void require_admissible(const Interval& bounds, double value) {
    if (!bounds.contains(value)) {
        throw DomainError("control value " + format_real(value) + " outside [" + format_real(bounds.lo) + ", " +
                          format_real(bounds.hi) + "]");
    }
}

// Ties go to the lower node. The proportional guess is exact on uniform
// axes; the walk fixes it up on the others.
std::size_t nearest_index(const std::vector<double>& axis, double value) {
    const std::size_t n = axis.size();
    if (n == 1 || value <= axis.front()) return 0;
    if (value >= axis.back()) return n - 1;
    const double scaled = (value - axis.front()) / (axis.back() - axis.front()) * static_cast<double>(n - 1);
    std::size_t i = std::min(n - 1, static_cast<std::size_t>(scaled + 0.5));
    while (i > 0 && value - axis[i - 1] <= axis[i] - value) --i;
    while (i + 1 < n && axis[i + 1] - value < value - axis[i]) ++i;
    return i;
}

std::string short_number(double value) {
    std::ostringstream out;
    out.precision(6);
    out << value;
    return out.str();
}

}  // namespace

FeedbackStrategy::FeedbackStrategy(int player, const Interval& bounds, Rule rule)
    : player_(player), bounds_(bounds), rule_(std::move(rule)) {
    if (player != 1 && player != 2) throw DomainError("player must be 1 or 2");
}

FeedbackStrategy FeedbackStrategy::bang_bang(int player, std::shared_ptr<const ValueSolution> solution,
                                             const Interval& bounds, double tie) {
    if (!solution) throw DomainError("bang-bang strategy needs a solution");
    require_admissible(bounds, tie);
    return FeedbackStrategy(player, bounds, BangBangRule{std::move(solution), tie});
}

FeedbackStrategy FeedbackStrategy::constant(int player, const Interval& bounds, double value) {
    require_admissible(bounds, value);
    return FeedbackStrategy(player, bounds, ConstantRule{value});
}

FeedbackStrategy FeedbackStrategy::table(int player, const Interval& bounds, TableRule table) {
    if (table.times.empty() || table.xs.empty() || table.values.size() != table.times.size() * table.xs.size()) {
        throw DomainError("table strategy needs times.size() * xs.size() values");
    }
    if (!std::is_sorted(table.times.begin(), table.times.end()) || !std::is_sorted(table.xs.begin(), table.xs.end())) {
        throw DomainError("table axes must be sorted");
    }
    for (double value : table.values) require_admissible(bounds, value);
    return FeedbackStrategy(player, bounds, std::move(table));
}

FeedbackStrategy FeedbackStrategy::override_region(const FeedbackStrategy& base, double t_lo, double t_hi,
                                                   double x_lo, double x_hi, double value) {
    require_admissible(base.bounds(), value);
    return FeedbackStrategy(base.player(), base.bounds(),
                            OverrideRule{std::make_shared<const FeedbackStrategy>(base), t_lo, t_hi, x_lo, x_hi, value});
}

double FeedbackStrategy::operator()(double t, double x) const {
    return std::visit(overloaded{
                          [&](const BangBangRule& r) {
                              const ValueSolution& sol = *r.solution;
                              const double z = sol.zeta(player_)(sol.nearest_time(t), sol.nearest_node(x));
                              return select_bang(z, bounds_, r.tie);
                          },
                          [](const ConstantRule& r) { return r.value; },
                          [&](const TableRule& r) {
                              const std::size_t k = nearest_index(r.times, t);
                              const std::size_t j = nearest_index(r.xs, x);
                              return r.values[k * r.xs.size() + j];
                          },
                          [&](const OverrideRule& r) {
                              if (r.t_lo <= t && t <= r.t_hi && r.x_lo <= x && x <= r.x_hi) return r.value;
                              return (*r.base)(t, x);
                          },
                      },
                      rule_);
}

std::string FeedbackStrategy::describe() const {
    return std::visit(overloaded{
                          [](const BangBangRule& r) { return "bang_bang(tie=" + short_number(r.tie) + ")"; },
                          [](const ConstantRule& r) { return "constant(" + short_number(r.value) + ")"; },
                          [](const TableRule& r) {
                              return "table(" + std::to_string(r.times.size()) + "x" + std::to_string(r.xs.size()) +
                                     ")";
                          },
                          [](const OverrideRule& r) {
                              return "override(" + r.base->describe() + ", t in [" + short_number(r.t_lo) + ", " +
                                     short_number(r.t_hi) + "], x in [" + short_number(r.x_lo) + ", " +
                                     short_number(r.x_hi) + "] -> " + short_number(r.value) + ")";
                          },
                      },
                      rule_);
}

double eval_strategy(const FeedbackStrategy& strategy, double t, double x) { return strategy(t, x); }

std::pair<FeedbackStrategy, FeedbackStrategy> bang_bang_pair(std::shared_ptr<const ValueSolution> solution,
                                                             const ProblemSpec& spec, const TiePolicy& tie) {
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    return {FeedbackStrategy::bang_bang(1, solution, u_eff, tie.eps1),
            FeedbackStrategy::bang_bang(2, solution, v_eff, tie.eps2)};
}

std::vector<FeedbackStrategy> deviation_family(const FeedbackStrategy& base, int count, std::uint64_t seed,
                                               const ProblemSpec& spec) {
    if (count < 1) throw DomainError("deviation family needs count >= 1");
    const Interval bounds = base.bounds();
    const int player = base.player();
    const double horizon = spec.horizon;
    const double spread = std::sqrt(horizon) * diffusion_sup(spec);
    StreamEngine rng(seed, static_cast<std::uint64_t>(player));

    // Half the draws land on an endpoint: bang-bang alternatives are the
    // strongest competitors for a linear-in-control drift.
    auto random_value = [&] {
        const double pick = rng.uniform();
        if (pick < 0.25) return bounds.lo;
        if (pick < 0.5) return bounds.hi;
        return rng.uniform(bounds.lo, bounds.hi);
    };

    std::vector<FeedbackStrategy> family;
    family.push_back(FeedbackStrategy::constant(player, bounds, bounds.lo));
    family.push_back(FeedbackStrategy::constant(player, bounds, bounds.hi));
    if (count >= 3) family.push_back(FeedbackStrategy::constant(player, bounds, bounds.midpoint()));

    for (int i = 3; i < count; ++i) {
        if (i % 2 == 1) {
            const double t_lo = rng.uniform(0.0, 0.8 * horizon);
            const double t_hi = rng.uniform(t_lo, horizon);
            double x_lo = rng.uniform(spec.start_x - 3.0 * spread, spec.start_x + 3.0 * spread);
            double x_hi = rng.uniform(spec.start_x - 3.0 * spread, spec.start_x + 3.0 * spread);
            if (x_lo > x_hi) std::swap(x_lo, x_hi);
            family.push_back(FeedbackStrategy::override_region(base, t_lo, t_hi, x_lo, x_hi, random_value()));
        } else {
            TableRule table;
            constexpr int time_nodes = 5;
            constexpr int space_nodes = 9;
            for (int k = 0; k < time_nodes; ++k) table.times.push_back(horizon * k / (time_nodes - 1));
            for (int j = 0; j < space_nodes; ++j) {
                table.xs.push_back(spec.start_x - 4.0 * spread + 8.0 * spread * j / (space_nodes - 1));
            }
            for (int n = 0; n < time_nodes * space_nodes; ++n) table.values.push_back(random_value());
            family.push_back(FeedbackStrategy::table(player, bounds, std::move(table)));
        }
    }
    return family;
}

void write_table_csv(std::ostream& out, const TableRule& table) {
    out << "t,x,value\n";
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        for (std::size_t j = 0; j < table.xs.size(); ++j) {
            out << format_real(table.times[k]) << ',' << format_real(table.xs[j]) << ','
                << format_real(table.values[k * table.xs.size() + j]) << '\n';
        }
    }
}

TableRule read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,value", 0) != 0) {
        throw DomainError("table CSV must start with header t,x,value");
    }
    std::map<std::pair<double, double>, double> entries;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        std::istringstream fields(line);
        double t = 0.0, x = 0.0, value = 0.0;
        char comma1 = 0, comma2 = 0;
        if (!(fields >> t >> comma1 >> x >> comma2 >> value) || comma1 != ',' || comma2 != ',') {
            throw DomainError("malformed table CSV row at line " + std::to_string(line_number));
        }
        if (!entries.emplace(std::make_pair(t, x), value).second) {
            throw DomainError("duplicate table node at line " + std::to_string(line_number));
        }
    }
    TableRule table;
    for (const auto& [key, value] : entries) {
        if (table.times.empty() || table.times.back() != key.first) table.times.push_back(key.first);
    }
    for (const auto& [key, value] : entries) {
        if (key.first != table.times.front()) break;
        table.xs.push_back(key.second);
    }
    if (entries.size() != table.times.size() * table.xs.size()) {
        throw DomainError("table CSV nodes do not form a full lattice");
    }
    for (double t : table.times) {
        for (double x : table.xs) {
            const auto it = entries.find({t, x});
            if (it == entries.end()) throw DomainError("table CSV nodes do not form a full lattice");
            table.values.push_back(it->second);
        }
    }
    return table;
}

}  // namespace nzsdg
