#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "nzsdg/error.hpp"
#include "nzsdg/rng.hpp"
#include "nzsdg/strategy.hpp"

using namespace nzsdg;

namespace {

std::shared_ptr<const ValueSolution> solve_small(const ProblemSpec& spec) {
    GridSpec grid = default_grid(spec);
    grid.nx = 161;
    grid.nt = 160;
    return std::make_shared<const ValueSolution>(solve_limit(spec, grid, default_tie(spec)));
}

}  // namespace

TEST_CASE("bang-bang pair on closed-form cases") {
    ProblemSpec spec = base_problem();
    StreamEngine rng(21, 0);
    SUBCASE("linear") {
        const auto [u, v] = bang_bang_pair(solve_small(spec), spec, default_tie(spec));
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0), x = rng.uniform(-10.0, 10.0);
            CHECK(u(t, x) == 1.0);
            CHECK(v(t, x) == 1.0);
        }
        CHECK(eval_strategy(u, 0.3, 1.2) == 1.0);
    }
    SUBCASE("conflict") {
        spec.terminal_2 = AffineTerminal{-1.0, 0.0};
        const auto [u, v] = bang_bang_pair(solve_small(spec), spec, default_tie(spec));
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0), x = rng.uniform(-10.0, 10.0);
            CHECK(u(t, x) == 1.0);
            CHECK(v(t, x) == -1.0);
        }
    }
    SUBCASE("constant terminals fall on the tie branch") {
        spec.terminal_1 = AffineTerminal{0.0, 1.0};
        spec.terminal_2 = AffineTerminal{0.0, 2.0};
        const TiePolicy tie{0.25, -0.5};
        const auto [u, v] = bang_bang_pair(solve_small(spec), spec, tie);
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0), x = rng.uniform(-10.0, 10.0);
            CHECK(u(t, x) == 0.25);
            CHECK(v(t, x) == -0.5);
        }
    }
}

TEST_CASE("bang-bang image and sign equivariance") {
    ProblemSpec spec = base_problem();
    spec.terminal_1 = PowerTerminal{2.0, false};
    spec.terminal_2 = SigmoidTerminal{1.0, -1.0, 1.5, 0.5};
    const TiePolicy tie{0.4, 0.2};
    auto solution = solve_small(spec);
    auto scaled = std::make_shared<ValueSolution>(*solution);
    for (int k = 0; k < scaled->zeta1.rows(); ++k) {
        for (double& z : scaled->zeta1.row(k)) z *= 3.7;
    }
    const auto [u, v] = bang_bang_pair(solution, spec, tie);
    const auto [u_scaled, v_scaled] = bang_bang_pair(scaled, spec, tie);
    StreamEngine rng(22, 0);
    for (int i = 0; i < 10000; ++i) {
        const double t = rng.uniform(0.0, 1.0), x = rng.uniform(-9.0, 9.0);
        const double a = u(t, x);
        CHECK((a == 0.0 || a == 1.0 || a == 0.4));
        const double b = v(t, x);
        CHECK((b == -1.0 || b == 1.0 || b == 0.2));
        CHECK(u_scaled(t, x) == a);
    }
}

TEST_CASE("constant, table and override semantics") {
    const Interval bounds{0.0, 1.0};
    const auto half = FeedbackStrategy::constant(1, bounds, 0.5);
    CHECK(half(0.9, -100.0) == 0.5);
    CHECK_THROWS_AS(FeedbackStrategy::constant(1, bounds, 1.5), DomainError);

    const auto one = FeedbackStrategy::constant(1, bounds, 1.0);
    const auto region = FeedbackStrategy::override_region(one, 0.0, 0.5, -1e9, 1e9, 0.0);
    CHECK(region(0.25, 3.0) == 0.0);
    CHECK(region(0.75, 3.0) == 1.0);
    CHECK_THROWS_AS(FeedbackStrategy::override_region(one, 0.0, 0.5, -1.0, 1.0, -0.1), DomainError);

    TableRule table{{0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}};
    const auto tab = FeedbackStrategy::table(1, bounds, table);
    CHECK(tab(0.1, -0.9) == 0.0);
    CHECK(tab(0.9, 0.4) == 0.4);
    CHECK(tab(0.9, 7.0) == 0.5);     // clamps to the last node
    CHECK(tab(-1.0, -7.0) == 0.0);  // and the first
    CHECK(tab(0.5, -0.5) == 0.0);   // midpoints go to the lower node
    table.values.pop_back();
    CHECK_THROWS_AS(FeedbackStrategy::table(1, bounds, table), DomainError);

    // Uneven axis: brute-force nearest node, ties to the lower one.
    const std::vector<double> xs{-3.0, -2.9, -1.0, 0.5, 0.6, 4.0};
    std::vector<double> values;
    for (std::size_t j = 0; j < xs.size(); ++j) values.push_back(0.1 * static_cast<double>(j));
    const auto uneven = FeedbackStrategy::table(1, bounds, TableRule{{0.0}, xs, values});
    for (double x = -4.0; x <= 5.0; x += 0.01) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < xs.size(); ++j) {
            if (std::abs(xs[j] - x) < std::abs(xs[best] - x)) best = j;
        }
        CHECK(uneven(0.3, x) == values[best]);
    }
}

TEST_CASE("deviation family") {
    ProblemSpec spec = base_problem();
    const auto [u, v] = bang_bang_pair(solve_small(spec), spec, default_tie(spec));

    const auto a = deviation_family(u, 3, 42, spec);
    const auto b = deviation_family(u, 3, 42, spec);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].describe() == b[i].describe());
    CHECK(a[0].describe() == "constant(0)");
    CHECK(a[1].describe() == "constant(1)");
    CHECK(a[2].describe() == "constant(0.5)");
    CHECK(deviation_family(u, 1, 42, spec).size() == 2);
    CHECK_THROWS_AS(deviation_family(u, 0, 42, spec), DomainError);

    const auto family = deviation_family(v, 50, 7, spec);
    REQUIRE(family.size() == 50);
    CHECK(family[0].describe() == "constant(-1)");
    CHECK(family[1].describe() == "constant(1)");
    StreamEngine rng(23, 0);
    for (const auto& s : family) {
        CHECK(s.player() == 2);
        for (int i = 0; i < 1000; ++i) {
            CHECK(spec.v_interval.contains(s(rng.uniform(0.0, 1.0), rng.uniform(-12.0, 12.0))));
        }
    }
    const auto again = deviation_family(v, 50, 7, spec);
    const auto other = deviation_family(v, 50, 8, spec);
    bool differs = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        CHECK(again[i].describe() == family[i].describe());
        for (double t : {0.1, 0.5, 0.9}) {
            for (double x : {-2.0, 0.0, 2.0}) {
                CHECK(again[i](t, x) == family[i](t, x));
                differs = differs || other[i](t, x) != family[i](t, x);
            }
        }
    }
    CHECK(differs);
}

TEST_CASE("table CSV round trip") {
    TableRule table{{0.0, 0.5, 1.0}, {-2.0, 0.0, 2.0}, {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 1.0 / 3.0}};
    std::stringstream buffer;
    write_table_csv(buffer, table);
    const auto back = read_table_csv(buffer);
    CHECK(back.times == table.times);
    CHECK(back.xs == table.xs);
    CHECK(back.values == table.values);

    std::istringstream holes("t,x,value\n0,0,1\n0,1,1\n1,0,1\n");
    CHECK_THROWS_AS(read_table_csv(holes), DomainError);
    std::istringstream bad("t,x,value\n0;0;1\n");
    CHECK_THROWS_AS(read_table_csv(bad), DomainError);
}
