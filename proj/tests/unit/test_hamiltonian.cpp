#include <cmath>

#include "doctest.h"
#include "nzsdg/error.hpp"
#include "nzsdg/hamiltonian.hpp"
#include "nzsdg/rng.hpp"
#include "oracles.hpp"

using namespace nzsdg;

TEST_CASE("bang selector branches") {
    const ProblemSpec spec = base_problem();
    TiePolicy tie;
    CHECK(bang_selector(1, 0.5, tie, spec) == 1.0);
    CHECK(bang_selector(1, -0.5, tie, spec) == 0.0);
    tie.eps1 = 0.3;
    CHECK(bang_selector(1, 0.0, tie, spec) == 0.3);
    CHECK(bang_selector(2, -2.0, tie, spec) == -1.0);
    CHECK(bang_selector(2, 2.0, tie, spec) == 1.0);
    tie.eps2 = -0.4;
    CHECK(bang_selector(2, 0.0, tie, spec) == -0.4);
}

TEST_CASE("default tie") {
    ProblemSpec spec = base_problem();
    CHECK(default_tie(spec) == TiePolicy{0.0, 0.0});
    spec.u_interval = {1.0, 3.0};
    CHECK(default_tie(spec).eps1 == 2.0);
    spec.tie_eps2 = 0.25;
    CHECK(default_tie(spec).eps2 == 0.25);
}

TEST_CASE("smoothed selector values") {
    const ProblemSpec spec = base_problem();
    CHECK(smoothed_selector(1, -0.05, SmoothingLevel(10), spec) == doctest::Approx(0.5));
    for (int n : {1, 2, 7, 100}) CHECK(smoothed_selector(2, 0.0, SmoothingLevel(n), spec) == 0.0);
    CHECK(smoothed_selector(1, 0.2, SmoothingLevel(3), spec) == 1.0);
    CHECK(smoothed_selector(1, -0.5, SmoothingLevel(3), spec) == 0.0);
    CHECK(smoothed_selector(2, 0.05, SmoothingLevel(10), spec) == doctest::Approx(0.5));
    CHECK(smoothed_selector(2, -1.0, SmoothingLevel(10), spec) == -1.0);
    CHECK_THROWS_AS(SmoothingLevel(0), DomainError);
}

TEST_CASE("smoothed selector on a general interval is the affine image of the base ramp") {
    ProblemSpec spec = base_problem();
    spec.u_interval = {0.0, 1.0};
    spec.transform_h = AffineTransform{4.0, -1.0};  // h(U) = [-1, 3]
    spec.v_interval = {-1.0, 1.0};
    spec.transform_l = AffineTransform{0.5, 2.0};  // l(V) = [1.5, 2.5]
    const SmoothingLevel n(10);
    CHECK(smoothed_selector(1, -0.05, n, spec) == doctest::Approx(-1.0 + 4.0 * 0.5));
    CHECK(smoothed_selector(2, 0.05, n, spec) == doctest::Approx(1.5 + 1.0 * 0.75));
    CHECK(smoothed_selector(2, 0.0, n, spec) == doctest::Approx(2.0));
}

TEST_CASE("truncation") {
    CHECK(truncate(7.0, SmoothingLevel(5)) == 5.0);
    CHECK(truncate(-9.0, SmoothingLevel(5)) == -5.0);
    CHECK(truncate(0.4, SmoothingLevel(1)) == 0.4);
    StreamEngine rng(11, 0);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-100.0, 100.0);
        const SmoothingLevel n(1 + static_cast<int>(rng.uniform() * 50));
        const double y = truncate(x, n);
        CHECK(std::abs(y) <= std::min(std::abs(x), n.value()));
        if (std::abs(x) <= n.value()) CHECK(y == x);
    }
}

TEST_CASE("selector range, pointwise limit and Lipschitz bound") {
    ProblemSpec spec = base_problem();
    spec.transform_h = TanhTransform{2.0, 0.8};
    spec.transform_l = AffineTransform{-3.0, 1.0};
    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    const TiePolicy tie = default_tie(spec);
    StreamEngine rng(3, 0);
    for (int i = 0; i < 20000; ++i) {
        const double grad = rng.uniform(-3.0, 3.0) * std::pow(10.0, -rng.uniform(0.0, 3.0));
        const double other = grad + rng.uniform(-0.01, 0.01);
        const SmoothingLevel n(1 + static_cast<int>(rng.uniform() * 500));
        for (int player : {1, 2}) {
            const Interval& bounds = player == 1 ? u_eff : v_eff;
            const double eps = player == 1 ? tie.eps1 : tie.eps2;
            const double bang = bang_selector(player, grad, tie, spec);
            CHECK((bang == bounds.lo || bang == bounds.hi || bang == eps));
            const double smooth = smoothed_selector(player, grad, n, spec);
            CHECK(bounds.contains(smooth));
            if (n.value() > 1.0 / std::abs(grad)) CHECK(smooth == bang);
            const double lipschitz = n.value() * bounds.width() * std::abs(grad - other);
            CHECK(std::abs(smooth - smoothed_selector(player, other, n, spec)) <= lipschitz * (1 + 1e-12) + 1e-15);
        }
    }
}

TEST_CASE("sigma scaling leaves selectors unchanged") {
    ProblemSpec spec = base_problem();
    spec.diffusion = EllipticDiffusion{1.0, 0.25};
    const TiePolicy tie{0.5, -0.5};
    StreamEngine rng(5, 0);
    for (int i = 0; i < 10000; ++i) {
        const double grad = rng.uniform(-5.0, 5.0);
        const double sigma = diffusion_value(spec, 0.0, rng.uniform(-10.0, 10.0));
        for (int player : {1, 2}) {
            CHECK(bang_selector(player, grad * sigma, tie, spec) == bang_selector(player, grad, tie, spec));
            CHECK(bang_selector(player, grad / sigma, tie, spec) == bang_selector(player, grad, tie, spec));
        }
    }
    CHECK(bang_selector(1, 0.0 * 1.25, tie, spec) == 0.5);
}

TEST_CASE("hamiltonian examples") {
    ProblemSpec spec = base_problem();
    CHECK(hamiltonian(spec, 1, 0.0, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(hamiltonian(spec, 2, 0.3, 4.0, 0.0, 0.7, -0.2) == 0.0);
    spec.drift_base = ConstantDrift{0.5};
    CHECK(hamiltonian(spec, 1, 0.0, 0.0, 2.0, 0.0, -1.0) == doctest::Approx(-1.0));

    spec.diffusion = EllipticDiffusion{1.0, 0.25};
    const double x = M_PI / 2;
    CHECK(hamiltonian(spec, 1, 0.0, x, 1.25, 1.0, 1.0) == doctest::Approx(2.5));
}

TEST_CASE("hamiltonian_star examples and tie independence") {
    ProblemSpec spec = base_problem();
    const TiePolicy tie;
    CHECK(hamiltonian_star(spec, 1, 0.0, 0.0, 2.0, -3.0, tie) == doctest::Approx(0.0));
    for (double e1 : {0.0, 0.3, 1.0}) {
        for (double e2 : {-1.0, 0.0, 0.8}) {
            CHECK(hamiltonian_star(spec, 1, 0.0, 0.0, 0.0, 0.0, TiePolicy{e1, e2}) == 0.0);
        }
    }
    spec.drift_base = ConstantDrift{0.5};
    CHECK(hamiltonian_star(spec, 1, 0.0, 0.0, 1.0, 1.0, tie) == doctest::Approx(2.5));

    StreamEngine rng(9, 0);
    for (int i = 0; i < 1000; ++i) {
        double z1 = rng.uniform(-5.0, 5.0);
        if (z1 == 0.0) z1 = 1.0;
        const double z2 = rng.uniform(-5.0, 5.0);
        const double first = hamiltonian_star(spec, 1, 0.0, 0.0, z1, z2, TiePolicy{0.0, 0.0});
        CHECK(hamiltonian_star(spec, 1, 0.0, 0.0, z1, z2, TiePolicy{0.7, 0.0}) == first);
        CHECK(hamiltonian_star(spec, 1, 0.0, 0.0, z1, z2, TiePolicy{1.0, 0.0}) == first);
    }
}

TEST_CASE("remark identities for the base sets") {
    const ProblemSpec spec = base_problem();
    StreamEngine rng(13, 0);
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.uniform(-10.0, 10.0);
        const double eps = rng.uniform(0.0, 1.0);
        const TiePolicy tie{eps, 0.0};
        CHECK(p * bang_selector(1, p, tie, spec) == doctest::Approx(std::max(p, 0.0) * 1.0 + p * 0.0));
        CHECK(p * bang_selector(2, p, tie, spec) == doctest::Approx(std::abs(p)));
    }
    CHECK(0.0 * bang_selector(1, 0.0, TiePolicy{0.4, 0.0}, spec) == 0.0);
}

TEST_CASE("hamiltonian_star maximizes the own control against a brute-force search") {
    ProblemSpec spec = base_problem();
    spec.drift_base = SinusoidalDrift{0.8, 2.0, -0.1};
    const TiePolicy tie = default_tie(spec);
    StreamEngine rng(17, 0);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-5.0, 5.0);
        const double p = rng.uniform(-10.0, 10.0);
        const double q = rng.uniform(-10.0, 10.0);
        const double f = drift_base_value(spec, 0.0, x);
        const double v = bang_selector(2, q, tie, spec);
        const double u = bang_selector(1, p, tie, spec);
        CHECK(hamiltonian_star(spec, 1, 0.0, x, p, q, tie) == doctest::Approx(oracle::brute_force_sup(p, f, v, 0.0, 1.0)));
        CHECK(hamiltonian_star(spec, 2, 0.0, x, p, q, tie) ==
              doctest::Approx(oracle::brute_force_sup(q, f, u, -1.0, 1.0)));
    }
}

TEST_CASE("hamiltonian_smoothed examples") {
    const ProblemSpec spec = base_problem();
    CHECK(hamiltonian_smoothed(spec, 1, 0.0, 0.0, 1.0, 1.0, SmoothingLevel(4)) == doctest::Approx(2.0));
    CHECK(hamiltonian_smoothed(spec, 1, 0.0, 0.0, 0.0, 3.0, SmoothingLevel(4)) == 0.0);
    CHECK(hamiltonian_smoothed(spec, 1, 0.0, 0.0, 10.0, 10.0, SmoothingLevel(2)) == doctest::Approx(4.0));
    CHECK(hamiltonian_smoothed(spec, 2, 0.0, 0.0, -3.0, 0.0, SmoothingLevel(2)) == 0.0);
}

TEST_CASE("hamiltonian_smoothed agrees with hamiltonian_star where nothing is truncated or ramped") {
    ProblemSpec spec = base_problem();
    spec.drift_base = ConstantDrift{0.3};
    const TiePolicy tie = default_tie(spec);
    StreamEngine rng(19, 0);
    const SmoothingLevel n(64);
    for (int i = 0; i < 2000; ++i) {
        const double z1 = rng.uniform(-10.0, 10.0);
        const double z2 = rng.uniform(-10.0, 10.0);
        if (std::abs(z1) < 1.0 / 64 || std::abs(z2) < 1.0 / 64) continue;
        for (int player : {1, 2}) {
            CHECK(hamiltonian_smoothed(spec, player, 0.0, 0.0, z1, z2, n) ==
                  doctest::Approx(hamiltonian_star(spec, player, 0.0, 0.0, z1, z2, tie)));
        }
    }
}

TEST_CASE("isaacs gap examples") {
    const ProblemSpec spec = base_problem();
    const TiePolicy tie;
    CHECK(isaacs_gap(spec, 0.0, 0.0, 1.0, 1.0, 0.3, 0.0, tie).first == doctest::Approx(0.7));
    CHECK(isaacs_gap(spec, 0.0, 0.0, -1.0, 1.0, 0.0, 0.2, tie).first == 0.0);
    const double p = 2.5, q = -0.7;
    CHECK(isaacs_gap(spec, 0.0, 0.0, p, q, bang_selector(1, p, tie, spec), 0.0, tie).first == 0.0);
    CHECK(isaacs_gap(spec, 0.0, 0.0, p, q, 0.5, bang_selector(2, q, tie, spec), tie).second == 0.0);
    const auto zero = isaacs_gap(spec, 0.0, 0.0, 0.0, 0.0, 0.4, -0.6, tie);
    CHECK(zero.first == 0.0);
    CHECK(zero.second == 0.0);
}
