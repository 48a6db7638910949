#include "nzsdg/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nzsdg/error.hpp"
#include "overloaded.hpp"

namespace nzsdg {

using detail::overloaded;

namespace {

std::string format_number(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

bool transform_is_degenerate(const TransformDescriptor& transform) {
    return std::visit(overloaded{
                          [](const IdentityTransform&) { return false; },
                          [](const AffineTransform& a) { return !(a.scale != 0.0) || !std::isfinite(a.shift); },
                          [](const TanhTransform& a) { return !(a.amplitude != 0.0) || !(a.rate != 0.0); },
                      },
                      transform);
}

Interval image(const TransformDescriptor& transform, const Interval& domain) {
    const double a = transform_value(transform, domain.lo);
    const double b = transform_value(transform, domain.hi);
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

double transform_value(const TransformDescriptor& transform, double argument) {
    return std::visit(overloaded{
                          [&](const IdentityTransform&) { return argument; },
                          [&](const AffineTransform& a) { return a.scale * argument + a.shift; },
                          [&](const TanhTransform& a) { return a.amplitude * std::tanh(a.rate * argument); },
                      },
                      transform);
}

double drift_base_value(const ProblemSpec& spec, double /*t*/, double x) {
    return std::visit(overloaded{
                          [](const ConstantDrift& f) { return f.kappa; },
                          [&](const AffineDrift& f) { return f.slope * x + f.intercept; },
                          [&](const SinusoidalDrift& f) {
                              return f.amplitude * std::sin(f.frequency * x) + f.offset;
                          },
                      },
                      spec.drift_base);
}

double terminal_value(const TerminalDescriptor& g, double x) {
    return std::visit(overloaded{
                          [&](const AffineTerminal& a) { return a.slope * x + a.intercept; },
                          [&](const RampTerminal& r) { return std::max(x - r.strike, 0.0); },
                          [&](const PowerTerminal& p) {
                              const double magnitude = std::pow(std::abs(x), p.exponent);
                              if (!p.signed_power) return magnitude;
                              return x < 0.0 ? -magnitude : magnitude;
                          },
                          [&](const SigmoidTerminal& s) {
                              return s.lower + (s.upper - s.lower) / (1.0 + std::exp(-s.steepness * (x - s.center)));
                          },
                      },
                      g);
}

double terminal(const ProblemSpec& spec, int player, double x) {
    if (player != 1 && player != 2) throw DomainError("player must be 1 or 2");
    return terminal_value(player == 1 ? spec.terminal_1 : spec.terminal_2, x);
}

double diffusion_value(const ProblemSpec& spec, double /*t*/, double x) {
    return std::visit(overloaded{
                          [](const IdentityDiffusion&) { return 1.0; },
                          [&](const EllipticDiffusion& s) { return s.base + s.amplitude * std::sin(x); },
                      },
                      spec.diffusion);
}

double diffusion_sup(const ProblemSpec& spec) {
    return std::visit(overloaded{
                          [](const IdentityDiffusion&) { return 1.0; },
                          [](const EllipticDiffusion& s) { return s.base + std::abs(s.amplitude); },
                      },
                      spec.diffusion);
}

std::pair<Interval, Interval> effective_control_intervals(const ProblemSpec& spec) {
    return {image(spec.transform_h, spec.u_interval), image(spec.transform_l, spec.v_interval)};
}

double drift(const ProblemSpec& spec, double t, double x, double u, double v) {
    if (!spec.u_interval.contains(u)) {
        throw DomainError("control u = " + format_number(u) + " outside U");
    }
    if (!spec.v_interval.contains(v)) {
        throw DomainError("control v = " + format_number(v) + " outside V");
    }
    return drift_base_value(spec, t, x) + transform_value(spec.transform_h, u) +
           transform_value(spec.transform_l, v);
}

double effective_drift(const ProblemSpec& spec, double t, double x, double u_eff, double v_eff) {
    return drift_base_value(spec, t, x) + u_eff + v_eff;
}

double drift_growth_constant(const DriftDescriptor& f) {
    return std::visit(overloaded{
                          [](const ConstantDrift& c) { return std::abs(c.kappa); },
                          [](const AffineDrift& a) { return std::max(std::abs(a.slope), std::abs(a.intercept)); },
                          [](const SinusoidalDrift& s) { return std::abs(s.amplitude) + std::abs(s.offset); },
                      },
                      f);
}

PolynomialGrowth terminal_growth(const TerminalDescriptor& g) {
    return std::visit(
        overloaded{
            [](const AffineTerminal& a) {
                return PolynomialGrowth{std::max(std::abs(a.slope), std::abs(a.intercept)), 1.0};
            },
            // max(x - K, 0) <= |x| + |K|
            [](const RampTerminal& r) { return PolynomialGrowth{std::max(1.0, std::abs(r.strike)), 1.0}; },
            // |x|^p <= 1 + |x|^max(p,1)
            [](const PowerTerminal& p) { return PolynomialGrowth{1.0, std::max(1.0, p.exponent)}; },
            [](const SigmoidTerminal& s) {
                return PolynomialGrowth{std::max(std::abs(s.lower), std::abs(s.upper)), 1.0};
            },
        },
        g);
}

double ellipticity_constant(const DiffusionDescriptor& sigma) {
    return std::visit(overloaded{
                          [](const IdentityDiffusion&) { return 1.0; },
                          [](const EllipticDiffusion& s) {
                              const double lower = s.base - std::abs(s.amplitude);
                              const double upper = s.base + std::abs(s.amplitude);
                              if (!(lower > 0.0)) return 0.0;
                              return std::min(lower * lower, 1.0 / (upper * upper));
                          },
                      },
                      sigma);
}

bool is_nondecreasing(const TerminalDescriptor& g) {
    return std::visit(overloaded{
                          [](const AffineTerminal& a) { return a.slope >= 0.0; },
                          [](const RampTerminal&) { return true; },
                          [](const PowerTerminal& p) { return p.signed_power || p.exponent == 0.0; },
                          [](const SigmoidTerminal& s) { return (s.upper - s.lower) * s.steepness >= 0.0; },
                      },
                      g);
}

bool is_strictly_increasing(const TerminalDescriptor& g) {
    return std::visit(overloaded{
                          [](const AffineTerminal& a) { return a.slope > 0.0; },
                          [](const RampTerminal&) { return false; },
                          [](const PowerTerminal& p) { return p.signed_power && p.exponent > 0.0; },
                          [](const SigmoidTerminal& s) { return (s.upper - s.lower) * s.steepness > 0.0; },
                      },
                      g);
}

bool is_constant(const TerminalDescriptor& g) {
    return std::visit(overloaded{
                          [](const AffineTerminal& a) { return a.slope == 0.0; },
                          [](const RampTerminal&) { return false; },
                          [](const PowerTerminal& p) { return !p.signed_power && p.exponent == 0.0; },
                          [](const SigmoidTerminal& s) { return s.upper == s.lower || s.steepness == 0.0; },
                      },
                      g);
}

ValidationReport validate_spec(const ProblemSpec& spec) {
    ValidationReport report;
    auto fail = [&](std::string message) { report.violations.push_back(std::move(message)); };

    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) fail("horizon must be positive");
    if (!std::isfinite(spec.start_x)) fail("start_x must be finite");
    if (!(spec.u_interval.lo < spec.u_interval.hi)) fail("u_interval requires u_lo < u_hi");
    if (!(spec.v_interval.lo < spec.v_interval.hi)) fail("v_interval requires v_lo < v_hi");
    if (transform_is_degenerate(spec.transform_h)) fail("transform_h is not strictly monotone");
    if (transform_is_degenerate(spec.transform_l)) fail("transform_l is not strictly monotone");

    for (int player : {1, 2}) {
        const auto& g = player == 1 ? spec.terminal_1 : spec.terminal_2;
        if (const auto* p = std::get_if<PowerTerminal>(&g); p && !(p->exponent > 0.0)) {
            fail("terminal_" + std::to_string(player) + " power exponent must be positive");
        }
    }

    report.ellipticity = ellipticity_constant(spec.diffusion);
    if (const auto* s = std::get_if<EllipticDiffusion>(&spec.diffusion)) {
        const double lower = s->base - std::abs(s->amplitude);
        if (!(lower > 0.0)) {
            fail("ellipticity lower bound <= 0: base - |amplitude| = " + format_number(lower));
        }
    }

    report.drift_growth = drift_growth_constant(spec.drift_base);
    const auto g1 = terminal_growth(spec.terminal_1);
    const auto g2 = terminal_growth(spec.terminal_2);
    report.terminal_growth.exponent = std::max(g1.exponent, g2.exponent);
    // 1 + |x|^a <= 2 (1 + |x|^b) when a <= b
    const double w1 = g1.exponent == report.terminal_growth.exponent ? 1.0 : 2.0;
    const double w2 = g2.exponent == report.terminal_growth.exponent ? 1.0 : 2.0;
    report.terminal_growth.constant = w1 * g1.constant + w2 * g2.constant;

    const auto [u_eff, v_eff] = effective_control_intervals(spec);
    report.effective_u = u_eff;
    report.effective_v = v_eff;
    if (spec.tie_eps1 && !u_eff.contains(*spec.tie_eps1)) fail("tie_eps1 must lie in h(U)");
    if (spec.tie_eps2 && !v_eff.contains(*spec.tie_eps2)) fail("tie_eps2 must lie in l(V)");

    report.ok = report.violations.empty();
    return report;
}

ProblemSpec base_problem() { return ProblemSpec{}; }

}  // namespace nzsdg
