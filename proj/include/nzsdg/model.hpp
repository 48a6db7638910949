#pragma once

// Game instance: coefficients of the controlled state equation
//
//   dX = (f(t,X) + h(u) + l(v)) dt + sigma(t,X) dB,   X_0 = x0,
//
// and the terminal payoffs g_1, g_2. Every coefficient is drawn from a
// closed catalogue so the growth and ellipticity constants are known in
// closed form.

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nzsdg {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double value) const { return lo <= value && value <= hi; }

    bool operator==(const Interval&) const = default;
};

// f(t,x)
struct ConstantDrift {
    double kappa = 0.0;
    bool operator==(const ConstantDrift&) const = default;
};
struct AffineDrift {
    double slope = 0.0;
    double intercept = 0.0;
    bool operator==(const AffineDrift&) const = default;
};
struct SinusoidalDrift {
    double amplitude = 0.0;
    double frequency = 1.0;
    double offset = 0.0;
    bool operator==(const SinusoidalDrift&) const = default;
};
using DriftDescriptor = std::variant<ConstantDrift, AffineDrift, SinusoidalDrift>;

// g_i(x)
struct AffineTerminal {
    double slope = 1.0;
    double intercept = 0.0;
    bool operator==(const AffineTerminal&) const = default;
};
struct RampTerminal {
    double strike = 0.0;
    bool operator==(const RampTerminal&) const = default;
};
// |x|^exponent, or sign(x)|x|^exponent when `signed_power` is set.
struct PowerTerminal {
    double exponent = 2.0;
    bool signed_power = false;
    bool operator==(const PowerTerminal&) const = default;
};
// lower + (upper - lower) / (1 + exp(-steepness (x - center)))
struct SigmoidTerminal {
    double lower = 0.0;
    double upper = 1.0;
    double steepness = 1.0;
    double center = 0.0;
    bool operator==(const SigmoidTerminal&) const = default;
};
using TerminalDescriptor =
    std::variant<AffineTerminal, RampTerminal, PowerTerminal, SigmoidTerminal>;

// sigma(t,x)
struct IdentityDiffusion {
    bool operator==(const IdentityDiffusion&) const = default;
};
// base + amplitude * sin(x); elliptic iff base - |amplitude| > 0.
struct EllipticDiffusion {
    double base = 1.0;
    double amplitude = 0.0;
    bool operator==(const EllipticDiffusion&) const = default;
};
using DiffusionDescriptor = std::variant<IdentityDiffusion, EllipticDiffusion>;

// h and l. All members are strictly monotone.
struct IdentityTransform {
    bool operator==(const IdentityTransform&) const = default;
};
struct AffineTransform {
    double scale = 1.0;
    double shift = 0.0;
    bool operator==(const AffineTransform&) const = default;
};
// amplitude * tanh(rate * u)
struct TanhTransform {
    double amplitude = 1.0;
    double rate = 1.0;
    bool operator==(const TanhTransform&) const = default;
};
using TransformDescriptor = std::variant<IdentityTransform, AffineTransform, TanhTransform>;

struct ProblemSpec {
    double horizon = 1.0;
    double start_x = 0.0;
    DriftDescriptor drift_base = ConstantDrift{};
    TerminalDescriptor terminal_1 = AffineTerminal{};
    TerminalDescriptor terminal_2 = AffineTerminal{};
    DiffusionDescriptor diffusion = IdentityDiffusion{};
    Interval u_interval{0.0, 1.0};
    Interval v_interval{-1.0, 1.0};
    TransformDescriptor transform_h = IdentityTransform{};
    TransformDescriptor transform_l = IdentityTransform{};
    // Control values used where a gradient is exactly zero, expressed in
    // effective (transformed) coordinates. Unset means the default rule:
    // 0 when the effective interval contains 0, its midpoint otherwise.
    std::optional<double> tie_eps1;
    std::optional<double> tie_eps2;

    bool operator==(const ProblemSpec&) const = default;
};

// Constants of the bound |g(x)| <= C (1 + |x|^gamma).
struct PolynomialGrowth {
    double constant = 0.0;
    double exponent = 1.0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    double drift_growth = 0.0;         // C with |f(t,x)| <= C (1 + |x|)
    PolynomialGrowth terminal_growth;  // for |g_1| + |g_2|
    double ellipticity = 0.0;          // Upsilon with Upsilon <= sigma^2 <= 1/Upsilon
    Interval effective_u;
    Interval effective_v;
};

ValidationReport validate_spec(const ProblemSpec& spec);

// Raw-control drift f(t,x) + h(u) + l(v). Throws DomainError when u is not
// in u_interval or v not in v_interval.
double drift(const ProblemSpec& spec, double t, double x, double u, double v);

// Same drift in effective coordinates: f(t,x) + u_eff + v_eff.
double effective_drift(const ProblemSpec& spec, double t, double x, double u_eff, double v_eff);

double drift_base_value(const ProblemSpec& spec, double t, double x);
double terminal(const ProblemSpec& spec, int player, double x);
double terminal_value(const TerminalDescriptor& g, double x);
double diffusion_value(const ProblemSpec& spec, double t, double x);
double transform_value(const TransformDescriptor& transform, double argument);

// Upper bound of sigma over all (t,x).
double diffusion_sup(const ProblemSpec& spec);

// (h(U), l(V)) with endpoints in ascending order.
std::pair<Interval, Interval> effective_control_intervals(const ProblemSpec& spec);

PolynomialGrowth terminal_growth(const TerminalDescriptor& g);
double drift_growth_constant(const DriftDescriptor& f);
double ellipticity_constant(const DiffusionDescriptor& sigma);

bool is_nondecreasing(const TerminalDescriptor& g);
bool is_strictly_increasing(const TerminalDescriptor& g);
bool is_constant(const TerminalDescriptor& g);

// The base game: T = 1, x0 = 0, f = 0, unit diffusion, U = [0,1],
// V = [-1,1], identity transforms, g_1 = g_2 = x.
ProblemSpec base_problem();

}  // namespace nzsdg
