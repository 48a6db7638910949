#include "nzsdg/config.hpp"

#include <cmath>
#include <initializer_list>
#include <optional>

#include "nzsdg/error.hpp"
#include "nzsdg/io.hpp"
#include "overloaded.hpp"

namespace nzsdg {

using detail::overloaded;

namespace {

std::string escape_pointer_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

// A JSON value together with its pointer, so every schema error can name
// where it happened.
class Node {
public:
    Node(const Json& value, std::string pointer) : value_(value), pointer_(std::move(pointer)) {}

    const std::string& pointer() const { return pointer_; }
    const Json& raw() const { return value_; }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(pointer_.empty() ? "/" : pointer_, message);
    }

    void require_object() const {
        if (!value_.is_object()) fail("expected an object");
    }

    void allow_keys(std::initializer_list<const char*> keys) const {
        require_object();
        for (const auto& item : value_.items()) {
            bool known = false;
            for (const char* key : keys) known = known || item.key() == key;
            if (!known) Node(item.value(), child_pointer(item.key())).fail("unknown key");
        }
    }

    std::optional<Node> find(const char* key) const {
        require_object();
        const auto it = value_.find(key);
        if (it == value_.end()) return std::nullopt;
        return Node(*it, child_pointer(key));
    }

    Node at(const char* key) const {
        auto child = find(key);
        if (!child) Node(value_, child_pointer(key)).fail("missing required key");
        return *child;
    }

    Node index(std::size_t i) const { return Node(value_.at(i), pointer_ + "/" + std::to_string(i)); }

    double number() const {
        if (!value_.is_number()) fail("expected a number");
        return value_.get<double>();
    }

    std::int64_t integer() const {
        if (!value_.is_number_integer()) fail("expected an integer");
        if (value_.is_number_unsigned() && value_.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            fail("integer out of range");
        }
        return value_.get<std::int64_t>();
    }

    int int32() const {
        const auto v = integer();
        if (v < INT32_MIN || v > INT32_MAX) fail("integer out of range");
        return static_cast<int>(v);
    }

    std::uint64_t unsigned64() const {
        if (!value_.is_number_integer()) fail("expected a non-negative integer");
        if (!value_.is_number_unsigned() && value_.get<std::int64_t>() < 0) fail("expected a non-negative integer");
        return value_.get<std::uint64_t>();
    }

    bool boolean() const {
        if (!value_.is_boolean()) fail("expected a boolean");
        return value_.get<bool>();
    }

    std::string string() const {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }

    std::size_t array_size() const {
        if (!value_.is_array()) fail("expected an array");
        return value_.size();
    }

private:
    std::string child_pointer(const std::string& key) const { return pointer_ + "/" + escape_pointer_token(key); }

    const Json& value_;
    std::string pointer_;
};

void read_number(const Node& node, const char* key, double& target) {
    if (auto child = node.find(key)) target = child->number();
}

Interval read_interval(const Node& node) {
    if (node.array_size() != 2) node.fail("expected [lo, hi]");
    return {node.index(0).number(), node.index(1).number()};
}

DriftDescriptor read_drift(const Node& node) {
    const std::string type = node.at("type").string();
    if (type == "constant") {
        node.allow_keys({"type", "kappa"});
        ConstantDrift f;
        read_number(node, "kappa", f.kappa);
        return f;
    }
    if (type == "affine") {
        node.allow_keys({"type", "slope", "intercept"});
        AffineDrift f;
        read_number(node, "slope", f.slope);
        read_number(node, "intercept", f.intercept);
        return f;
    }
    if (type == "sinusoidal") {
        node.allow_keys({"type", "amplitude", "frequency", "offset"});
        SinusoidalDrift f;
        read_number(node, "amplitude", f.amplitude);
        read_number(node, "frequency", f.frequency);
        read_number(node, "offset", f.offset);
        return f;
    }
    node.at("type").fail("unknown drift type '" + type + "'");
}

TerminalDescriptor read_terminal(const Node& node) {
    const std::string type = node.at("type").string();
    if (type == "affine") {
        node.allow_keys({"type", "slope", "intercept"});
        AffineTerminal g;
        read_number(node, "slope", g.slope);
        read_number(node, "intercept", g.intercept);
        return g;
    }
    if (type == "ramp") {
        node.allow_keys({"type", "strike"});
        RampTerminal g;
        read_number(node, "strike", g.strike);
        return g;
    }
    if (type == "power") {
        node.allow_keys({"type", "exponent", "signed"});
        PowerTerminal g;
        read_number(node, "exponent", g.exponent);
        if (auto s = node.find("signed")) g.signed_power = s->boolean();
        return g;
    }
    if (type == "sigmoid") {
        node.allow_keys({"type", "lower", "upper", "steepness", "center"});
        SigmoidTerminal g;
        read_number(node, "lower", g.lower);
        read_number(node, "upper", g.upper);
        read_number(node, "steepness", g.steepness);
        read_number(node, "center", g.center);
        return g;
    }
    node.at("type").fail("unknown terminal type '" + type + "'");
}

DiffusionDescriptor read_diffusion(const Node& node) {
    const std::string type = node.at("type").string();
    if (type == "identity") {
        node.allow_keys({"type"});
        return IdentityDiffusion{};
    }
    if (type == "elliptic") {
        node.allow_keys({"type", "base", "amplitude"});
        EllipticDiffusion s;
        read_number(node, "base", s.base);
        read_number(node, "amplitude", s.amplitude);
        return s;
    }
    node.at("type").fail("unknown diffusion type '" + type + "'");
}

TransformDescriptor read_transform(const Node& node) {
    const std::string type = node.at("type").string();
    if (type == "identity") {
        node.allow_keys({"type"});
        return IdentityTransform{};
    }
    if (type == "affine") {
        node.allow_keys({"type", "scale", "shift"});
        AffineTransform h;
        read_number(node, "scale", h.scale);
        read_number(node, "shift", h.shift);
        return h;
    }
    if (type == "tanh") {
        node.allow_keys({"type", "amplitude", "rate"});
        TanhTransform h;
        read_number(node, "amplitude", h.amplitude);
        read_number(node, "rate", h.rate);
        return h;
    }
    node.at("type").fail("unknown transform type '" + type + "'");
}

ProblemSpec read_problem(const Node& node) {
    node.allow_keys({"horizon", "start_x", "drift", "terminal_1", "terminal_2", "diffusion", "u_interval",
                     "v_interval", "transform_h", "transform_l", "tie_eps1", "tie_eps2"});
    ProblemSpec spec;
    read_number(node, "horizon", spec.horizon);
    read_number(node, "start_x", spec.start_x);
    if (auto c = node.find("drift")) spec.drift_base = read_drift(*c);
    if (auto c = node.find("terminal_1")) spec.terminal_1 = read_terminal(*c);
    if (auto c = node.find("terminal_2")) spec.terminal_2 = read_terminal(*c);
    if (auto c = node.find("diffusion")) spec.diffusion = read_diffusion(*c);
    if (auto c = node.find("u_interval")) spec.u_interval = read_interval(*c);
    if (auto c = node.find("v_interval")) spec.v_interval = read_interval(*c);
    if (auto c = node.find("transform_h")) spec.transform_h = read_transform(*c);
    if (auto c = node.find("transform_l")) spec.transform_l = read_transform(*c);
    if (auto c = node.find("tie_eps1")) spec.tie_eps1 = c->number();
    if (auto c = node.find("tie_eps2")) spec.tie_eps2 = c->number();
    return spec;
}

Json descriptor_json(const DriftDescriptor& f) {
    return std::visit(overloaded{
                          [](const ConstantDrift& d) { return Json{{"type", "constant"}, {"kappa", d.kappa}}; },
                          [](const AffineDrift& d) {
                              return Json{{"type", "affine"}, {"slope", d.slope}, {"intercept", d.intercept}};
                          },
                          [](const SinusoidalDrift& d) {
                              return Json{{"type", "sinusoidal"},
                                          {"amplitude", d.amplitude},
                                          {"frequency", d.frequency},
                                          {"offset", d.offset}};
                          },
                      },
                      f);
}

Json descriptor_json(const TerminalDescriptor& g) {
    return std::visit(overloaded{
                          [](const AffineTerminal& d) {
                              return Json{{"type", "affine"}, {"slope", d.slope}, {"intercept", d.intercept}};
                          },
                          [](const RampTerminal& d) { return Json{{"type", "ramp"}, {"strike", d.strike}}; },
                          [](const PowerTerminal& d) {
                              return Json{{"type", "power"}, {"exponent", d.exponent}, {"signed", d.signed_power}};
                          },
                          [](const SigmoidTerminal& d) {
                              return Json{{"type", "sigmoid"},
                                          {"lower", d.lower},
                                          {"upper", d.upper},
                                          {"steepness", d.steepness},
                                          {"center", d.center}};
                          },
                      },
                      g);
}

Json descriptor_json(const DiffusionDescriptor& s) {
    return std::visit(overloaded{
                          [](const IdentityDiffusion&) { return Json{{"type", "identity"}}; },
                          [](const EllipticDiffusion& d) {
                              return Json{{"type", "elliptic"}, {"base", d.base}, {"amplitude", d.amplitude}};
                          },
                      },
                      s);
}

Json descriptor_json(const TransformDescriptor& h) {
    return std::visit(overloaded{
                          [](const IdentityTransform&) { return Json{{"type", "identity"}}; },
                          [](const AffineTransform& d) {
                              return Json{{"type", "affine"}, {"scale", d.scale}, {"shift", d.shift}};
                          },
                          [](const TanhTransform& d) {
                              return Json{{"type", "tanh"}, {"amplitude", d.amplitude}, {"rate", d.rate}};
                          },
                      },
                      h);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) out += (out.empty() ? "" : "; ") + item;
    return out;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid configuration: " + join(report.violations)), report_(std::move(report)) {}

ProblemSpec problem_from_json(const Json& document) { return read_problem(Node(document, "")); }

Json problem_to_json(const ProblemSpec& spec) {
    Json out{{"horizon", spec.horizon},
             {"start_x", spec.start_x},
             {"drift", descriptor_json(spec.drift_base)},
             {"terminal_1", descriptor_json(spec.terminal_1)},
             {"terminal_2", descriptor_json(spec.terminal_2)},
             {"diffusion", descriptor_json(spec.diffusion)},
             {"u_interval", spec.u_interval},
             {"v_interval", spec.v_interval},
             {"transform_h", descriptor_json(spec.transform_h)},
             {"transform_l", descriptor_json(spec.transform_l)}};
    if (spec.tie_eps1) out["tie_eps1"] = *spec.tie_eps1;
    if (spec.tie_eps2) out["tie_eps2"] = *spec.tie_eps2;
    return out;
}

RunConfig config_from_json(const Json& document) {
    const Node root(document, "");
    root.allow_keys({"problem", "grid", "smoothing", "sim", "verify", "output_dir"});

    RunConfig config;
    config.problem = read_problem(root.at("problem"));
    ValidationReport report = validate_spec(config.problem);
    if (!report.ok) throw ValidationError(std::move(report));

    config.grid = default_grid(config.problem);
    if (auto grid = root.find("grid")) {
        grid->allow_keys({"x_min", "x_max", "nx", "nt"});
        read_number(*grid, "x_min", config.grid.x_min);
        read_number(*grid, "x_max", config.grid.x_max);
        if (auto c = grid->find("nx")) config.grid.nx = c->int32();
        if (auto c = grid->find("nt")) config.grid.nt = c->int32();
    }
    if (auto smoothing = root.find("smoothing")) {
        smoothing->allow_keys({"schedule", "tol"});
        if (auto s = smoothing->find("schedule")) {
            config.smoothing.schedule.clear();
            for (std::size_t i = 0; i < s->array_size(); ++i) config.smoothing.schedule.push_back(s->index(i).int32());
        }
        if (auto tol = smoothing->find("tol")) {
            if (tol->raw().is_string()) {
                if (tol->string() != "inf") tol->fail("expected a number or \"inf\"");
                config.smoothing.tol = std::numeric_limits<double>::infinity();
            } else {
                config.smoothing.tol = tol->number();
            }
        }
    }
    if (auto sim = root.find("sim")) {
        sim->allow_keys({"n_paths", "n_steps", "seed", "mode"});
        if (auto c = sim->find("n_paths")) config.sim.n_paths = c->integer();
        if (auto c = sim->find("n_steps")) config.sim.n_steps = c->int32();
        if (auto c = sim->find("seed")) config.sim.seed = c->unsigned64();
        if (auto c = sim->find("mode")) {
            const std::string mode = c->string();
            if (mode == "strong") {
                config.sim.mode = SimMode::strong;
            } else if (mode == "girsanov") {
                config.sim.mode = SimMode::girsanov;
            } else {
                c->fail("expected \"strong\" or \"girsanov\"");
            }
        }
    }
    if (auto verify = root.find("verify")) {
        verify->allow_keys({"deviations_per_player", "slack", "isaacs_samples"});
        if (auto c = verify->find("deviations_per_player")) config.verify.deviations_per_player = c->int32();
        read_number(*verify, "slack", config.verify.slack);
        if (auto c = verify->find("isaacs_samples")) config.verify.isaacs_samples = c->integer();
    }
    if (auto dir = root.find("output_dir")) config.output_dir = dir->string();

    auto& v = report.violations;
    try {
        check_grid(config.grid, config.problem);
    } catch (const DomainError& e) {
        v.push_back(std::string("grid: ") + e.what());
    }
    const auto& schedule = config.smoothing.schedule;
    if (schedule.empty()) v.push_back("smoothing schedule must not be empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) v.push_back("smoothing levels must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1]) v.push_back("smoothing schedule must be strictly increasing");
    }
    if (!(config.smoothing.tol > 0.0)) v.push_back("smoothing tol must be positive");
    if (config.sim.n_paths < 1) v.push_back("sim n_paths must be >= 1");
    if (config.sim.n_steps < 1) v.push_back("sim n_steps must be >= 1");
    if (config.verify.deviations_per_player < 1) v.push_back("verify deviations_per_player must be >= 1");
    if (!(config.verify.slack >= 0.0) || !std::isfinite(config.verify.slack)) {
        v.push_back("verify slack must be finite and >= 0");
    }
    if (config.verify.isaacs_samples < 1) v.push_back("verify isaacs_samples must be >= 1");
    if (config.output_dir.empty()) v.push_back("output_dir must not be empty");
    if (!v.empty()) {
        report.ok = false;
        throw ValidationError(std::move(report));
    }
    return config;
}

RunConfig parse_config_text(const std::string& text) {
    Json document;
    try {
        document = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("/", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(document);
}

RunConfig parse_config(const std::filesystem::path& path) { return parse_config_text(read_text_file(path)); }

Json to_json(const RunConfig& config) {
    Json smoothing{{"schedule", config.smoothing.schedule}};
    if (std::isinf(config.smoothing.tol)) {
        smoothing["tol"] = "inf";
    } else {
        smoothing["tol"] = config.smoothing.tol;
    }
    return Json{{"problem", problem_to_json(config.problem)},
                {"grid",
                 {{"x_min", config.grid.x_min},
                  {"x_max", config.grid.x_max},
                  {"nx", config.grid.nx},
                  {"nt", config.grid.nt}}},
                {"smoothing", smoothing},
                {"sim", config.sim},
                {"verify",
                 {{"deviations_per_player", config.verify.deviations_per_player},
                  {"slack", config.verify.slack},
                  {"isaacs_samples", config.verify.isaacs_samples}}},
                {"output_dir", config.output_dir.string()}};
}

}  // namespace nzsdg
