#pragma once

// Run configuration: one JSON document with top-level keys
// problem, grid, smoothing, sim, verify, output_dir. Everything except
// problem may be omitted; a missing grid becomes default_grid(problem).

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nzsdg/mc.hpp"
#include "nzsdg/model.hpp"
#include "nzsdg/pde.hpp"
#include "nzsdg/report.hpp"

namespace nzsdg {

struct SmoothingConfig {
    std::vector<int> schedule{8, 16, 32, 64, 128};
    double tol = 1e-3;  // "inf" in JSON for no stopping criterion
    bool operator==(const SmoothingConfig&) const = default;
};

struct VerifyConfig {
    int deviations_per_player = 50;
    double slack = 5e-3;
    std::int64_t isaacs_samples = 100000;
    bool operator==(const VerifyConfig&) const = default;
};

struct RunConfig {
    ProblemSpec problem;
    GridSpec grid;
    SmoothingConfig smoothing;
    SimConfig sim;
    VerifyConfig verify;
    std::filesystem::path output_dir = "nzsdg_out";
    bool operator==(const RunConfig&) const = default;
};

// Invariant violation in an otherwise well-formed document.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// IoError when the file is unreadable, ParseError naming the JSON pointer
// on schema violations, ValidationError when invariants fail.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);
RunConfig config_from_json(const Json& document);

Json to_json(const RunConfig& config);
Json problem_to_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const Json& document);

}  // namespace nzsdg
