#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "nzsdg/config.hpp"

namespace nzsdg {

enum class Command { validate, solve, refine, simulate, verify, oracle };

std::optional<Command> parse_command(std::string_view name);

// Exit codes: verify returns 0 (pass), 1 (violation) or 2 (error); the
// other commands return 0 or 2. Errors are reported on `err`, artifacts
// land in config.output_dir:
//   validate  validation.json
//   solve     solution.csv, diagnostics.json
//   refine    cauchy.json, refined.csv
//   simulate  payoffs.json
//   verify    verdict.json
//   oracle    oracle.json
int run(Command command, const RunConfig& config, std::ostream& err);

}  // namespace nzsdg
