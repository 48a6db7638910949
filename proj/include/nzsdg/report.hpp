#pragma once

// JSON forms of the reports written by the command-line runner. Objects
// are emitted with sorted keys, so equal reports serialize identically.

#include "json.hpp"

#include "nzsdg/mc.hpp"
#include "nzsdg/model.hpp"
#include "nzsdg/pde.hpp"
#include "nzsdg/verify.hpp"

namespace nzsdg {

using Json = nlohmann::json;

void to_json(Json& out, const Interval& interval);
void to_json(Json& out, const ValidationReport& report);
void to_json(Json& out, const GrowthReport& report);
void to_json(Json& out, const SolveDiagnostics& diagnostics);
void to_json(Json& out, const CauchyReport& report);
void to_json(Json& out, const SimConfig& config);
void to_json(Json& out, const PayoffEstimate& estimate);
void to_json(Json& out, const ConsistencyEntry& entry);
void to_json(Json& out, const ConsistencyReport& report);
void to_json(Json& out, const IsaacsReport& report);
void to_json(Json& out, const DeviationRecord& record);
void to_json(Json& out, const VerdictReport& report);

// Two-space indentation plus a trailing newline.
std::string dump_json(const Json& value);

}  // namespace nzsdg
