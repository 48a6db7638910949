#include "nzsdg/report.hpp"

namespace nzsdg {

void to_json(Json& out, const Interval& interval) { out = Json::array({interval.lo, interval.hi}); }

void to_json(Json& out, const ValidationReport& report) {
    out = Json{{"ok", report.ok},
               {"violations", report.violations},
               {"drift_growth", report.drift_growth},
               {"terminal_growth",
                {{"constant", report.terminal_growth.constant}, {"exponent", report.terminal_growth.exponent}}},
               {"ellipticity", report.ellipticity},
               {"effective_u", report.effective_u},
               {"effective_v", report.effective_v}};
}

void to_json(Json& out, const GrowthReport& report) {
    out = Json{{"lambda", report.lambda},
               {"bound", report.bound},
               {"max_ratio", report.max_ratio},
               {"within", report.within}};
}

void to_json(Json& out, const SolveDiagnostics& diagnostics) {
    out = Json{{"max_residual", diagnostics.max_residual},
               {"max_courant", diagnostics.max_courant},
               {"max_sign_flips", diagnostics.max_sign_flips},
               {"chatter_warning", diagnostics.chatter_warning},
               {"growth", diagnostics.growth}};
}

void to_json(Json& out, const CauchyReport& report) {
    out = Json{{"levels", report.levels},
               {"gaps", report.gaps},
               {"converged", report.converged},
               {"final_level", report.final_level}};
}

void to_json(Json& out, const SimConfig& config) {
    out = Json{{"n_paths", config.n_paths},
               {"n_steps", config.n_steps},
               {"seed", config.seed},
               {"mode", to_string(config.mode)}};
}

void to_json(Json& out, const PayoffEstimate& estimate) {
    out = Json{{"player", estimate.player},
               {"mean", estimate.mean},
               {"std_err", estimate.std_err},
               {"n_paths", estimate.n_paths},
               {"mode", to_string(estimate.mode)},
               {"heavy_tail_warning", estimate.heavy_tail_warning}};
    out["ess"] = estimate.ess ? Json(*estimate.ess) : Json(nullptr);
}

void to_json(Json& out, const ConsistencyEntry& entry) {
    out = Json{{"player", entry.player},     {"value", entry.value},
               {"mc_mean", entry.mc_mean},   {"std_err", entry.std_err},
               {"discrepancy", entry.discrepancy}, {"bound", entry.bound},
               {"ok", entry.ok}};
}

void to_json(Json& out, const ConsistencyReport& report) {
    out = Json{{"player1", report.player1}, {"player2", report.player2}, {"ok", report.ok}};
}

void to_json(Json& out, const IsaacsReport& report) {
    out = Json{{"samples", report.samples},     {"violations", report.violations},
               {"min_gap1", report.min_gap1},   {"min_gap2", report.min_gap2},
               {"tolerance", report.tolerance}, {"ok", report.ok}};
}

void to_json(Json& out, const DeviationRecord& record) {
    out = Json{{"player", record.player},   {"description", record.description},
               {"gap", record.gap},         {"std_err", record.std_err},
               {"threshold", record.threshold}, {"violates", record.violates}};
}

void to_json(Json& out, const VerdictReport& report) {
    std::size_t violations = 0;
    for (const auto& r : report.records) violations += r.violates ? 1 : 0;
    out = Json{{"case", report.case_name},
               {"pass", report.pass},
               {"violations", violations},
               {"star", Json::array({report.star1, report.star2})},
               {"rule", {{"z", report.z}, {"slack", report.slack}}},
               {"deviations_per_player", report.deviations_per_player},
               {"sim", report.sim},
               {"family_composition", report.family_composition},
               {"records", report.records}};
}

std::string dump_json(const Json& value) { return value.dump(2) + "\n"; }

}  // namespace nzsdg
