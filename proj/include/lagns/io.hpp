#pragma once

#include <string>
#include <utility>

#include "lagns/diagnostics.hpp"
#include "lagns/params.hpp"
#include "lagns/state.hpp"

namespace lagns {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

/// Snapshot CSV. Header comment `# t=... n=... mu=... lambda=... R=... cv=... kappa=...`,
/// then `x,v,u,theta,r` with one row per edge: x, u and r are edge values,
/// v and theta belong to the cell to the right of the edge and are empty on
/// the last row.
void write_snapshot(const std::string& path, const FlowState& state, const PhysParams& params);
std::pair<FlowState, PhysParams> read_snapshot(const std::string& path);

void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& series);
DiagnosticsSeries read_diagnostics_csv(const std::string& path);

void write_representation_csv(const std::string& path, const RepresentationResult& repr);

/// Run-level summary as JSON: extremes, energy, residuals and one pass/fail
/// entry per sampled invariant.
void write_summary_json(const std::string& path, const RunSummary& summary, const PhysParams& params);

}  // namespace lagns
