#pragma once

#include <string>
#include <vector>

#include "cpps/engine.hpp"
#include "cpps/pipeline.hpp"

namespace cpps {

/// Emission log, one JSON object per line:
///   {"query": ..., "fire_time_ms": ..., "rows": [{var: {"type", "value",
///   "datatype"?}}], "error"?: ...}
/// "datatype" appears on literals only; "error" only on failed emissions.
/// Identical inputs render byte-identically.
std::string emissions_to_jsonl(const std::vector<Emission>& emissions);

/// Flat CSV view of the same log: query,fire_time_ms,row,var,value,error —
/// one line per bound variable, one line per failed emission.
std::string emissions_to_csv(const std::vector<Emission>& emissions);

/// KPI report with columns fire_time, availability, performance, quality,
/// oee, flags. Values are exact decimal lexicals; a flagged figure renders
/// as null (JSON) / an empty cell (CSV) with the reason under flags.
std::string kpi_report_json(const std::vector<KpiRow>& rows);
std::string kpi_report_csv(const std::vector<KpiRow>& rows);

} // namespace cpps
