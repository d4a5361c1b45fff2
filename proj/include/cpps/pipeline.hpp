#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cpps/engine.hpp"
#include "cpps/kpi.hpp"
#include "cpps/plant.hpp"
#include "cpps/query_ast.hpp"
#include "cpps/simulator.hpp"

namespace cpps {

/// The two forms of the six-query OEE pipeline.
///
/// Conformance is a fixed listing corpus exercising the registration dialect
/// end to end, kept verbatim. Its WHERE clauses treat ?voltage / ?product /
/// ?defect as feature-of-interest instances and then filter them numerically,
/// which no data shape can satisfy — it parses and registers cleanly, but a
/// numeric filter over an IRI fails at fire time, and the engine reports that
/// type error instead of silently patching the query. Executable is the
/// semantically equivalent set over the canonical observation shape
/// (Observation -> madeBySensor -> hosted platform, value via
/// hasSimpleResult), preserving thresholds, constants, and window specs.
enum class PipelineMode { Conformance, Executable };

/// Knobs of the executable pipeline. Defaults are the canonical constants —
/// a 1440-minute total time backing a 24h window stepped by 1m, the
/// 25-minute theoretical cycle, the 5V down threshold — over the default
/// plant's platform IRIs.
struct PipelineParams {
    std::int64_t total_time_minutes = 1440;
    std::int64_t cycle_time_minutes = 25;
    std::int64_t voltage_threshold = 5;
    Duration range{86'400'000};
    Duration step{60'000};
    Duration compute_every{86'400'000};
    std::string production_stream;
    std::string line_iri;
    std::string assembly_platform_iri;
    std::string integrity_platform_iri;

    static PipelineParams defaults();

    /// Sizes the window and total time to the scenario's duration (one fire
    /// at the very end) and takes pace and platforms from the configs.
    static PipelineParams for_scenario(const ScenarioConfig& scenario,
                                       const PlantConfig& plant);
};

/// The conformance pipeline text (six REGISTER blocks).
const std::string& conformance_pipeline_text();

/// Renders the executable pipeline's query text for the given parameters.
std::string executable_pipeline_text(const PipelineParams& params);

/// Parses the chosen pipeline: six queries, five Stream + one Query, in
/// registration (topological) order.
std::vector<RegisteredQuery> load_pipeline(PipelineMode mode,
                                           const PipelineParams& params = PipelineParams::defaults());

/// Topological order of `queries` under stream dependencies: a query reading
/// <stream_base + name> depends on the listed query of that name; all other
/// sources are external inputs. Returns indices into `queries`. Throws
/// EngineError on duplicate names or a dependency cycle (message carries the
/// cycle path).
std::vector<std::size_t> dependency_order(const std::vector<RegisteredQuery>& queries,
                                          const std::string& stream_base);

/// Human-readable dependency DAG and fire schedule for a query list.
std::string explain_queries(const std::vector<RegisteredQuery>& queries,
                            const std::string& stream_base);

/// One full simulate-register-replay cycle plus the closed-form oracle.
struct PipelineRun {
    GroundTruth truth;
    std::vector<Emission> emissions;
    KpiValues engine;  // from the final emissions
    KpiValues oracle;  // from the ground truth
};

/// Runs the executable pipeline over one simulated scenario and returns both
/// KPI quadruples. Throws ConfigError when the scenario's voltages do not
/// straddle the threshold (the oracle's downtime count would silently
/// disagree with the query's).
PipelineRun run_pipeline(const PlantConfig& plant, const ScenarioConfig& scenario);

/// KPI quadruples per fire time, extracted from an emission log. A missing
/// or failed emission becomes a flagged figure, never a crash.
struct KpiRow {
    std::int64_t fire_time = 0;
    KpiValues values;
};
std::vector<KpiRow> kpi_rows(const std::vector<Emission>& emissions);

} // namespace cpps
