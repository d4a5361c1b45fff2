#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpps/plant.hpp"
#include "cpps/term.hpp"

namespace cpps {

/// One simulated day (or an arbitrary span) of line behavior. Downtime comes
/// either from explicit [start, end) minute intervals or from a per-minute
/// probability — never both. Completions are paced by the cumulative
/// operating time: one product per `cycle_time_minutes` of uptime, unless
/// `production_period_minutes` overrides the pace (slower or faster than the
/// theoretical cycle, which is what moves performance off 1.0). Defects are
/// drawn per completed product, or pinned exactly via `defect_indices`.
struct ScenarioConfig {
    std::string name = "custom";
    std::int64_t duration_minutes = 1440;
    std::vector<std::pair<std::int64_t, std::int64_t>> downtime_intervals;
    double downtime_probability = 0.0;
    std::int64_t cycle_time_minutes = 25;
    std::int64_t production_period_minutes = 0;  // 0 = use cycle_time_minutes
    double defect_probability = 0.0;
    std::vector<std::int64_t> defect_indices;  // 0-based completion ordinals
    double nominal_voltage = 12.0;
    double down_voltage = 0.0;
    std::uint64_t seed = 0;

    /// All invariant violations (empty = valid).
    std::vector<std::string> problems() const;

    /// Minutes of uptime between completions.
    std::int64_t effective_period() const {
        return production_period_minutes > 0 ? production_period_minutes : cycle_time_minutes;
    }
};

/// Exact tallies recorded while generating events; the KPI oracle works from
/// these, never from the engine.
struct GroundTruth {
    std::int64_t down_minutes = 0;
    std::int64_t total_production = 0;
    std::int64_t defected = 0;
    std::int64_t operating_minutes = 0;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// Everything the simulator hands to the engine: one raw input stream of
/// interleaved sensor observations, time-ordered and push-ready.
struct SimulationResult {
    std::string stream_iri;
    std::vector<TimestampedTriple> observations;
    GroundTruth truth;
};

/// The raw input stream the pipeline reads: every sensor publishes here and
/// queries discriminate by the hosting platform.
std::string production_stream_iri();

/// Generates the full event list up front (pure; replay is driven by the
/// engine clock). Minute k's events are stamped at its end, (k+1)*60000 ms,
/// so a window of N minutes anchored at N*60000 holds exactly minutes 0..N-1.
/// Deterministic: downtime draws come from mt19937_64(seed), defect draws
/// from mt19937_64(seed ^ 0x9E3779B97F4A7C15), each consumed as the top 53
/// bits mapped to [0,1). Throws ConfigError on invalid scenario or plant.
SimulationResult simulate(const ScenarioConfig& config, const PlantConfig& plant);

/// The worked example: 144 down minutes in two blocks, a 27-minute actual
/// pace against the 25-minute theoretical cycle (48 completions), and three
/// pinned defects. KPIs land on 0.9 * 25/27 * 0.9375 = 0.78125 exactly.
ScenarioConfig reference_scenario();

/// A shorter flawless day: no downtime, pace equal to the cycle, no defects;
/// every KPI is exactly 1.
ScenarioConfig perfect_scenario();

/// JSON round-trip for scenario files. Loading validates (throws ConfigError
/// with every violation); parse errors throw ParseError.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& config);

std::string truth_to_json(const GroundTruth& truth);

} // namespace cpps
