#include "cpps/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "cpps/errors.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

using nlohmann::ordered_json;

std::string production_stream_iri() {
    return std::string(vocab::kStreamBase) + "production";
}

std::vector<std::string> ScenarioConfig::problems() const {
    std::vector<std::string> out;
    if (duration_minutes <= 0) out.push_back("duration_minutes must be positive");
    if (cycle_time_minutes <= 0) out.push_back("cycle_time_minutes must be positive");
    if (production_period_minutes < 0)
        out.push_back("production_period_minutes must not be negative");
    if (downtime_probability < 0.0 || downtime_probability > 1.0)
        out.push_back("downtime_probability must lie in [0, 1]");
    if (defect_probability < 0.0 || defect_probability > 1.0)
        out.push_back("defect_probability must lie in [0, 1]");
    if (!downtime_intervals.empty() && downtime_probability > 0.0)
        out.push_back("downtime_intervals and downtime_probability are mutually exclusive");
    if (!defect_indices.empty() && defect_probability > 0.0)
        out.push_back("defect_indices and defect_probability are mutually exclusive");

    std::vector<std::pair<std::int64_t, std::int64_t>> sorted = downtime_intervals;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& [start, end] = sorted[i];
        if (start < 0 || end > duration_minutes || start >= end) {
            out.push_back("downtime interval [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") must lie within [0, " +
                          std::to_string(duration_minutes) + ") with start < end");
            continue;
        }
        if (i > 0 && sorted[i - 1].second > start)
            out.push_back("downtime intervals overlap at minute " + std::to_string(start));
    }
    for (std::int64_t index : defect_indices)
        if (index < 0) out.push_back("defect index " + std::to_string(index) + " is negative");
    return out;
}

namespace {

/// Implementation-pinned uniform draw in [0,1): the generator's top 53 bits.
/// std::bernoulli_distribution is avoided because its draw sequence is not
/// specified, and cross-platform byte-identical runs are a contract here.
double unit_draw(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Integral voltages become exact integer literals so threshold comparisons
/// and counts stay exact; anything else rides as a double literal.
Term level_term(double value) {
    if (value == std::floor(value) && std::abs(value) < 9.0e18)
        return Term::integer_literal(static_cast<std::int64_t>(value));
    return Term::number_literal(Number::from_double(value));
}

} // namespace

SimulationResult simulate(const ScenarioConfig& config, const PlantConfig& plant) {
    std::vector<std::string> issues = config.problems();
    for (const std::string& issue : plant.problems()) issues.push_back(issue);
    if (!issues.empty()) throw ConfigError(issues);

    const SensorConfig& voltage = plant.sensor_of_kind(SensorKind::Voltage);
    const SensorConfig& counter = plant.sensor_of_kind(SensorKind::ProductCounter);
    const SensorConfig& detector = plant.sensor_of_kind(SensorKind::DefectDetector);

    // Down-minute map: explicit intervals, else per-minute draws.
    std::vector<char> down(static_cast<std::size_t>(config.duration_minutes), 0);
    if (!config.downtime_intervals.empty()) {
        for (const auto& [start, end] : config.downtime_intervals)
            for (std::int64_t k = start; k < end; ++k) down[std::size_t(k)] = 1;
    } else if (config.downtime_probability > 0.0) {
        std::mt19937_64 down_rng(config.seed);
        for (char& d : down) d = unit_draw(down_rng) < config.downtime_probability;
    }

    std::mt19937_64 defect_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
    auto is_defective = [&](std::int64_t completion_index) {
        if (!config.defect_indices.empty())
            return std::find(config.defect_indices.begin(), config.defect_indices.end(),
                             completion_index) != config.defect_indices.end();
        return config.defect_probability > 0.0 &&
               unit_draw(defect_rng) < config.defect_probability;
    };

    SimulationResult result;
    result.stream_iri = production_stream_iri();
    ObservationFactory factory;
    const std::int64_t period = config.effective_period();
    std::int64_t operating = 0;

    for (std::int64_t minute = 0; minute < config.duration_minutes; ++minute) {
        const std::int64_t stamp = (minute + 1) * 60000;
        const bool is_down = down[std::size_t(minute)] != 0;

        double level = is_down ? config.down_voltage : config.nominal_voltage;
        for (TimestampedTriple& tt :
             factory.make_observation(voltage.iri, voltage.feature, level_term(level), stamp))
            result.observations.push_back(std::move(tt));

        if (is_down) {
            ++result.truth.down_minutes;
            continue;  // the production clock pauses; progress resumes later
        }
        ++result.truth.operating_minutes;
        ++operating;
        if (operating % period != 0) continue;

        // A product comes off the line at the end of this minute.
        std::int64_t serial = ++result.truth.total_production;
        for (TimestampedTriple& tt : factory.make_observation(
                 counter.iri, counter.feature, Term::integer_literal(serial), stamp))
            result.observations.push_back(std::move(tt));

        if (is_defective(serial - 1)) {
            ++result.truth.defected;
            for (TimestampedTriple& tt : factory.make_observation(
                     detector.iri, detector.feature, Term::integer_literal(serial), stamp))
                result.observations.push_back(std::move(tt));
        }
    }
    return result;
}

ScenarioConfig reference_scenario() {
    ScenarioConfig config;
    config.name = "reference";
    config.downtime_intervals = {{180, 252}, {900, 972}};  // 144 down minutes
    config.production_period_minutes = 27;                 // 1296 / 27 = 48 completions
    config.defect_indices = {5, 20, 35};
    config.seed = 20240816;
    return config;
}

ScenarioConfig perfect_scenario() {
    ScenarioConfig config;
    config.name = "perfect";
    config.duration_minutes = 1200;  // 48 completions at the theoretical pace
    config.seed = 20240816;
    return config;
}

ScenarioConfig scenario_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what(), 1, 1);
    }
    ScenarioConfig config;
    try {
        config.name = doc.value("name", config.name);
        config.duration_minutes = doc.value("duration_minutes", config.duration_minutes);
        for (const auto& pair : doc.value("downtime_intervals", ordered_json::array())) {
            if (!pair.is_array() || pair.size() != 2)
                throw ConfigError({"downtime_intervals entries must be [start, end) pairs"});
            config.downtime_intervals.emplace_back(pair[0].get<std::int64_t>(),
                                                   pair[1].get<std::int64_t>());
        }
        config.downtime_probability =
            doc.value("downtime_probability", config.downtime_probability);
        config.cycle_time_minutes = doc.value("cycle_time_minutes", config.cycle_time_minutes);
        config.production_period_minutes =
            doc.value("production_period_minutes", config.production_period_minutes);
        config.defect_probability = doc.value("defect_probability", config.defect_probability);
        for (const auto& index : doc.value("defect_indices", ordered_json::array()))
            config.defect_indices.push_back(index.get<std::int64_t>());
        config.nominal_voltage = doc.value("nominal_voltage", config.nominal_voltage);
        config.down_voltage = doc.value("down_voltage", config.down_voltage);
        config.seed = doc.value("seed", config.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError({std::string("scenario field error: ") + e.what()});
    }
    std::vector<std::string> issues = config.problems();
    if (!issues.empty()) throw ConfigError(issues);
    return config;
}

std::string scenario_to_json(const ScenarioConfig& config) {
    ordered_json doc;
    doc["name"] = config.name;
    doc["duration_minutes"] = config.duration_minutes;
    doc["downtime_intervals"] = ordered_json::array();
    for (const auto& [start, end] : config.downtime_intervals)
        doc["downtime_intervals"].push_back({start, end});
    doc["downtime_probability"] = config.downtime_probability;
    doc["cycle_time_minutes"] = config.cycle_time_minutes;
    doc["production_period_minutes"] = config.production_period_minutes;
    doc["defect_probability"] = config.defect_probability;
    doc["defect_indices"] = config.defect_indices;
    doc["nominal_voltage"] = config.nominal_voltage;
    doc["down_voltage"] = config.down_voltage;
    doc["seed"] = config.seed;
    return doc.dump(2) + "\n";
}

std::string truth_to_json(const GroundTruth& truth) {
    ordered_json doc;
    doc["down_minutes"] = truth.down_minutes;
    doc["total_production"] = truth.total_production;
    doc["defected"] = truth.defected;
    doc["operating_minutes"] = truth.operating_minutes;
    return doc.dump(2) + "\n";
}

} // namespace cpps
