#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpps/graph.hpp"
#include "cpps/term.hpp"

namespace cpps {

enum class SensorKind { Voltage, ProductCounter, DefectDetector };

std::string sensor_kind_name(SensorKind kind);
/// Throws ConfigError on an unknown name.
SensorKind sensor_kind_from_name(const std::string& name);

struct StationConfig {
    std::string iri;
    std::string label;
};

struct SensorConfig {
    std::string iri;
    std::string host;     // the line or a station IRI
    std::string feature;  // feature-of-interest IRI
    SensorKind kind = SensorKind::Voltage;
};

/// Asset topology: one production line hosting stations, three sensors.
struct PlantConfig {
    std::string line_iri;
    std::vector<StationConfig> stations;
    std::vector<SensorConfig> sensors;

    /// All invariant violations (empty = valid): hosts must exist, IRIs must
    /// be unique, exactly one line-hosted voltage sensor, the product counter
    /// on the ASSEMBLY station, the defect detector on the INTEGRITY station.
    std::vector<std::string> problems() const;

    const SensorConfig& sensor_of_kind(SensorKind kind) const;
};

/// The shipped five-station line with its three sensors.
PlantConfig default_plant();

/// JSON round-trip for plant files. Loading validates (throws ConfigError
/// with every violation); parse errors throw ParseError.
PlantConfig plant_from_json(const std::string& text);
std::string plant_to_json(const PlantConfig& config);

/// Builds the static asset graph: Platform typings for line and stations;
/// per sensor its Sensor typing, hosts edge, observes edge, and the
/// feature-of-interest typing. Throws ConfigError when invariants fail.
StaticGraph build_asset_graph(const PlantConfig& config);

/// Stamps deterministic observation blank nodes: obs0, obs1, ...
class ObservationFactory {
public:
    /// Four triples at time t: type, madeBySensor, hasFeatureOfInterest,
    /// hasSimpleResult. `value` must be a literal.
    std::vector<TimestampedTriple> make_observation(const std::string& sensor_iri,
                                                    const std::string& feature_iri,
                                                    const Term& value, std::int64_t t);

private:
    std::uint64_t counter_ = 0;
};

} // namespace cpps
