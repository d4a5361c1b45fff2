#include "cpps/plant.hpp"

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "cpps/errors.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

using nlohmann::ordered_json;

std::string sensor_kind_name(SensorKind kind) {
    switch (kind) {
    case SensorKind::Voltage: return "voltage";
    case SensorKind::ProductCounter: return "product-counter";
    case SensorKind::DefectDetector: return "defect-detector";
    }
    return "voltage";
}

SensorKind sensor_kind_from_name(const std::string& name) {
    if (name == "voltage") return SensorKind::Voltage;
    if (name == "product-counter") return SensorKind::ProductCounter;
    if (name == "defect-detector") return SensorKind::DefectDetector;
    throw ConfigError({"unknown sensor kind: '" + name + "'"});
}

namespace {

bool valid_iri(const std::string& text) {
    if (text.empty()) return false;
    for (char c : text)
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

std::vector<std::string> PlantConfig::problems() const {
    std::vector<std::string> out;
    if (!valid_iri(line_iri)) out.push_back("line IRI is missing or malformed");

    std::set<std::string> hosts;
    std::set<std::string> station_iris;
    std::set<std::string> seen;
    if (valid_iri(line_iri)) seen.insert(line_iri);
    for (const StationConfig& s : stations) {
        if (!valid_iri(s.iri)) {
            out.push_back("station IRI is missing or malformed");
            continue;
        }
        if (!seen.insert(s.iri).second) out.push_back("duplicate IRI: <" + s.iri + ">");
        station_iris.insert(s.iri);
    }

    std::map<SensorKind, int> kind_counts;
    for (const SensorConfig& s : sensors) {
        if (!valid_iri(s.iri)) {
            out.push_back("sensor IRI is missing or malformed");
            continue;
        }
        if (!seen.insert(s.iri).second) out.push_back("duplicate IRI: <" + s.iri + ">");
        ++kind_counts[s.kind];
        bool host_is_line = s.host == line_iri;
        bool host_is_station = station_iris.count(s.host) > 0;
        if (!host_is_line && !host_is_station)
            out.push_back("sensor <" + s.iri + "> host <" + s.host +
                          "> is neither the line nor a station");
        if (!valid_iri(s.feature))
            out.push_back("sensor <" + s.iri + "> feature IRI is missing or malformed");
        switch (s.kind) {
        case SensorKind::Voltage:
            if (!host_is_line)
                out.push_back("voltage sensor <" + s.iri + "> must be hosted by the line");
            break;
        case SensorKind::ProductCounter:
        case SensorKind::DefectDetector:
            if (!host_is_station)
                out.push_back(sensor_kind_name(s.kind) + " <" + s.iri +
                              "> must be hosted by a station");
            break;
        }
    }
    for (SensorKind kind :
         {SensorKind::Voltage, SensorKind::ProductCounter, SensorKind::DefectDetector}) {
        int n = kind_counts.count(kind) ? kind_counts.at(kind) : 0;
        if (n != 1)
            out.push_back("expected exactly one " + sensor_kind_name(kind) + " sensor, found " +
                          std::to_string(n));
    }
    return out;
}

const SensorConfig& PlantConfig::sensor_of_kind(SensorKind kind) const {
    for (const SensorConfig& s : sensors)
        if (s.kind == kind) return s;
    throw ConfigError({"no " + sensor_kind_name(kind) + " sensor configured"});
}

PlantConfig default_plant() {
    const std::string base = vocab::kPlantBase;
    PlantConfig config;
    config.line_iri = base + "ProductionLine";
    config.stations = {
        {base + "WELDING/W1A", "Welding"},     {base + "PAINT/P1A", "Paint"},
        {base + "ASSEMBLY/AP1A", "Assembly"},  {base + "INTEGRITY/IT1A", "Integrity check"},
        {base + "PACKAGING/PK1A", "Packaging"},
    };
    config.sensors = {
        {base + "sensor/LINE-V1", config.line_iri, base + "foi/line-voltage",
         SensorKind::Voltage},
        {base + "sensor/AP1A-C1", base + "ASSEMBLY/AP1A", base + "foi/assembled-product",
         SensorKind::ProductCounter},
        {base + "sensor/IT1A-D1", base + "INTEGRITY/IT1A", base + "foi/defective-product",
         SensorKind::DefectDetector},
    };
    return config;
}

PlantConfig plant_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("plant config is not valid JSON: ") + e.what(), 1, 1);
    }
    PlantConfig config;
    try {
        config.line_iri = doc.at("line").get<std::string>();
        for (const auto& s : doc.value("stations", ordered_json::array()))
            config.stations.push_back(
                {s.at("iri").get<std::string>(), s.value("label", std::string{})});
        for (const auto& s : doc.value("sensors", ordered_json::array()))
            config.sensors.push_back({s.at("iri").get<std::string>(),
                                      s.at("host").get<std::string>(),
                                      s.at("feature").get<std::string>(),
                                      sensor_kind_from_name(s.at("kind").get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError({std::string("plant config field error: ") + e.what()});
    }
    std::vector<std::string> issues = config.problems();
    if (!issues.empty()) throw ConfigError(issues);
    return config;
}

std::string plant_to_json(const PlantConfig& config) {
    ordered_json doc;
    doc["line"] = config.line_iri;
    doc["stations"] = ordered_json::array();
    for (const StationConfig& s : config.stations)
        doc["stations"].push_back({{"iri", s.iri}, {"label", s.label}});
    doc["sensors"] = ordered_json::array();
    for (const SensorConfig& s : config.sensors)
        doc["sensors"].push_back({{"iri", s.iri},
                                  {"host", s.host},
                                  {"feature", s.feature},
                                  {"kind", sensor_kind_name(s.kind)}});
    return doc.dump(2) + "\n";
}

StaticGraph build_asset_graph(const PlantConfig& config) {
    std::vector<std::string> issues = config.problems();
    if (!issues.empty()) throw ConfigError(issues);

    StaticGraph g;
    Term rdf_type = Term::iri(vocab::kRdfType);
    Term platform = Term::iri(vocab::kSosaPlatform);
    g.insert(make_triple(Term::iri(config.line_iri), rdf_type, platform));
    for (const StationConfig& s : config.stations)
        g.insert(make_triple(Term::iri(s.iri), rdf_type, platform));
    for (const SensorConfig& s : config.sensors) {
        Term sensor = Term::iri(s.iri);
        Term feature = Term::iri(s.feature);
        g.insert(make_triple(sensor, rdf_type, Term::iri(vocab::kSosaSensor)));
        g.insert(make_triple(Term::iri(s.host), Term::iri(vocab::kSosaHosts), sensor));
        g.insert(make_triple(sensor, Term::iri(vocab::kSosaObserves), feature));
        g.insert(
            make_triple(feature, rdf_type, Term::iri(vocab::kSosaFeatureOfInterest)));
    }
    return g;
}

std::vector<TimestampedTriple> ObservationFactory::make_observation(
    const std::string& sensor_iri, const std::string& feature_iri, const Term& value,
    std::int64_t t) {
    if (!value.is_literal())
        throw std::invalid_argument("observation result must be a literal");
    Term obs = Term::blank("obs" + std::to_string(counter_++));
    return {
        {make_triple(obs, Term::iri(vocab::kRdfType), Term::iri(vocab::kSosaObservation)), t},
        {make_triple(obs, Term::iri(vocab::kSosaMadeBySensor), Term::iri(sensor_iri)), t},
        {make_triple(obs, Term::iri(vocab::kSosaHasFeatureOfInterest), Term::iri(feature_iri)),
         t},
        {make_triple(obs, Term::iri(vocab::kSosaHasSimpleResult), value), t},
    };
}

} // namespace cpps
