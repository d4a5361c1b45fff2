#include <doctest.h>

#include "cpps/errors.hpp"
#include "cpps/graph.hpp"
#include "cpps/plant.hpp"
#include "cpps/vocab.hpp"

using namespace cpps;

TEST_CASE("sensor kind names round-trip") {
    for (SensorKind kind :
         {SensorKind::Voltage, SensorKind::ProductCounter, SensorKind::DefectDetector})
        CHECK(sensor_kind_from_name(sensor_kind_name(kind)) == kind);
    CHECK_THROWS_AS(sensor_kind_from_name("thermometer"), ConfigError);
}

TEST_CASE("the default plant is valid and fully wired") {
    PlantConfig plant = default_plant();
    CHECK(plant.problems().empty());
    CHECK(plant.stations.size() == 5);
    CHECK(plant.sensors.size() == 3);

    const SensorConfig& voltage = plant.sensor_of_kind(SensorKind::Voltage);
    CHECK(voltage.host == plant.line_iri);
    const SensorConfig& counter = plant.sensor_of_kind(SensorKind::ProductCounter);
    CHECK(counter.host == "http://cpps.example/plant/ASSEMBLY/AP1A");
    const SensorConfig& defect = plant.sensor_of_kind(SensorKind::DefectDetector);
    CHECK(defect.host == "http://cpps.example/plant/INTEGRITY/IT1A");
}

TEST_CASE("plant validation collects every violation") {
    PlantConfig plant = default_plant();

    SUBCASE("duplicate IRIs") {
        plant.stations[1].iri = plant.stations[0].iri;
        std::vector<std::string> issues = plant.problems();
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("duplicate IRI") != std::string::npos);
    }
    SUBCASE("host must exist") {
        plant.sensors[1].host = "http://cpps.example/plant/GHOST";
        std::vector<std::string> issues = plant.problems();
        // Unknown host and, because the counter is no longer on a station,
        // the placement rule both fire.
        CHECK(issues.size() == 2);
        CHECK(issues[0].find("neither the line nor a station") != std::string::npos);
    }
    SUBCASE("voltage sensor belongs on the line") {
        plant.sensors[0].host = plant.stations[0].iri;
        std::vector<std::string> issues = plant.problems();
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("must be hosted by the line") != std::string::npos);
    }
    SUBCASE("counter belongs on a station") {
        plant.sensors[1].host = plant.line_iri;
        std::vector<std::string> issues = plant.problems();
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("must be hosted by a station") != std::string::npos);
    }
    SUBCASE("exactly one sensor of each kind") {
        plant.sensors.pop_back();  // drop the defect detector
        plant.sensors.push_back(plant.sensors[0]);
        plant.sensors.back().iri += "-copy";
        std::vector<std::string> issues = plant.problems();
        CHECK(issues.size() == 2);
        CHECK(issues[0].find("exactly one voltage sensor, found 2") != std::string::npos);
        CHECK(issues[1].find("exactly one defect-detector sensor, found 0") !=
              std::string::npos);
    }
    SUBCASE("missing sensor lookup throws") {
        plant.sensors.clear();
        CHECK_THROWS_AS(plant.sensor_of_kind(SensorKind::Voltage), ConfigError);
    }
    SUBCASE("malformed IRIs") {
        plant.line_iri = "not an iri";
        plant.sensors[2].feature = "";
        std::vector<std::string> issues = plant.problems();
        // Losing the line IRI also orphans the voltage sensor's host.
        CHECK(issues.size() >= 3);
    }
}

TEST_CASE("plant JSON round-trips and rejects malformed input") {
    PlantConfig plant = default_plant();
    std::string json = plant_to_json(plant);
    PlantConfig reloaded = plant_from_json(json);
    CHECK(plant_to_json(reloaded) == json);
    CHECK(reloaded.stations[3].label == "Integrity check");

    CHECK_THROWS_AS(plant_from_json("{ not json"), ParseError);
    CHECK_THROWS_AS(plant_from_json("{}"), ConfigError);  // no line field
    CHECK_THROWS_AS(plant_from_json(R"({"line": "http://x/l", "sensors": [
        {"iri": "http://x/s", "host": "http://x/l", "feature": "http://x/f",
         "kind": "thermometer"}]})"),
                    ConfigError);

    // Structurally sound JSON with a broken topology reports the violations.
    try {
        plant_from_json(R"({"line": "http://x/l", "sensors": [
            {"iri": "http://x/s", "host": "http://x/nowhere", "feature": "http://x/f",
             "kind": "voltage"}]})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues().size() >= 2);  // bad host + missing counter/detector
    }
}

TEST_CASE("the asset graph carries the full topology") {
    PlantConfig plant = default_plant();
    StaticGraph graph = build_asset_graph(plant);

    // line + 5 stations typed Platform, and per sensor: Sensor typing, hosts,
    // observes, plus the feature-of-interest typing.
    CHECK(graph.size() == 18);

    Term rdf_type = Term::iri(vocab::kRdfType);
    CHECK(!graph.match({Term::iri(plant.line_iri), rdf_type,
                        Term::iri(vocab::kSosaPlatform)}).empty());

    // hosts edges point from host to sensor.
    const SensorConfig& counter = plant.sensor_of_kind(SensorKind::ProductCounter);
    CHECK(!graph.match({Term::iri(counter.host), Term::iri(vocab::kSosaHosts),
                        Term::iri(counter.iri)}).empty());

    std::vector<Bindings> sensors =
        graph.match({Term::variable("s"), rdf_type, Term::iri(vocab::kSosaSensor)});
    CHECK(sensors.size() == 3);

    SUBCASE("an invalid config refuses to build") {
        plant.sensors[0].host = "http://cpps.example/plant/GHOST";
        CHECK_THROWS_AS(build_asset_graph(plant), ConfigError);
    }
}

TEST_CASE("observations stamp four triples with deterministic blank labels") {
    PlantConfig plant = default_plant();
    const SensorConfig& voltage = plant.sensor_of_kind(SensorKind::Voltage);

    ObservationFactory factory;
    std::vector<TimestampedTriple> first =
        factory.make_observation(voltage.iri, voltage.feature, Term::integer_literal(12), 60000);
    std::vector<TimestampedTriple> second =
        factory.make_observation(voltage.iri, voltage.feature, Term::integer_literal(0), 120000);

    REQUIRE(first.size() == 4);
    for (const TimestampedTriple& tt : first) {
        CHECK(tt.timestamp == 60000);
        CHECK(tt.triple.subject == Term::blank("obs0"));
    }
    CHECK(second[0].triple.subject == Term::blank("obs1"));

    CHECK(first[0].triple.predicate == Term::iri(vocab::kRdfType));
    CHECK(first[0].triple.object == Term::iri(vocab::kSosaObservation));
    CHECK(first[1].triple.predicate == Term::iri(vocab::kSosaMadeBySensor));
    CHECK(first[1].triple.object == Term::iri(voltage.iri));
    CHECK(first[2].triple.predicate == Term::iri(vocab::kSosaHasFeatureOfInterest));
    CHECK(first[3].triple.predicate == Term::iri(vocab::kSosaHasSimpleResult));
    CHECK(first[3].triple.object == Term::integer_literal(0 + 12));

    CHECK_THROWS_AS(factory.make_observation(voltage.iri, voltage.feature,
                                             Term::iri("http://x/not-a-literal"), 0),
                    std::invalid_argument);
}

TEST_CASE("asset graph and observations join through sosa:hosts") {
    // The downstream queries navigate observation -> sensor -> host, so the
    // static topology and the streamed observations must unify on the sensor.
    PlantConfig plant = default_plant();
    StaticGraph graph = build_asset_graph(plant);
    const SensorConfig& voltage = plant.sensor_of_kind(SensorKind::Voltage);

    ObservationFactory factory;
    for (const TimestampedTriple& tt :
         factory.make_observation(voltage.iri, voltage.feature, Term::integer_literal(3), 60000))
        graph.insert(tt.triple);

    Term rdf_type = Term::iri(vocab::kRdfType);
    std::vector<Bindings> rows =
        graph.match({Term::variable("obs"), rdf_type, Term::iri(vocab::kSosaObservation)});
    REQUIRE(rows.size() == 1);
    rows = graph.match({Term::variable("obs"), Term::iri(vocab::kSosaMadeBySensor),
                        Term::variable("sensor")},
                       rows[0]);
    REQUIRE(rows.size() == 1);
    rows = graph.match({Term::variable("host"), Term::iri(vocab::kSosaHosts),
                        Term::variable("sensor")},
                       rows[0]);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("host") == Term::iri(plant.line_iri));
    rows = graph.match({Term::variable("obs"), Term::iri(vocab::kSosaHasSimpleResult),
                        Term::variable("value")},
                       rows[0]);
    REQUIRE(rows.size() == 1);
    CHECK(numeric_value(rows[0].at("value")) == Number::from_int(3));
}
