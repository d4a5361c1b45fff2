#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "cpps/errors.hpp"
#include "cpps/pipeline.hpp"
#include "cpps/query_parser.hpp"
#include "cpps/report.hpp"
#include "cpps/turtle.hpp"
#include "cpps/validate.hpp"

using namespace cpps;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing fixture: ", path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("the conformance pipeline is six queries, five streams one query") {
    std::vector<RegisteredQuery> queries = load_pipeline(PipelineMode::Conformance);
    REQUIRE(queries.size() == 6);
    int streams = 0;
    for (const RegisteredQuery& q : queries)
        if (q.kind == QueryKind::Stream) ++streams;
    CHECK(streams == 5);
    CHECK(queries[5].name == "OEE");
    CHECK(queries[5].kind == QueryKind::Query);

    for (const RegisteredQuery& q : queries) {
        CHECK(q.compute_every == Duration{86'400'000});
        for (const StreamSource& s : q.sources) {
            CHECK(s.range == Duration{86'400'000});
            CHECK(s.step == Duration{60'000});
        }
    }

    // The embedded text and the shipped fixture must never drift apart.
    CHECK(conformance_pipeline_text() == read_file(std::string(CPPS_DATA_DIR) +
                                                   "/queries/listings-conformance.rq"));
}

TEST_CASE("the executable pipeline validates with zero diagnostics") {
    PipelineParams params = PipelineParams::defaults();
    std::vector<RegisteredQuery> queries = load_pipeline(PipelineMode::Executable, params);
    REQUIRE(queries.size() == 6);

    StreamCatalog catalog;
    catalog.add_raw(params.production_stream);
    for (const RegisteredQuery& q : queries) {
        for (const Diagnostic& d : validate_query(q, catalog)) {
            CAPTURE(q.name);
            CAPTURE(d.message);
            CHECK(d.code.empty());  // any diagnostic fails the test visibly
        }
        catalog.add_query_output(q, "http://cpps.example/stream/");
    }

    // Constants survive into the text: threshold, total time, cycle.
    std::string text = executable_pipeline_text(params);
    CHECK(text.find("?voltage < 5") != std::string::npos);
    CHECK(text.find("(1440 - ?downTime) / 1440") != std::string::npos);
    CHECK(text.find("25 * ?total") != std::string::npos);
    CHECK(text.find("RANGE 1d STEP 1m") != std::string::npos);

    SUBCASE("scenario-sized parameters re-aim the constants") {
        PipelineParams scaled = PipelineParams::for_scenario(perfect_scenario(), default_plant());
        std::string scaled_text = executable_pipeline_text(scaled);
        CHECK(scaled_text.find("(1200 - ?downTime) / 1200") != std::string::npos);
        CHECK(scaled_text.find("RANGE 20h STEP 1m") != std::string::npos);
        CHECK(parse_queries(scaled_text).size() == 6);
    }
}

TEST_CASE("dependency order puts producers before consumers") {
    std::vector<RegisteredQuery> queries = load_pipeline(PipelineMode::Executable);

    // Scramble, then demand a topological order.
    std::swap(queries[0], queries[5]);
    std::swap(queries[1], queries[3]);
    std::vector<std::size_t> order = dependency_order(queries, "http://cpps.example/stream/");
    REQUIRE(order.size() == 6);

    std::map<std::string, std::size_t> position;
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        position[queries[order[rank]].name] = rank;
    CHECK(position.at("DownTime") < position.at("Availability"));
    CHECK(position.at("DownTime") < position.at("Performance"));
    CHECK(position.at("TotalProduction") < position.at("Performance"));
    CHECK(position.at("TotalProduction") < position.at("Quality"));
    CHECK(position.at("Availability") < position.at("OEE"));
    CHECK(position.at("Performance") < position.at("OEE"));
    CHECK(position.at("Quality") < position.at("OEE"));
}

TEST_CASE("dependency cycles are reported with their path") {
    SUBCASE("self-reference") {
        std::vector<RegisteredQuery> queries = parse_queries(
            "REGISTER STREAM Loop COMPUTED EVERY 1m AS\n"
            "SELECT (?x * 1) AS ?x\n"
            "FROM STREAM <http://cpps.example/stream/Loop> [RANGE 1m STEP 1m]");
        CHECK_THROWS_WITH_AS(dependency_order(queries, "http://cpps.example/stream/"),
                             doctest::Contains("Loop -> Loop"), EngineError);
    }
    SUBCASE("two-query cycle") {
        std::vector<RegisteredQuery> queries = parse_queries(
            "REGISTER STREAM A COMPUTED EVERY 1m AS\n"
            "SELECT (?x * 1) AS ?x\n"
            "FROM STREAM <http://cpps.example/stream/B> [RANGE 1m STEP 1m]\n"
            "REGISTER STREAM B COMPUTED EVERY 1m AS\n"
            "SELECT (?x * 1) AS ?x\n"
            "FROM STREAM <http://cpps.example/stream/A> [RANGE 1m STEP 1m]");
        CHECK_THROWS_WITH_AS(dependency_order(queries, "http://cpps.example/stream/"),
                             doctest::Contains("A -> B -> A"), EngineError);
    }
    SUBCASE("duplicate producers") {
        std::vector<RegisteredQuery> queries = parse_queries(
            "REGISTER STREAM A COMPUTED EVERY 1m AS\n"
            "SELECT (1 * 1) AS ?x\n"
            "FROM STREAM <http://x/in> [RANGE 1m STEP 1m]");
        queries.push_back(queries[0]);
        CHECK_THROWS_WITH_AS(dependency_order(queries, "http://cpps.example/stream/"),
                             doctest::Contains("duplicate stream producer"), EngineError);
    }
    SUBCASE("explain renders the DAG and schedule") {
        std::string text =
            explain_queries(load_pipeline(PipelineMode::Executable), "http://cpps.example/stream/");
        CHECK(text.find("OEE  [query]") != std::string::npos);
        CHECK(text.find("reads: Availability") != std::string::npos);
        CHECK(text.find("(external)") != std::string::npos);
        CHECK(text.find("OEE: every 1d (first at 1d)") != std::string::npos);
    }
}

TEST_CASE("the reference scenario flows through the engine to the exact KPIs") {
    PipelineRun run = run_pipeline(default_plant(), reference_scenario());

    CHECK(run.truth == GroundTruth{144, 48, 3, 1296});

    // The oracle quadruple, exactly.
    CHECK(run.oracle.availability.value == Number::ratio(9, 10));
    CHECK(run.oracle.performance.value == Number::ratio(25, 27));
    CHECK(run.oracle.quality.value == Number::ratio(15, 16));
    CHECK(run.oracle.oee.value == Number::ratio(25, 32));

    // The engine agrees not only within tolerance but exactly. Availability
    // and quality travel the result streams as exact decimal literals;
    // performance has no finite decimal expansion and rides a round-trip
    // double, whose product with the other two factors lands back on the
    // dyadic 25/32 without residue.
    CHECK(run.engine.availability.ok);
    CHECK(run.engine.availability.value == Number::ratio(9, 10));
    CHECK(run.engine.performance.value == Number::ratio(25, 27));
    CHECK(run.engine.quality.value == Number::ratio(15, 16));
    CHECK(run.engine.oee.value == Number::ratio(25, 32));

    CHECK(kpi_close(run.engine.availability, run.oracle.availability, 1e-9));
    CHECK(kpi_close(run.engine.performance, run.oracle.performance, 1e-9));
    CHECK(kpi_close(run.engine.quality, run.oracle.quality, 1e-9));
    CHECK(kpi_close(run.engine.oee, run.oracle.oee, 1e-9));

    // Six emissions at the single daily fire; OEE equals the product of the
    // three factor emissions of the same instant.
    REQUIRE(run.emissions.size() == 6);
    for (const Emission& e : run.emissions) {
        CHECK(e.fire_time == 86'400'000);
        CHECK(e.error.empty());
        REQUIRE(e.rows.size() == 1);
    }
    CHECK(run.engine.oee.value == run.engine.availability.value *
                                      run.engine.performance.value *
                                      run.engine.quality.value);
}

TEST_CASE("the perfect scenario runs at exactly 1.0 everywhere") {
    PipelineRun run = run_pipeline(default_plant(), perfect_scenario());
    CHECK(run.engine.oee.ok);
    CHECK(run.engine.oee.value == Number::from_int(1));
    CHECK(run.oracle.oee.value == Number::from_int(1));
    CHECK(run.engine.availability.value == Number::from_int(1));
    CHECK(run.engine.performance.value == Number::from_int(1));
    CHECK(run.engine.quality.value == Number::from_int(1));
}

TEST_CASE("a fully-down day flags the degenerate KPIs the same way") {
    ScenarioConfig config;
    config.name = "all-down";
    config.downtime_intervals = {{0, 1440}};
    PipelineRun run = run_pipeline(default_plant(), config);

    CHECK(run.engine.availability.ok);
    CHECK(run.engine.availability.value == Number::from_int(0));
    CHECK_FALSE(run.engine.performance.ok);  // division by zero in the query
    CHECK_FALSE(run.engine.quality.ok);      // zero production upstream
    CHECK_FALSE(run.engine.oee.ok);

    CHECK(kpi_close(run.engine.availability, run.oracle.availability, 1e-9));
    CHECK(kpi_close(run.engine.performance, run.oracle.performance, 1e-9));
    CHECK(kpi_close(run.engine.quality, run.oracle.quality, 1e-9));
    CHECK(kpi_close(run.engine.oee, run.oracle.oee, 1e-9));
}

TEST_CASE("engine equals oracle across seeded random scenarios") {
    // A faster version of the acceptance sweep; the acceptance binary runs
    // the full hundred.
    PlantConfig plant = default_plant();
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        ScenarioConfig config;
        config.name = "sweep";
        config.downtime_probability = 0.05 + 0.3 * double(seed % 7) / 7.0;
        config.defect_probability = 0.02 * double(seed % 5);
        config.seed = seed;
        PipelineRun run = run_pipeline(plant, config);
        CAPTURE(seed);
        CHECK(kpi_close(run.engine.availability, run.oracle.availability, 1e-9));
        CHECK(kpi_close(run.engine.performance, run.oracle.performance, 1e-9));
        CHECK(kpi_close(run.engine.quality, run.oracle.quality, 1e-9));
        CHECK(kpi_close(run.engine.oee, run.oracle.oee, 1e-9));
    }
}

TEST_CASE("the conformance pipeline registers but cannot bind its filters") {
    // The conformance WHERE clauses filter feature-of-interest IRIs as
    // numbers; the engine runs them as written and reports the type error
    // instead of silently patching the query.
    ScenarioConfig scenario = reference_scenario();
    PlantConfig plant = default_plant();
    SimulationResult sim = simulate(scenario, plant);

    Engine engine;
    engine.set_static_graph(build_asset_graph(plant));
    engine.declare_input(sim.stream_iri);
    for (const RegisteredQuery& q : load_pipeline(PipelineMode::Conformance))
        engine.register_query(q);
    for (const TimestampedTriple& tt : sim.observations) engine.push(sim.stream_iri, tt);

    std::vector<Emission> emissions = engine.advance_clock(86'400'000);
    REQUIRE(emissions.size() == 6);
    CHECK(emissions[0].query_name == "DownTime");
    CHECK(emissions[0].error.find("not a literal") != std::string::npos);
    CHECK(emissions[5].query_name == "OEE");
    CHECK(emissions[5].rows.empty());
    CHECK(emissions[5].error.empty());  // empty upstream windows, not a failure

    std::vector<KpiRow> rows = kpi_rows(emissions);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].values.oee.ok);
    CHECK(rows[0].values.oee.flag == "no-rows");
}

TEST_CASE("voltages must straddle the threshold") {
    ScenarioConfig config;
    config.nominal_voltage = 4.0;  // below the 5V threshold: every minute "down"
    CHECK_THROWS_AS(run_pipeline(default_plant(), config), ConfigError);
}

TEST_CASE("kpi extraction survives missing and failed emissions") {
    std::vector<Emission> emissions;
    emissions.push_back({"Availability", 1000, {Bindings{{"availability",
        Term::decimal_literal(Number::ratio(9, 10))}}}, ""});
    emissions.push_back({"Performance", 1000, {}, "division by zero"});

    std::vector<KpiRow> rows = kpi_rows(emissions);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].values.availability.ok);
    CHECK(rows[0].values.availability.value == Number::ratio(9, 10));
    CHECK_FALSE(rows[0].values.performance.ok);
    CHECK(rows[0].values.performance.flag == "engine-error: division by zero");
    CHECK_FALSE(rows[0].values.quality.ok);
    CHECK(rows[0].values.quality.flag == "no-emission");
}

TEST_CASE("shipped fixtures match their canonical generated forms") {
    const std::string data = CPPS_DATA_DIR;
    CHECK(read_file(data + "/plant-default.json") == plant_to_json(default_plant()));
    CHECK(read_file(data + "/plant-default.ttl") ==
          serialize_turtle(build_asset_graph(default_plant())));
    CHECK(read_file(data + "/scenarios/reference.json") ==
          scenario_to_json(reference_scenario()));
    CHECK(read_file(data + "/scenarios/perfect.json") == scenario_to_json(perfect_scenario()));
    CHECK(read_file(data + "/queries/pipeline-executable.rq") ==
          executable_pipeline_text(PipelineParams::defaults()));

    // The shipped files load back cleanly too.
    CHECK(plant_from_json(read_file(data + "/plant-default.json")).problems().empty());
    CHECK(scenario_from_json(read_file(data + "/scenarios/reference.json")).seed == 20240816);
    CHECK(parse_turtle(read_file(data + "/plant-default.ttl")).size() == 18);
    CHECK(parse_queries(read_file(data + "/queries/pipeline-executable.rq")).size() == 6);
}

TEST_CASE("reports render deterministically") {
    PipelineRun first = run_pipeline(default_plant(), reference_scenario());
    PipelineRun second = run_pipeline(default_plant(), reference_scenario());

    std::string jsonl = emissions_to_jsonl(first.emissions);
    CHECK(jsonl == emissions_to_jsonl(second.emissions));
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 6);
    CHECK(jsonl.find("\"query\":\"OEE\"") != std::string::npos);
    CHECK(jsonl.find("\"0.78125\"") != std::string::npos);

    std::vector<KpiRow> rows = kpi_rows(first.emissions);
    std::string json = kpi_report_json(rows);
    CHECK(json == kpi_report_json(kpi_rows(second.emissions)));
    CHECK(json.find("\"availability\": \"0.9\"") != std::string::npos);
    CHECK(json.find("\"oee\": \"0.78125\"") != std::string::npos);

    std::string csv = kpi_report_csv(rows);
    CHECK(csv.find("fire_time,availability,performance,quality,oee,flags") == 0);
    CHECK(csv.find("86400000,0.9,") != std::string::npos);
    CHECK(csv.find(",0.78125,") != std::string::npos);

    std::string emission_csv = emissions_to_csv(first.emissions);
    CHECK(emission_csv.find("query,fire_time_ms,row,var,value,error") == 0);
    CHECK(emission_csv.find("DownTime,86400000,0,downTime,144,") != std::string::npos);
}
