#include "cpps/pipeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cpps/errors.hpp"
#include "cpps/query_parser.hpp"
#include "cpps/validate.hpp"

namespace cpps {

PipelineParams PipelineParams::defaults() {
    return for_scenario(ScenarioConfig{}, default_plant());
}

PipelineParams PipelineParams::for_scenario(const ScenarioConfig& scenario,
                                            const PlantConfig& plant) {
    PipelineParams p;
    p.total_time_minutes = scenario.duration_minutes;
    p.cycle_time_minutes = scenario.cycle_time_minutes;
    p.range = Duration{scenario.duration_minutes * 60000};
    p.compute_every = p.range;
    p.production_stream = production_stream_iri();
    p.line_iri = plant.line_iri;
    p.assembly_platform_iri = plant.sensor_of_kind(SensorKind::ProductCounter).host;
    p.integrity_platform_iri = plant.sensor_of_kind(SensorKind::DefectDetector).host;
    return p;
}

const std::string& conformance_pipeline_text() {
    static const std::string text = R"(# Continuous OEE pipeline over the production observation stream.
# Six registered queries; each result stream feeds the next stage.

REGISTER STREAM DownTime COMPUTED EVERY 24h AS
  PREFIX sosa: <http://www.w3.org/ns/sosa/>
  SELECT ?downTime
  FROM STREAM <http://cpps.example/stream/production> [RANGE 24h STEP 1m]
  WHERE {?sensor sosa:observes ?voltage.
         ?voltage rdf:type sosa:FeatureOfInterest.
         ?productionLine sosa:hosts ?sensor}
  AGGREGATE {(?downTime, COUNT, {?voltage})
    FILTER (?voltage < 5 && ?productionLine = <http://cpps.example/plant/ProductionLine>)}

REGISTER STREAM Availability COMPUTED EVERY 24h AS
  PREFIX sosa: <http://www.w3.org/ns/sosa/>
  SELECT (1440-?downTime)/1440 AS ?availability
  FROM STREAM <http://cpps.example/stream/DownTime> [RANGE 24h STEP 1m]

REGISTER STREAM TotalProduction COMPUTED EVERY 24h AS
  PREFIX sosa: <http://www.w3.org/ns/sosa/>
  SELECT ?total
  FROM STREAM <http://cpps.example/stream/production> [RANGE 24h STEP 1m]
  WHERE {
         ?assemblySensor sosa:observes ?product.
         ?product rdf:type sosa:FeatureOfInterest.
         ?platform sosa:hosts ?assemblySensor
         }
  AGGREGATE {(?total, COUNT, {?product})
    FILTER (?platform = <http://cpps.example/plant/ASSEMBLY/AP1A>)}

REGISTER STREAM Performance COMPUTED EVERY 24h AS
  PREFIX sosa: <http://www.w3.org/ns/sosa/>
  SELECT (25 * ?total)/(1440-?downTime) AS ?performance
  FROM STREAM <http://cpps.example/stream/TotalProduction> [RANGE 24h STEP 1m]
  FROM STREAM <http://cpps.example/stream/DownTime> [RANGE 24h STEP 1m]

REGISTER STREAM Quality COMPUTED EVERY 24h AS
  PREFIX sosa: <http://www.w3.org/ns/sosa/>
  SELECT ((?total - ?defectTotal)/?total) AS ?quality
  FROM STREAM <http://cpps.example/stream/TotalProduction> [RANGE 24h STEP 1m]
  FROM STREAM <http://cpps.example/stream/production> [RANGE 24h STEP 1m]
  WHERE {
         ?integritySensor sosa:observes ?defect.
         ?defect rdf:type sosa:FeatureOfInterest.
         ?platform sosa:hosts ?integritySensor
         }
  AGGREGATE {(?defectTotal, COUNT, {?defect})
        FILTER (?platform = <http://cpps.example/plant/INTEGRITY/IT1A>)}

REGISTER QUERY OEE COMPUTED EVERY 24h AS
    SELECT (?availability * ?performance * ?quality) AS ?oee
    FROM STREAM <http://cpps.example/stream/Availability> [RANGE 24h STEP 1m]
    FROM STREAM <http://cpps.example/stream/Performance> [RANGE 24h STEP 1m]
    FROM STREAM <http://cpps.example/stream/Quality> [RANGE 24h STEP 1m]
)";
    return text;
}

std::string executable_pipeline_text(const PipelineParams& p) {
    const std::string window =
        "[RANGE " + duration_to_string(p.range) + " STEP " + duration_to_string(p.step) + "]";
    const std::string every = duration_to_string(p.compute_every);
    const std::string total_time = std::to_string(p.total_time_minutes);
    const std::string cycle = std::to_string(p.cycle_time_minutes);
    const std::string threshold = std::to_string(p.voltage_threshold);
    const std::string base = "http://cpps.example/stream/";

    std::ostringstream out;
    out << "# Executable OEE pipeline over the canonical observation shape.\n"
           "# Sensors are told apart by the platform hosting them: the voltage\n"
           "# sensor sits on the line itself, the product counter on the assembly\n"
           "# station, the defect detector on the integrity station.\n"
           "\n"
           "REGISTER STREAM DownTime COMPUTED EVERY " << every << " AS\n"
           "  SELECT ?downTime\n"
           "  FROM STREAM <" << p.production_stream << "> " << window << "\n"
           "  WHERE {?obs rdf:type sosa:Observation.\n"
           "         ?obs sosa:madeBySensor ?sensor.\n"
           "         ?obs sosa:hasSimpleResult ?voltage.\n"
           "         ?productionLine sosa:hosts ?sensor}\n"
           "  AGGREGATE {(?downTime, COUNT, {?voltage})\n"
           "    FILTER (?voltage < " << threshold << " && ?productionLine = <" << p.line_iri
        << ">)}\n"
           "\n"
           "REGISTER STREAM Availability COMPUTED EVERY " << every << " AS\n"
           "  SELECT ((" << total_time << " - ?downTime) / " << total_time
        << ") AS ?availability\n"
           "  FROM STREAM <" << base << "DownTime> " << window << "\n"
           "\n"
           "REGISTER STREAM TotalProduction COMPUTED EVERY " << every << " AS\n"
           "  SELECT ?total\n"
           "  FROM STREAM <" << p.production_stream << "> " << window << "\n"
           "  WHERE {?obs rdf:type sosa:Observation.\n"
           "         ?obs sosa:madeBySensor ?assemblySensor.\n"
           "         ?obs sosa:hasSimpleResult ?product.\n"
           "         ?platform sosa:hosts ?assemblySensor}\n"
           "  AGGREGATE {(?total, COUNT, {?product})\n"
           "    FILTER (?platform = <" << p.assembly_platform_iri << ">)}\n"
           "\n"
           "REGISTER STREAM Performance COMPUTED EVERY " << every << " AS\n"
           "  SELECT ((" << cycle << " * ?total) / (" << total_time
        << " - ?downTime)) AS ?performance\n"
           "  FROM STREAM <" << base << "TotalProduction> " << window << "\n"
           "  FROM STREAM <" << base << "DownTime> " << window << "\n"
           "\n"
           "REGISTER STREAM Quality COMPUTED EVERY " << every << " AS\n"
           "  SELECT ((?total - ?defectTotal) / ?total) AS ?quality\n"
           "  FROM STREAM <" << base << "TotalProduction> " << window << "\n"
           "  FROM STREAM <" << p.production_stream << "> " << window << "\n"
           "  WHERE {?obs rdf:type sosa:Observation.\n"
           "         ?obs sosa:madeBySensor ?integritySensor.\n"
           "         ?obs sosa:hasSimpleResult ?defect.\n"
           "         ?platform sosa:hosts ?integritySensor}\n"
           "  AGGREGATE {(?defectTotal, COUNT, {?defect})\n"
           "    FILTER (?platform = <" << p.integrity_platform_iri << ">)}\n"
           "\n"
           "REGISTER QUERY OEE COMPUTED EVERY " << every << " AS\n"
           "  SELECT (?availability * ?performance * ?quality) AS ?oee\n"
           "  FROM STREAM <" << base << "Availability> " << window << "\n"
           "  FROM STREAM <" << base << "Performance> " << window << "\n"
           "  FROM STREAM <" << base << "Quality> " << window << "\n";
    return out.str();
}

std::vector<RegisteredQuery> load_pipeline(PipelineMode mode, const PipelineParams& params) {
    return parse_queries(mode == PipelineMode::Conformance ? conformance_pipeline_text()
                                                           : executable_pipeline_text(params));
}

std::vector<std::size_t> dependency_order(const std::vector<RegisteredQuery>& queries,
                                          const std::string& stream_base) {
    std::map<std::string, std::size_t> producer;  // output IRI -> query index
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (queries[i].kind != QueryKind::Stream) continue;
        std::string iri = stream_base + queries[i].name;
        if (!producer.emplace(iri, i).second)
            throw EngineError("duplicate stream producer: " + queries[i].name);
    }

    // Depth-first walk; `state` 1 = on the current path (cycle detector).
    std::vector<int> state(queries.size(), 0);
    std::vector<std::size_t> order;
    std::vector<std::string> path;

    auto visit = [&](auto&& self, std::size_t i) -> void {
        if (state[i] == 2) return;
        if (state[i] == 1) {
            std::string cycle = queries[i].name;
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                cycle = *it + " -> " + cycle;
                if (*it == queries[i].name) break;
            }
            throw EngineError("dependency cycle: " + cycle);
        }
        state[i] = 1;
        path.push_back(queries[i].name);
        for (const StreamSource& s : queries[i].sources) {
            auto it = producer.find(s.stream_iri);
            if (it != producer.end() ) self(self, it->second);
        }
        path.pop_back();
        state[i] = 2;
        order.push_back(i);
    };
    for (std::size_t i = 0; i < queries.size(); ++i) visit(visit, i);
    return order;
}

std::string explain_queries(const std::vector<RegisteredQuery>& queries,
                            const std::string& stream_base) {
    std::vector<std::size_t> order = dependency_order(queries, stream_base);
    std::map<std::string, std::string> producer;  // output IRI -> query name
    for (const RegisteredQuery& q : queries)
        if (q.kind == QueryKind::Stream) producer[stream_base + q.name] = q.name;

    std::ostringstream out;
    out << "dependency order (producers before consumers):\n";
    for (std::size_t i : order) {
        const RegisteredQuery& q = queries[i];
        out << "  " << q.name << (q.kind == QueryKind::Stream ? "  [stream]" : "  [query]")
            << "\n";
        if (q.sources.empty()) out << "    reads: (nothing)\n";
        for (const StreamSource& s : q.sources) {
            auto it = producer.find(s.stream_iri);
            out << "    reads: "
                << (it != producer.end() ? it->second : "<" + s.stream_iri + "> (external)")
                << "  window " << duration_to_string(s.range) << " step "
                << duration_to_string(s.step) << "\n";
        }
    }
    out << "fire schedule:\n";
    for (std::size_t i : order) {
        const RegisteredQuery& q = queries[i];
        std::string period = duration_to_string(q.compute_every);
        out << "  " << q.name << ": every " << period << " (first at " << period << ")\n";
    }
    return out.str();
}

namespace {

KpiValue kpi_from_emission(const Emission* emission, const std::string& var) {
    KpiValue v;
    v.ok = false;
    if (!emission) {
        v.flag = "no-emission";
        return v;
    }
    if (!emission->error.empty()) {
        v.flag = "engine-error: " + emission->error;
        return v;
    }
    if (emission->rows.empty()) {
        // An upstream degenerate value (e.g. zero production) leaves the
        // window empty; report it as value-less rather than inventing 0.
        v.flag = "no-rows";
        return v;
    }
    if (emission->rows.size() > 1) {
        v.flag = "ambiguous: " + std::to_string(emission->rows.size()) + " rows";
        return v;
    }
    auto it = emission->rows[0].find(var);
    if (it == emission->rows[0].end()) {
        v.flag = "missing ?" + var;
        return v;
    }
    try {
        v.value = numeric_value(it->second);
    } catch (const EvalError& e) {
        v.flag = e.what();
        return v;
    }
    v.ok = true;
    return v;
}

} // namespace

std::vector<KpiRow> kpi_rows(const std::vector<Emission>& emissions) {
    // Last emission per (fire time, query); fire times in ascending order.
    std::map<std::int64_t, std::map<std::string, const Emission*>> by_time;
    for (const Emission& e : emissions) by_time[e.fire_time][e.query_name] = &e;

    auto lookup = [](const std::map<std::string, const Emission*>& m, const char* name) {
        auto it = m.find(name);
        return it == m.end() ? nullptr : it->second;
    };

    std::vector<KpiRow> rows;
    for (const auto& [fire_time, by_query] : by_time) {
        KpiRow row;
        row.fire_time = fire_time;
        row.values.availability = kpi_from_emission(lookup(by_query, "Availability"), "availability");
        row.values.performance = kpi_from_emission(lookup(by_query, "Performance"), "performance");
        row.values.quality = kpi_from_emission(lookup(by_query, "Quality"), "quality");
        row.values.oee = kpi_from_emission(lookup(by_query, "OEE"), "oee");
        rows.push_back(std::move(row));
    }
    return rows;
}

PipelineRun run_pipeline(const PlantConfig& plant, const ScenarioConfig& scenario) {
    PipelineParams params = PipelineParams::for_scenario(scenario, plant);
    Number threshold = Number::from_int(params.voltage_threshold);
    if (!(Number::from_double(scenario.down_voltage) < threshold &&
          threshold <= Number::from_double(scenario.nominal_voltage)))
        throw ConfigError({"scenario voltages must straddle the down threshold: down " +
                           std::to_string(scenario.down_voltage) + " < " +
                           std::to_string(params.voltage_threshold) + " <= nominal " +
                           std::to_string(scenario.nominal_voltage)});

    SimulationResult sim = simulate(scenario, plant);

    Engine engine;
    engine.set_static_graph(build_asset_graph(plant));
    engine.declare_input(sim.stream_iri);
    for (const RegisteredQuery& q : load_pipeline(PipelineMode::Executable, params))
        engine.register_query(q);
    for (const TimestampedTriple& tt : sim.observations) engine.push(sim.stream_iri, tt);

    const std::int64_t end = scenario.duration_minutes * 60000;
    const std::int64_t period = params.compute_every.ms;
    const std::int64_t horizon = (end + period - 1) / period * period;

    PipelineRun run;
    run.truth = sim.truth;
    run.emissions = engine.advance_clock(horizon);
    std::vector<KpiRow> rows = kpi_rows(run.emissions);
    if (!rows.empty()) {
        run.engine = rows.back().values;
    } else {
        for (KpiValue* v : {&run.engine.availability, &run.engine.performance,
                            &run.engine.quality, &run.engine.oee}) {
            v->ok = false;
            v->flag = "no-emission";
        }
    }
    run.oracle = oracle_kpis(sim.truth, scenario);
    return run;
}

} // namespace cpps
