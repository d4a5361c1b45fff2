// Python bindings for the stream-query engine: query parsing, the plant and
// scenario configs, the simulator, and the full OEE pipeline run. The
// boundary is deliberately thin — config structs cross it as the same JSON
// documents the CLI reads, results come back as small read-only objects, and
// the report renderers return the exact bytes the CLI writes.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cpps/engine.hpp"
#include "cpps/errors.hpp"
#include "cpps/kpi.hpp"
#include "cpps/pipeline.hpp"
#include "cpps/plant.hpp"
#include "cpps/query_ast.hpp"
#include "cpps/query_parser.hpp"
#include "cpps/report.hpp"
#include "cpps/simulator.hpp"
#include "cpps/turtle.hpp"
#include "cpps/vocab.hpp"

namespace py = pybind11;

namespace {

cpps::ScenarioConfig scenario_arg(const std::string& scenario_json) {
    if (scenario_json.empty()) return cpps::reference_scenario();
    return cpps::scenario_from_json(scenario_json);
}

cpps::PlantConfig plant_arg(const std::string& plant_json) {
    if (plant_json.empty()) return cpps::default_plant();
    return cpps::plant_from_json(plant_json);
}

std::string kind_name(cpps::QueryKind kind) {
    return kind == cpps::QueryKind::Stream ? "stream" : "query";
}

/// Short display form of a figure: its lexical value, or the flag.
std::string kpi_text(const cpps::KpiValue& v) {
    if (!v.ok) return "--[" + v.flag + "]";
    return v.value.to_lexical();
}

bool kpis_agree(const cpps::KpiValues& a, const cpps::KpiValues& b, double tolerance) {
    return cpps::kpi_close(a.availability, b.availability, tolerance) &&
           cpps::kpi_close(a.performance, b.performance, tolerance) &&
           cpps::kpi_close(a.quality, b.quality, tolerance) &&
           cpps::kpi_close(a.oee, b.oee, tolerance);
}

std::vector<cpps::RegisteredQuery> parse_text(const std::string& text) {
    return cpps::parse_queries(text);
}

} // namespace

PYBIND11_MODULE(_cpps, m) {
    m.doc() = "Continuous-query engine over RDF sensor streams, with the OEE "
              "pipeline, its simulator, and the closed-form KPI oracle.";

    py::register_exception<cpps::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<cpps::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<cpps::EngineError>(m, "EngineError", PyExc_RuntimeError);
    py::register_exception<cpps::EvalError>(m, "EvalError", PyExc_RuntimeError);

    m.attr("STREAM_BASE") = std::string(cpps::vocab::kStreamBase);
    m.attr("PRODUCTION_STREAM") = cpps::production_stream_iri();

    // ------------------------------------------------------------------
    // Parsed queries
    // ------------------------------------------------------------------

    py::class_<cpps::StreamSource>(m, "Source", "One FROM STREAM window clause.")
        .def_readonly("stream_iri", &cpps::StreamSource::stream_iri)
        .def_property_readonly("range_ms",
                               [](const cpps::StreamSource& s) { return s.range.ms; })
        .def_property_readonly("step_ms",
                               [](const cpps::StreamSource& s) { return s.step.ms; })
        .def("__repr__", [](const cpps::StreamSource& s) {
            return "<Source <" + s.stream_iri + "> RANGE " + cpps::duration_to_string(s.range) +
                   " STEP " + cpps::duration_to_string(s.step) + ">";
        });

    py::class_<cpps::RegisteredQuery>(m, "Query", "One parsed REGISTER block.")
        .def_readonly("name", &cpps::RegisteredQuery::name)
        .def_property_readonly("kind",
                               [](const cpps::RegisteredQuery& q) { return kind_name(q.kind); })
        .def_property_readonly(
            "compute_every_ms",
            [](const cpps::RegisteredQuery& q) { return q.compute_every.ms; })
        .def_readonly("sources", &cpps::RegisteredQuery::sources)
        .def_property_readonly("output_variables",
                               [](const cpps::RegisteredQuery& q) {
                                   auto vars = q.output_variables();
                                   return std::vector<std::string>(vars.begin(), vars.end());
                               })
        .def("__str__", [](const cpps::RegisteredQuery& q) { return cpps::serialize_query(q); })
        .def("__repr__", [](const cpps::RegisteredQuery& q) {
            return "<Query " + q.name + " [" + kind_name(q.kind) + "] every " +
                   cpps::duration_to_string(q.compute_every) + ">";
        });

    m.def("parse_queries", &parse_text, py::arg("text"),
          "Parses a sequence of REGISTER blocks; raises ParseError with the "
          "offending line and column.");
    m.def("serialize_query", &cpps::serialize_query, py::arg("query"),
          "Canonical text form; parsing it back yields an equal query.");
    m.def(
        "duration_to_string",
        [](std::int64_t ms) { return cpps::duration_to_string(cpps::Duration{ms}); },
        py::arg("ms"), "Renders milliseconds with the largest unit that divides evenly.");

    m.def(
        "pipeline_text",
        [](const std::string& mode) {
            if (mode == "conformance") return cpps::conformance_pipeline_text();
            if (mode == "executable")
                return cpps::executable_pipeline_text(cpps::PipelineParams::defaults());
            throw py::value_error("unknown pipeline mode '" + mode +
                                  "' (expected 'executable' or 'conformance')");
        },
        py::arg("mode") = "executable",
        "Query text of the six-query OEE pipeline, in either of its two forms.");

    m.def(
        "explain",
        [](const std::string& text) {
            return cpps::explain_queries(parse_text(text), std::string(cpps::vocab::kStreamBase));
        },
        py::arg("text"),
        "Human-readable dependency DAG and fire schedule for query text; "
        "raises EngineError on a dependency cycle.");

    m.def(
        "dependency_order",
        [](const std::string& text) {
            auto queries = parse_text(text);
            std::vector<std::string> names;
            for (std::size_t index :
                 cpps::dependency_order(queries, std::string(cpps::vocab::kStreamBase)))
                names.push_back(queries[index].name);
            return names;
        },
        py::arg("text"),
        "Query names in registration (topological) order; raises EngineError "
        "on duplicate names or a cycle.");

    // ------------------------------------------------------------------
    // Plant and scenario configs (JSON at the boundary)
    // ------------------------------------------------------------------

    m.def(
        "default_plant_json",
        []() { return cpps::plant_to_json(cpps::default_plant()); },
        "The shipped five-station line with its three sensors, as JSON.");
    m.def(
        "plant_turtle",
        [](const std::string& plant_json) {
            return cpps::serialize_turtle(cpps::build_asset_graph(plant_arg(plant_json)));
        },
        py::arg("plant_json") = "",
        "The static asset graph in Turtle; empty input means the default plant.");
    m.def(
        "reference_scenario_json",
        []() { return cpps::scenario_to_json(cpps::reference_scenario()); },
        "The worked example: two downtime blocks, a 27-minute pace, three "
        "pinned defects; OEE lands exactly on 0.78125.");
    m.def(
        "perfect_scenario_json",
        []() { return cpps::scenario_to_json(cpps::perfect_scenario()); },
        "A flawless shorter day; every KPI is exactly 1.");

    // ------------------------------------------------------------------
    // Simulation and ground truth
    // ------------------------------------------------------------------

    py::class_<cpps::GroundTruth>(m, "Truth",
                                  "Exact tallies recorded while generating events.")
        .def_readonly("down_minutes", &cpps::GroundTruth::down_minutes)
        .def_readonly("total_production", &cpps::GroundTruth::total_production)
        .def_readonly("defected", &cpps::GroundTruth::defected)
        .def_readonly("operating_minutes", &cpps::GroundTruth::operating_minutes)
        .def("to_json", &cpps::truth_to_json)
        .def(py::self == py::self)
        .def("__repr__", [](const cpps::GroundTruth& t) {
            return "Truth(down=" + std::to_string(t.down_minutes) +
                   ", total=" + std::to_string(t.total_production) +
                   ", defected=" + std::to_string(t.defected) +
                   ", operating=" + std::to_string(t.operating_minutes) + ")";
        });

    py::class_<cpps::SimulationResult>(m, "Simulation",
                                       "One simulated span: the raw stream plus its truth.")
        .def_readonly("stream_iri", &cpps::SimulationResult::stream_iri)
        .def_readonly("truth", &cpps::SimulationResult::truth)
        .def("__len__",
             [](const cpps::SimulationResult& s) { return s.observations.size(); })
        .def(
            "triples",
            [](const cpps::SimulationResult& s) {
                std::vector<py::tuple> out;
                out.reserve(s.observations.size());
                for (const cpps::TimestampedTriple& tt : s.observations)
                    out.push_back(py::make_tuple(tt.triple.subject.to_string(),
                                                 tt.triple.predicate.to_string(),
                                                 tt.triple.object.to_string(), tt.timestamp));
                return out;
            },
            "The stream elements as (subject, predicate, object, timestamp_ms) "
            "tuples in push order.")
        .def("__repr__", [](const cpps::SimulationResult& s) {
            return "<Simulation " + std::to_string(s.observations.size()) + " elements on <" +
                   s.stream_iri + ">>";
        });

    m.def(
        "simulate",
        [](const std::string& scenario_json, const std::string& plant_json) {
            return cpps::simulate(scenario_arg(scenario_json), plant_arg(plant_json));
        },
        py::arg("scenario_json") = "", py::arg("plant_json") = "",
        "Generates the full event list for one scenario (empty inputs mean the "
        "reference scenario on the default plant); raises ConfigError listing "
        "every invalid field.");

    // ------------------------------------------------------------------
    // KPIs and the pipeline run
    // ------------------------------------------------------------------

    py::class_<cpps::KpiValue>(m, "Kpi",
                               "One figure; `value` is None when `ok` is false and "
                               "`flag` then names the degenerate condition.")
        .def_readonly("ok", &cpps::KpiValue::ok)
        .def_readonly("flag", &cpps::KpiValue::flag)
        .def_property_readonly("value",
                               [](const cpps::KpiValue& v) -> py::object {
                                   if (!v.ok) return py::none();
                                   return py::float_(v.value.to_double());
                               })
        .def_property_readonly("lexical",
                               [](const cpps::KpiValue& v) -> py::object {
                                   if (!v.ok) return py::none();
                                   return py::str(v.value.to_lexical());
                               })
        .def("close_to", &cpps::kpi_close, py::arg("other"), py::arg("tolerance") = 1e-9)
        .def("__repr__", [](const cpps::KpiValue& v) {
            if (!v.ok) return "Kpi(flag='" + v.flag + "')";
            if (!v.flag.empty()) return "Kpi(" + v.value.to_lexical() + ", flag='" + v.flag + "')";
            return "Kpi(" + v.value.to_lexical() + ")";
        });

    py::class_<cpps::KpiValues>(m, "Kpis", "The daily quadruple.")
        .def_readonly("availability", &cpps::KpiValues::availability)
        .def_readonly("performance", &cpps::KpiValues::performance)
        .def_readonly("quality", &cpps::KpiValues::quality)
        .def_readonly("oee", &cpps::KpiValues::oee)
        .def("close_to", &kpis_agree, py::arg("other"), py::arg("tolerance") = 1e-9,
             "True when all four figures agree within the tolerance.")
        .def("__repr__", [](const cpps::KpiValues& k) {
            return "Kpis(availability=" + kpi_text(k.availability) +
                   ", performance=" + kpi_text(k.performance) +
                   ", quality=" + kpi_text(k.quality) + ", oee=" + kpi_text(k.oee) + ")";
        });

    py::class_<cpps::PipelineRun>(m, "Run",
                                  "One simulate-register-replay cycle with both KPI "
                                  "quadruples: the engine's and the oracle's.")
        .def_readonly("truth", &cpps::PipelineRun::truth)
        .def_readonly("engine", &cpps::PipelineRun::engine)
        .def_readonly("oracle", &cpps::PipelineRun::oracle)
        .def_property_readonly(
            "emission_count",
            [](const cpps::PipelineRun& r) { return r.emissions.size(); })
        .def(
            "agrees",
            [](const cpps::PipelineRun& r, double tolerance) {
                return kpis_agree(r.engine, r.oracle, tolerance);
            },
            py::arg("tolerance") = 1e-9,
            "True when the engine's quadruple matches the oracle's within the tolerance.")
        .def(
            "emissions_jsonl",
            [](const cpps::PipelineRun& r) { return cpps::emissions_to_jsonl(r.emissions); },
            "Emission log, one JSON object per line; byte-stable across runs.")
        .def(
            "emissions_csv",
            [](const cpps::PipelineRun& r) { return cpps::emissions_to_csv(r.emissions); },
            "Flat CSV view of the emission log.")
        .def(
            "kpi_json",
            [](const cpps::PipelineRun& r) {
                return cpps::kpi_report_json(cpps::kpi_rows(r.emissions));
            },
            "KPI report extracted from the emissions, as JSON.")
        .def(
            "kpi_csv",
            [](const cpps::PipelineRun& r) {
                return cpps::kpi_report_csv(cpps::kpi_rows(r.emissions));
            },
            "KPI report extracted from the emissions, as CSV.")
        .def("__repr__", [](const cpps::PipelineRun& r) {
            return "<Run oee=" + kpi_text(r.engine.oee) + " (" +
                   std::to_string(r.emissions.size()) + " emissions)>";
        });

    m.def(
        "run_pipeline",
        [](const std::string& scenario_json, const std::string& plant_json) {
            return cpps::run_pipeline(plant_arg(plant_json), scenario_arg(scenario_json));
        },
        py::arg("scenario_json") = "", py::arg("plant_json") = "",
        "Runs the executable pipeline over one simulated scenario (empty "
        "inputs mean the reference scenario on the default plant).");
}
