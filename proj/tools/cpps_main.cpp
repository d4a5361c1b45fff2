// cpps: replay a simulated production day against registered continuous
// queries under a virtual clock, and report the OEE KPI pipeline.
//
// Exit codes:
//   0  success
//   1  usage error
//   2  missing input file (nothing is written)
//   3  parse error in a query file or JSON config
//   4  validation error: plant/scenario problems, dependency cycles,
//      registration rejections
//   5  runtime failure (simulation, evaluation, or report writing)
//   6  --compare-oracle found engine and oracle apart beyond 1e-9

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpps/errors.hpp"
#include "cpps/pipeline.hpp"
#include "cpps/query_parser.hpp"
#include "cpps/report.hpp"
#include "cpps/vocab.hpp"

using namespace cpps;

namespace {

constexpr double kTolerance = 1e-9;

struct RunSpec {
    std::string asset_path;              // empty: built-in default plant
    std::string scenario = "reference";  // built-in name or JSON path
    std::string queries_path;            // empty: built-in executable pipeline
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool parse_only = false;
    bool compare_oracle = false;
    std::string out_dir = ".";
};

int fail(int code, const std::string& message) {
    std::cerr << "cpps: " << message << "\n";
    return code;
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return out.good();
}

std::string kpi_text(const KpiValue& v) {
    return v.ok ? v.value.to_lexical() : "-- [" + v.flag + "]";
}

/// Engine-vs-oracle agreement; on disagreement names the first KPI apart.
bool kpis_agree(const KpiValues& engine, const KpiValues& oracle, std::string& why) {
    struct Pair {
        const char* name;
        const KpiValue& lhs;
        const KpiValue& rhs;
    };
    for (const Pair& p : {Pair{"availability", engine.availability, oracle.availability},
                          Pair{"performance", engine.performance, oracle.performance},
                          Pair{"quality", engine.quality, oracle.quality},
                          Pair{"oee", engine.oee, oracle.oee}}) {
        if (kpi_close(p.lhs, p.rhs, kTolerance)) continue;
        why = std::string(p.name) + ": engine " + kpi_text(p.lhs) + " vs oracle " +
              kpi_text(p.rhs);
        return false;
    }
    return true;
}

/// Loads the plant, or exits with the mapped code. `code` is 0 on success.
PlantConfig load_plant(const RunSpec& spec, int& code) {
    code = 0;
    if (spec.asset_path.empty()) return default_plant();
    std::optional<std::string> text = slurp(spec.asset_path);
    if (!text) {
        code = fail(2, "missing file: " + spec.asset_path);
        return {};
    }
    try {
        return plant_from_json(*text);
    } catch (const ParseError& e) {
        code = fail(3, spec.asset_path + ": " + e.what());
    } catch (const ConfigError& e) {
        code = fail(4, spec.asset_path + ": " + e.what());
    }
    return {};
}

ScenarioConfig load_scenario(const RunSpec& spec, int& code) {
    code = 0;
    ScenarioConfig scenario;
    if (spec.scenario == "reference") {
        scenario = reference_scenario();
    } else if (spec.scenario == "perfect") {
        scenario = perfect_scenario();
    } else {
        std::optional<std::string> text = slurp(spec.scenario);
        if (!text) {
            code = fail(2, "missing file: " + spec.scenario +
                               " (or unknown built-in scenario; built-ins are"
                               " \"reference\" and \"perfect\")");
            return {};
        }
        try {
            scenario = scenario_from_json(*text);
        } catch (const ParseError& e) {
            code = fail(3, spec.scenario + ": " + e.what());
            return {};
        } catch (const ConfigError& e) {
            code = fail(4, spec.scenario + ": " + e.what());
            return {};
        }
    }
    if (spec.seed_set) scenario.seed = spec.seed;
    return scenario;
}

std::vector<RegisteredQuery> load_queries(const RunSpec& spec, const PlantConfig& plant,
                                          const ScenarioConfig& scenario, int& code) {
    code = 0;
    try {
        if (spec.queries_path.empty())
            return load_pipeline(PipelineMode::Executable,
                                 PipelineParams::for_scenario(scenario, plant));
        std::optional<std::string> text = slurp(spec.queries_path);
        if (!text) {
            code = fail(2, "missing file: " + spec.queries_path);
            return {};
        }
        return parse_queries(*text);
    } catch (const ParseError& e) {
        code = fail(3, (spec.queries_path.empty() ? std::string("built-in pipeline")
                                                  : spec.queries_path) +
                           ": " + e.what());
    }
    return {};
}

void print_query_summaries(const std::vector<RegisteredQuery>& queries) {
    for (const RegisteredQuery& q : queries) {
        std::cout << q.name << (q.kind == QueryKind::Stream ? "  [stream]" : "  [query]")
                  << "  every " << duration_to_string(q.compute_every) << "\n";
        for (const StreamSource& s : q.sources)
            std::cout << "  from <" << s.stream_iri << "> [RANGE "
                      << duration_to_string(s.range) << " STEP " << duration_to_string(s.step)
                      << "]\n";
        std::cout << "  selects:";
        for (const std::string& var : q.output_variables()) std::cout << " ?" << var;
        std::cout << "\n";
    }
    std::cout << queries.size() << " quer" << (queries.size() == 1 ? "y" : "ies")
              << " parsed\n";
}

int cmd_run(const RunSpec& spec) {
    // Load everything before writing anything: a missing or malformed input
    // must not leave partial output behind.
    int code = 0;
    PlantConfig plant = load_plant(spec, code);
    if (code) return code;
    ScenarioConfig scenario = load_scenario(spec, code);
    if (code) return code;
    std::vector<RegisteredQuery> queries = load_queries(spec, plant, scenario, code);
    if (code) return code;

    if (spec.parse_only) {
        print_query_summaries(queries);
        return 0;
    }

    GroundTruth truth;
    std::vector<Emission> emissions;
    KpiValues engine_kpis;
    KpiValues oracle;
    try {
        if (spec.queries_path.empty()) {
            // The shipped pipeline: window sizing, straddle guard, and oracle
            // all come from one place.
            PipelineRun run = run_pipeline(plant, scenario);
            truth = run.truth;
            emissions = std::move(run.emissions);
            engine_kpis = run.engine;
            oracle = run.oracle;
        } else {
            // A custom query file: register in dependency order, replay, and
            // read the KPIs off whatever canonical query names it provides.
            SimulationResult sim = simulate(scenario, plant);
            Engine engine;
            engine.set_static_graph(build_asset_graph(plant));
            engine.declare_input(sim.stream_iri);
            std::vector<RegisteredQuery> ordered;
            for (std::size_t i : dependency_order(queries, engine.stream_base()))
                ordered.push_back(queries[i]);
            for (const RegisteredQuery& q : ordered) engine.register_query(q);
            for (const TimestampedTriple& tt : sim.observations)
                engine.push(sim.stream_iri, tt);

            const std::int64_t end = scenario.duration_minutes * 60000;
            std::int64_t horizon = end;
            for (const RegisteredQuery& q : queries)
                horizon = std::max(horizon,
                                   (end + q.compute_every.ms - 1) / q.compute_every.ms *
                                       q.compute_every.ms);
            emissions = engine.advance_clock(horizon);
            truth = sim.truth;

            std::vector<KpiRow> rows = kpi_rows(emissions);
            if (!rows.empty()) {
                engine_kpis = rows.back().values;
            } else {
                for (KpiValue* v : {&engine_kpis.availability, &engine_kpis.performance,
                                    &engine_kpis.quality, &engine_kpis.oee}) {
                    v->ok = false;
                    v->flag = "no-emission";
                }
            }
            oracle = oracle_kpis(truth, scenario);
        }
    } catch (const ConfigError& e) {
        return fail(4, e.what());
    } catch (const EngineError& e) {
        return fail(4, e.what());
    } catch (const std::exception& e) {
        return fail(5, e.what());
    }

    const std::filesystem::path out_dir(spec.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail(5, "cannot create output directory " + spec.out_dir + ": " +
                               ec.message());

    std::vector<KpiRow> rows = kpi_rows(emissions);
    const bool json = spec.format == "json";
    const std::filesystem::path emissions_path =
        out_dir / (json ? "emissions.jsonl" : "emissions.csv");
    const std::filesystem::path kpi_path =
        out_dir / (json ? "kpi-report.json" : "kpi-report.csv");
    const std::filesystem::path truth_path = out_dir / "truth.json";
    if (!write_file(emissions_path, json ? emissions_to_jsonl(emissions)
                                         : emissions_to_csv(emissions)) ||
        !write_file(kpi_path, json ? kpi_report_json(rows) : kpi_report_csv(rows)) ||
        !write_file(truth_path, truth_to_json(truth)))
        return fail(5, "cannot write reports under " + spec.out_dir);

    std::cout << "scenario " << scenario.name << ": " << scenario.duration_minutes
              << " minutes, " << truth.down_minutes << " down, " << truth.total_production
              << " produced, " << truth.defected << " defective\n";
    std::cout << "availability " << kpi_text(engine_kpis.availability) << " | performance "
              << kpi_text(engine_kpis.performance) << " | quality "
              << kpi_text(engine_kpis.quality) << " | oee " << kpi_text(engine_kpis.oee)
              << "\n";
    for (const std::filesystem::path& p : {emissions_path, kpi_path, truth_path})
        std::cout << "wrote " << p.string() << "\n";

    if (spec.compare_oracle) {
        std::string why;
        if (!kpis_agree(engine_kpis, oracle, why))
            return fail(6, "engine and oracle disagree beyond 1e-9 — " + why);
        std::cout << "engine matches the closed-form oracle within 1e-9\n";
    }
    return 0;
}

int cmd_explain(const RunSpec& spec) {
    int code = 0;
    std::vector<RegisteredQuery> queries;
    if (spec.queries_path.empty()) {
        queries = load_pipeline(PipelineMode::Executable);
    } else {
        std::optional<std::string> text = slurp(spec.queries_path);
        if (!text) return fail(2, "missing file: " + spec.queries_path);
        try {
            queries = parse_queries(*text);
        } catch (const ParseError& e) {
            return fail(3, spec.queries_path + ": " + e.what());
        }
    }
    (void)code;
    try {
        std::cout << explain_queries(queries, vocab::kStreamBase);
    } catch (const EngineError& e) {
        return fail(4, e.what());  // carries the dependency-cycle path
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-query OEE pipeline over a simulated production line"};
    app.require_subcommand(1);
    RunSpec spec;

    CLI::App* run = app.add_subcommand("run", "simulate, replay the queries, write reports");
    run->add_option("--asset", spec.asset_path,
                    "plant description JSON (default: the built-in plant)");
    run->add_option("--scenario", spec.scenario,
                    "built-in scenario (reference, perfect) or a scenario JSON path");
    run->add_option("--queries", spec.queries_path,
                    "query file (default: the built-in executable pipeline)");
    run->add_option("--format", spec.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    CLI::Option* seed_opt = run->add_option("--seed", spec.seed, "scenario seed override");
    run->add_flag("--parse-only", spec.parse_only,
                  "print parsed query summaries and write nothing");
    run->add_flag("--compare-oracle", spec.compare_oracle,
                  "exit 6 when engine and oracle KPIs disagree beyond 1e-9");
    run->add_option("--out", spec.out_dir, "report directory (default: .)");

    CLI::App* explain =
        app.add_subcommand("explain", "print the stream-dependency DAG and fire schedule");
    explain->add_option("--queries", spec.queries_path,
                        "query file (default: the built-in executable pipeline)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    }
    spec.seed_set = seed_opt->count() > 0;

    return run->parsed() ? cmd_run(spec) : cmd_explain(spec);
}
