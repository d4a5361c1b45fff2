#include "cpps/report.hpp"

#include <sstream>

#include <json.hpp>

namespace cpps {

using nlohmann::ordered_json;

namespace {

ordered_json term_to_json(const Term& term) {
    ordered_json out;
    if (term.is_iri()) {
        out["type"] = "iri";
        out["value"] = term.text();
    } else if (term.is_blank()) {
        out["type"] = "blank";
        out["value"] = term.text();
    } else {
        out["type"] = "literal";
        out["value"] = term.text();
        out["datatype"] = term.datatype();
    }
    return out;
}

std::string csv_cell(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

/// A KPI figure as a JSON value: exact lexical for valid figures, null for
/// flagged ones.
ordered_json kpi_json(const KpiValue& v) {
    if (!v.ok) return nullptr;
    return v.value.to_lexical();
}

std::string joined_flags(const KpiValues& k) {
    std::string flags;
    auto add = [&](const char* name, const KpiValue& v) {
        if (v.flag.empty()) return;
        if (!flags.empty()) flags += "; ";
        flags += std::string(name) + ": " + v.flag;
    };
    add("availability", k.availability);
    add("performance", k.performance);
    add("quality", k.quality);
    add("oee", k.oee);
    return flags;
}

} // namespace

std::string emissions_to_jsonl(const std::vector<Emission>& emissions) {
    std::ostringstream out;
    for (const Emission& e : emissions) {
        ordered_json line;
        line["query"] = e.query_name;
        line["fire_time_ms"] = e.fire_time;
        line["rows"] = ordered_json::array();
        for (const Bindings& row : e.rows) {
            ordered_json encoded;
            for (const auto& [var, term] : row) encoded[var] = term_to_json(term);
            line["rows"].push_back(std::move(encoded));
        }
        if (!e.error.empty()) line["error"] = e.error;
        out << line.dump() << "\n";
    }
    return out.str();
}

std::string emissions_to_csv(const std::vector<Emission>& emissions) {
    std::ostringstream out;
    out << "query,fire_time_ms,row,var,value,error\n";
    for (const Emission& e : emissions) {
        if (!e.error.empty()) {
            out << csv_cell(e.query_name) << "," << e.fire_time << ",,,,"
                << csv_cell(e.error) << "\n";
            continue;
        }
        for (std::size_t i = 0; i < e.rows.size(); ++i)
            for (const auto& [var, term] : e.rows[i])
                out << csv_cell(e.query_name) << "," << e.fire_time << "," << i << ","
                    << csv_cell(var) << "," << csv_cell(term.text()) << ",\n";
    }
    return out.str();
}

std::string kpi_report_json(const std::vector<KpiRow>& rows) {
    ordered_json report = ordered_json::array();
    for (const KpiRow& row : rows) {
        ordered_json entry;
        entry["fire_time"] = row.fire_time;
        entry["availability"] = kpi_json(row.values.availability);
        entry["performance"] = kpi_json(row.values.performance);
        entry["quality"] = kpi_json(row.values.quality);
        entry["oee"] = kpi_json(row.values.oee);
        entry["flags"] = joined_flags(row.values);
        report.push_back(std::move(entry));
    }
    return report.dump(2) + "\n";
}

std::string kpi_report_csv(const std::vector<KpiRow>& rows) {
    std::ostringstream out;
    out << "fire_time,availability,performance,quality,oee,flags\n";
    for (const KpiRow& row : rows) {
        auto cell = [](const KpiValue& v) { return v.ok ? v.value.to_lexical() : ""; };
        out << row.fire_time << "," << cell(row.values.availability) << ","
            << cell(row.values.performance) << "," << cell(row.values.quality) << ","
            << cell(row.values.oee) << "," << csv_cell(joined_flags(row.values)) << "\n";
    }
    return out.str();
}

} // namespace cpps
