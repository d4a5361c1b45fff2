#include "cpps/validate.hpp"

namespace cpps {

void StreamCatalog::add_raw(std::string stream_iri) {
    raw_.insert(std::move(stream_iri));
}

void StreamCatalog::add_derived(std::string stream_iri, std::set<std::string> vocabulary) {
    derived_[std::move(stream_iri)] = std::move(vocabulary);
}

void StreamCatalog::add_query_output(const RegisteredQuery& query, const std::string& base_iri) {
    if (query.kind != QueryKind::Stream) return;
    add_derived(base_iri + query.name, query.output_variables());
}

bool StreamCatalog::has(const std::string& stream_iri) const {
    return raw_.count(stream_iri) > 0 || derived_.count(stream_iri) > 0;
}

bool StreamCatalog::is_derived(const std::string& stream_iri) const {
    return derived_.count(stream_iri) > 0;
}

const std::set<std::string>& StreamCatalog::vocabulary(const std::string& stream_iri) const {
    static const std::set<std::string> kEmpty;
    auto it = derived_.find(stream_iri);
    return it == derived_.end() ? kEmpty : it->second;
}

namespace {

void check_expr_vars(const ExprPtr& expr, const std::set<std::string>& available,
                     const char* context, std::vector<Diagnostic>& out) {
    std::set<std::string> used;
    collect_expr_vars(expr, used);
    for (const std::string& v : used)
        if (!available.count(v))
            out.push_back({"unresolved-variable",
                           std::string("variable ?") + v + " in " + context +
                               " is not bound by WHERE, an upstream stream, or an aggregate"});
}

} // namespace

std::vector<Diagnostic> validate_query(const RegisteredQuery& query,
                                       const StreamCatalog& catalog) {
    std::vector<Diagnostic> out;

    // Window well-formedness and stream resolution.
    for (const StreamSource& s : query.sources) {
        if (s.range.ms <= 0)
            out.push_back({"nonpositive-range",
                           "RANGE of <" + s.stream_iri + "> must be positive"});
        if (s.step.ms <= 0)
            out.push_back({"nonpositive-step",
                           "STEP of <" + s.stream_iri + "> must be positive"});
        if (s.range.ms > 0 && s.step.ms > 0 && s.step.ms > s.range.ms)
            out.push_back({"step-exceeds-range",
                           "STEP " + duration_to_string(s.step) + " of <" + s.stream_iri +
                               "> exceeds RANGE " + duration_to_string(s.range)});
        if (!catalog.has(s.stream_iri))
            out.push_back({"unknown-stream",
                           "<" + s.stream_iri +
                               "> is neither a registered stream nor a declared raw input"});
    }
    if (query.compute_every.ms <= 0)
        out.push_back({"nonpositive-period", "COMPUTED EVERY must be positive"});

    // The variables a row can carry: WHERE bindings plus every upstream
    // binding vocabulary.
    std::set<std::string> row_vars = query.where_variables();
    for (const StreamSource& s : query.sources)
        for (const std::string& v : catalog.vocabulary(s.stream_iri)) row_vars.insert(v);

    // Aggregate outputs must be fresh; inputs must be row variables.
    std::set<std::string> agg_outputs;
    for (const AggregateClause& a : query.aggregates) {
        if (a.function != AggregateFunction::Count)
            out.push_back({"aggregate-not-implemented",
                           aggregate_function_name(a.function) +
                               " is recognized but not implemented; only COUNT is supported"});
        if (row_vars.count(a.out_var))
            out.push_back({"aggregate-output-not-fresh",
                           "aggregate output ?" + a.out_var + " is already bound"});
        if (!agg_outputs.insert(a.out_var).second)
            out.push_back({"duplicate-aggregate-output",
                           "aggregate output ?" + a.out_var + " is produced twice"});
        for (const std::string& v : a.over_vars)
            if (!row_vars.count(v))
                out.push_back({"unresolved-variable",
                               "aggregated variable ?" + v +
                                   " is not bound by WHERE or an upstream stream"});
        if (a.filter) check_expr_vars(a.filter, row_vars, "AGGREGATE FILTER", out);
    }

    // SELECT and top-level filters may additionally consume aggregate outputs.
    std::set<std::string> available = row_vars;
    available.insert(agg_outputs.begin(), agg_outputs.end());
    for (const SelectItem& item : query.select)
        check_expr_vars(item.expr, available, "SELECT", out);
    for (const ExprPtr& f : query.filters) check_expr_vars(f, row_vars, "FILTER", out);

    return out;
}

} // namespace cpps
