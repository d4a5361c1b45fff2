#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpps/query_ast.hpp"

namespace cpps {

/// One validation finding. Diagnostics are data, not exceptions: callers
/// collect them all and decide how to report.
struct Diagnostic {
    std::string code;     // stable kebab-case identifier, e.g. "unresolved-variable"
    std::string message;  // human-readable, names the offending element

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// What a query may legally read: raw input streams (matched by WHERE
/// patterns) and derived streams (whose binding vocabulary is the producing
/// query's output variables).
class StreamCatalog {
public:
    void add_raw(std::string stream_iri);
    void add_derived(std::string stream_iri, std::set<std::string> vocabulary);
    /// Registers `query`'s output stream under base_iri + name (Stream kind
    /// only; Query kind publishes nothing).
    void add_query_output(const RegisteredQuery& query, const std::string& base_iri);

    bool has(const std::string& stream_iri) const;
    bool is_derived(const std::string& stream_iri) const;
    /// Empty set for raw or unknown streams.
    const std::set<std::string>& vocabulary(const std::string& stream_iri) const;

private:
    std::set<std::string> raw_;
    std::map<std::string, std::set<std::string>> derived_;
};

/// Structural validation of one query against the catalog. Empty result iff:
/// every FROM STREAM IRI is known, windows are well-formed (positive, step ≤
/// range), every variable consumed by SELECT/FILTER/AGGREGATE resolves to a
/// WHERE binding, an upstream vocabulary entry, or an aggregate output, every
/// aggregate output is fresh, and every aggregate function is implemented.
std::vector<Diagnostic> validate_query(const RegisteredQuery& query,
                                       const StreamCatalog& catalog);

} // namespace cpps
