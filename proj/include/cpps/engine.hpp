#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cpps/graph.hpp"
#include "cpps/query_ast.hpp"
#include "cpps/term.hpp"
#include "cpps/validate.hpp"

namespace cpps {

/// Time-ordered element store for one stream.
struct StreamBuffer {
    std::string stream_iri;
    std::vector<TimestampedTriple> elements;  // sorted by timestamp (push enforces)
    std::int64_t watermark = -1;              // last ingested timestamp; -1 before any push
};

/// One query evaluation at one fire time. `error` is empty on success; on an
/// evaluation failure (type error, division by zero, malformed upstream
/// encoding) it holds the cause and `rows` is empty.
struct Emission {
    std::string query_name;
    std::int64_t fire_time = 0;
    std::vector<Bindings> rows;
    std::string error;
};

/// Result of one expression evaluation: exact number, boolean, or RDF term.
using Value = std::variant<Number, bool, Term>;

/// Evaluates `expr` against one binding row. Arithmetic coerces numeric
/// literals through numeric_value; Eq/Ne compare numerically when both sides
/// are numeric, else by term identity. Throws EvalError on unbound variables,
/// type mismatches, and division by zero.
Value eval_expr(const ExprPtr& expr, const Bindings& row);

/// eval_expr that must produce a boolean (FILTER position).
bool eval_filter(const ExprPtr& expr, const Bindings& row);

/// Renders a Value as an RDF term for transport: numbers become typed
/// literals with the narrowest xsd datatype, booleans xsd:boolean.
Term value_to_term(const Value& value);

/// Encodes result rows as binding triples: per row i and bound variable v,
/// one triple (_:name_fireTime_rNNNNNN, bind:v, value) at the fire time.
/// Blank labels are deterministic, so identical runs stay byte-identical.
std::vector<TimestampedTriple> encode_result_stream(const std::vector<Bindings>& rows,
                                                    const std::string& query_name,
                                                    std::int64_t fire_time);

/// Inverse of encode_result_stream: groups triples by subject, mapping each
/// bind:-namespace predicate back to a variable. Throws EvalError when a
/// triple is outside the bind: namespace or a variable repeats in one row.
std::vector<Bindings> decode_bindings(const std::vector<TimestampedTriple>& window);

/// Virtual-clock continuous-query engine. Single logical owner: declare
/// inputs, register queries (producers before consumers), push elements in
/// timestamp order, then advance the clock to collect emissions. Results of
/// Stream-kind queries are re-published onto their own buffers at the fire
/// time, so downstream queries firing at the same instant read them.
class Engine {
public:
    explicit Engine(std::string stream_base = "http://cpps.example/stream/");

    void set_static_graph(StaticGraph graph) { static_graph_ = std::move(graph); }
    const StaticGraph& static_graph() const { return static_graph_; }

    /// When enabled, elements older than any subscribed window are dropped
    /// after each fire time. Off by default so late registration stays legal.
    void set_eviction(bool enabled) { eviction_ = enabled; }

    /// Creates an empty buffer for a raw input stream.
    /// Throws EngineError if the IRI is already a stream.
    void declare_input(const std::string& stream_iri);

    /// Registers a query. Its sources must already exist (raw inputs or
    /// previously registered Stream outputs), so registration order is a
    /// topological order of the dependency graph and cycles cannot form.
    /// Throws EngineError on duplicate names, unresolved sources, a STEP that
    /// does not divide RANGE, or validation diagnostics.
    void register_query(const RegisteredQuery& query);

    /// Ingests one element. Throws EngineError on unknown streams and
    /// out-of-order timestamps (contract: timestamp ≥ watermark ≥ 0).
    /// Never triggers evaluation.
    void push(const std::string& stream_iri, TimestampedTriple element);

    /// Evaluates every query whose fire times fall in (clock, to], in global
    /// chronological order; ties evaluate in registration order. Returns the
    /// emissions in that order and appends them to the report sink.
    std::vector<Emission> advance_clock(std::int64_t to);

    /// Pure evaluation of one registered query at one fire time (does not
    /// advance state; used by advance_clock and directly by tests).
    Emission evaluate(const RegisteredQuery& query, std::int64_t fire_time) const;

    std::int64_t clock() const { return clock_; }
    const std::vector<Emission>& report_sink() const { return report_sink_; }
    const StreamCatalog& catalog() const { return catalog_; }
    const std::vector<RegisteredQuery>& queries() const { return queries_; }
    const std::string& stream_base() const { return stream_base_; }

    /// Output stream IRI for a Stream-kind query name: stream_base + name.
    std::string output_iri(const std::string& query_name) const {
        return stream_base_ + query_name;
    }

    bool has_stream(const std::string& stream_iri) const {
        return buffers_.count(stream_iri) > 0;
    }
    /// Throws EngineError on unknown streams.
    const StreamBuffer& buffer(const std::string& stream_iri) const;

private:
    void fire_at(std::int64_t fire_time, std::vector<Emission>& out);
    void evict_before(std::int64_t fire_time);

    std::string stream_base_;
    StaticGraph static_graph_;
    std::map<std::string, StreamBuffer> buffers_;
    std::vector<RegisteredQuery> queries_;
    std::vector<std::int64_t> next_fire_;  // parallel to queries_
    StreamCatalog catalog_;
    std::vector<Emission> report_sink_;
    std::int64_t clock_ = 0;
    bool eviction_ = false;
};

} // namespace cpps
