#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cpps/number.hpp"
#include "cpps/term.hpp"

namespace cpps {

/// Window/periods are canonicalized to virtual-clock milliseconds at parse
/// time; 24h == 1440m == 86400s.
struct Duration {
    std::int64_t ms = 0;

    friend bool operator==(const Duration&, const Duration&) = default;
};

/// Renders with the largest unit that divides evenly (86400000 -> "1d").
std::string duration_to_string(Duration d);

enum class ExprOp {
    Var,
    Num,
    IriConst,
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. Arithmetic subtrees evaluate to numbers,
/// logical subtrees to booleans; Eq/Ne additionally accept IRI operands.
struct Expr {
    ExprOp op = ExprOp::Num;
    std::string var_name;  // Var
    Number value;          // Num
    Term term;             // IriConst
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr var(std::string name);
    static ExprPtr num(Number value);
    static ExprPtr iri(Term term);
    static ExprPtr binary(ExprOp op, ExprPtr lhs, ExprPtr rhs);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
void collect_expr_vars(const ExprPtr& expr, std::set<std::string>& out);
/// Fully parenthesized rendering; reparses to a structurally equal tree.
std::string expr_to_string(const ExprPtr& expr);

/// One `FROM STREAM <iri> [RANGE r STEP s]` clause.
struct StreamSource {
    std::string stream_iri;
    Duration range;
    Duration step;

    friend bool operator==(const StreamSource&, const StreamSource&) = default;
};

/// One projected output: a bare variable, or an expression with an AS alias.
struct SelectItem {
    ExprPtr expr;
    std::string alias;  // empty for a bare variable

    /// Output variable name: the alias, or the bare variable's name.
    std::string output_name() const;
};

bool select_item_equal(const SelectItem& a, const SelectItem& b);

enum class AggregateFunction { Count, Sum, Avg, Min, Max };

std::string aggregate_function_name(AggregateFunction f);

/// `(?out, COUNT, {?vars}) FILTER (...)`: counts the binding rows that
/// survive the filter, binding the result to out_var.
struct AggregateClause {
    std::string out_var;
    AggregateFunction function = AggregateFunction::Count;
    std::vector<std::string> over_vars;
    ExprPtr filter;  // may be null
};

bool aggregate_equal(const AggregateClause& a, const AggregateClause& b);

enum class QueryKind { Stream, Query };

/// One parsed REGISTER block. kind=Stream re-publishes results as a stream
/// named by `name`; kind=Query emits to the report sink only.
struct RegisteredQuery {
    QueryKind kind = QueryKind::Stream;
    std::string name;
    Duration compute_every;
    std::map<std::string, std::string> prefixes;
    std::vector<SelectItem> select;
    std::vector<StreamSource> sources;
    std::vector<TriplePattern> where;
    std::vector<ExprPtr> filters;  // top-level FILTER clauses
    std::vector<AggregateClause> aggregates;

    /// Variables bound by the WHERE patterns.
    std::set<std::string> where_variables() const;
    /// Names of the variables this query publishes (its binding vocabulary).
    std::set<std::string> output_variables() const;
    std::set<std::string> aggregate_outputs() const;
};

bool query_equal(const RegisteredQuery& a, const RegisteredQuery& b);

/// Canonical text form; parse_query(serialize_query(q)) is structurally
/// equal to q.
std::string serialize_query(const RegisteredQuery& query);

} // namespace cpps
