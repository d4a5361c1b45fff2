#include "cpps/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "cpps/errors.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

namespace {

Number to_number(const Value& v) {
    if (std::holds_alternative<Number>(v)) return std::get<Number>(v);
    if (std::holds_alternative<Term>(v)) return numeric_value(std::get<Term>(v));
    throw EvalError("expected a number, got a boolean");
}

bool numeric_operand(const Value& v) {
    if (std::holds_alternative<Number>(v)) return true;
    return std::holds_alternative<Term>(v) && std::get<Term>(v).is_numeric_literal();
}

bool to_bool(const Value& v) {
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    throw EvalError("expected a boolean operand");
}

bool values_equal(const Value& a, const Value& b) {
    if (numeric_operand(a) && numeric_operand(b)) return to_number(a) == to_number(b);
    if (std::holds_alternative<Term>(a) && std::holds_alternative<Term>(b))
        return std::get<Term>(a) == std::get<Term>(b);
    if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b))
        return std::get<bool>(a) == std::get<bool>(b);
    throw EvalError("incomparable operand types for equality");
}

} // namespace

Value eval_expr(const ExprPtr& expr, const Bindings& row) {
    if (!expr) throw EvalError("empty expression");
    switch (expr->op) {
    case ExprOp::Var: {
        auto it = row.find(expr->var_name);
        if (it == row.end()) throw EvalError("unbound variable ?" + expr->var_name);
        return it->second;
    }
    case ExprOp::Num: return expr->value;
    case ExprOp::IriConst: return expr->term;
    case ExprOp::Add: return to_number(eval_expr(expr->lhs, row)) + to_number(eval_expr(expr->rhs, row));
    case ExprOp::Sub: return to_number(eval_expr(expr->lhs, row)) - to_number(eval_expr(expr->rhs, row));
    case ExprOp::Mul: return to_number(eval_expr(expr->lhs, row)) * to_number(eval_expr(expr->rhs, row));
    case ExprOp::Div: return to_number(eval_expr(expr->lhs, row)) / to_number(eval_expr(expr->rhs, row));
    case ExprOp::Lt: return to_number(eval_expr(expr->lhs, row)) < to_number(eval_expr(expr->rhs, row));
    case ExprOp::Le: return to_number(eval_expr(expr->lhs, row)) <= to_number(eval_expr(expr->rhs, row));
    case ExprOp::Gt: return to_number(eval_expr(expr->lhs, row)) > to_number(eval_expr(expr->rhs, row));
    case ExprOp::Ge: return to_number(eval_expr(expr->lhs, row)) >= to_number(eval_expr(expr->rhs, row));
    case ExprOp::Eq: return values_equal(eval_expr(expr->lhs, row), eval_expr(expr->rhs, row));
    case ExprOp::Ne: return !values_equal(eval_expr(expr->lhs, row), eval_expr(expr->rhs, row));
    case ExprOp::And: {
        bool lhs = to_bool(eval_expr(expr->lhs, row));
        bool rhs = to_bool(eval_expr(expr->rhs, row));
        return lhs && rhs;
    }
    case ExprOp::Or: {
        bool lhs = to_bool(eval_expr(expr->lhs, row));
        bool rhs = to_bool(eval_expr(expr->rhs, row));
        return lhs || rhs;
    }
    }
    throw EvalError("unknown expression operator");
}

bool eval_filter(const ExprPtr& expr, const Bindings& row) {
    Value v = eval_expr(expr, row);
    if (!std::holds_alternative<bool>(v)) throw EvalError("FILTER expression is not boolean");
    return std::get<bool>(v);
}

Term value_to_term(const Value& value) {
    if (std::holds_alternative<Number>(value))
        return Term::number_literal(std::get<Number>(value));
    if (std::holds_alternative<bool>(value)) return Term::boolean_literal(std::get<bool>(value));
    return std::get<Term>(value);
}

// ---------------------------------------------------------------------------
// Binding-triple transport
// ---------------------------------------------------------------------------

std::vector<TimestampedTriple> encode_result_stream(const std::vector<Bindings>& rows,
                                                    const std::string& query_name,
                                                    std::int64_t fire_time) {
    std::vector<TimestampedTriple> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "r%06zu", i);
        Term node = Term::blank(query_name + "_" + std::to_string(fire_time) + "_" + suffix);
        for (const auto& [var, value] : rows[i])
            out.push_back({make_triple(node, Term::iri(std::string(vocab::kBindNs) + var), value),
                           fire_time});
    }
    return out;
}

std::vector<Bindings> decode_bindings(const std::vector<TimestampedTriple>& window) {
    // std::map keys the rows by subject term, which sorts equal-width
    // zero-padded row labels back into emission order.
    std::map<Term, Bindings> by_subject;
    for (const TimestampedTriple& tt : window) {
        const Triple& t = tt.triple;
        const std::string& pred = t.predicate.text();
        if (pred.rfind(vocab::kBindNs, 0) != 0)
            throw EvalError("non-binding triple in result stream: " + t.to_string());
        std::string var = pred.substr(std::strlen(vocab::kBindNs));
        if (var.empty()) throw EvalError("binding predicate without a variable name");
        auto [it, inserted] = by_subject[t.subject].emplace(var, t.object);
        if (!inserted && !(it->second == t.object))
            throw EvalError("variable ?" + var + " bound twice in one result row");
    }
    std::vector<Bindings> rows;
    rows.reserve(by_subject.size());
    for (auto& [subject, row] : by_subject) rows.push_back(std::move(row));
    return rows;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

Engine::Engine(std::string stream_base) : stream_base_(std::move(stream_base)) {}

void Engine::declare_input(const std::string& stream_iri) {
    if (buffers_.count(stream_iri))
        throw EngineError("stream already exists: <" + stream_iri + ">");
    buffers_[stream_iri] = StreamBuffer{stream_iri, {}, -1};
    catalog_.add_raw(stream_iri);
}

const StreamBuffer& Engine::buffer(const std::string& stream_iri) const {
    auto it = buffers_.find(stream_iri);
    if (it == buffers_.end()) throw EngineError("unknown stream: <" + stream_iri + ">");
    return it->second;
}

void Engine::register_query(const RegisteredQuery& query) {
    for (const RegisteredQuery& q : queries_)
        if (q.name == query.name)
            throw EngineError("duplicate query name: " + query.name);
    if (query.compute_every.ms <= 0)
        throw EngineError("COMPUTED EVERY must be positive for " + query.name);
    for (const StreamSource& s : query.sources) {
        if (!buffers_.count(s.stream_iri))
            throw EngineError("unresolved source stream <" + s.stream_iri + "> for " +
                              query.name);
        if (s.step.ms <= 0 || s.range.ms % s.step.ms != 0)
            throw EngineError("STEP " + duration_to_string(s.step) + " does not divide RANGE " +
                              duration_to_string(s.range) + " for " + query.name);
    }
    std::vector<Diagnostic> diagnostics = validate_query(query, catalog_);
    if (!diagnostics.empty()) {
        std::string message = "query " + query.name + " failed validation:";
        for (const Diagnostic& d : diagnostics) message += "\n  - " + d.message;
        throw EngineError(message);
    }
    if (query.kind == QueryKind::Stream) {
        std::string out_iri = output_iri(query.name);
        if (buffers_.count(out_iri))
            throw EngineError("output stream already exists: <" + out_iri + ">");
        buffers_[out_iri] = StreamBuffer{out_iri, {}, -1};
        catalog_.add_query_output(query, stream_base_);
    }
    queries_.push_back(query);
    // Fire times sit on the absolute grid k * period; a late registration
    // joins at the first grid point past the current clock.
    std::int64_t first = (clock_ / query.compute_every.ms + 1) * query.compute_every.ms;
    next_fire_.push_back(first);
}

void Engine::push(const std::string& stream_iri, TimestampedTriple element) {
    auto it = buffers_.find(stream_iri);
    if (it == buffers_.end()) throw EngineError("unknown stream: <" + stream_iri + ">");
    StreamBuffer& buf = it->second;
    if (element.timestamp < 0)
        throw EngineError("negative timestamp on <" + stream_iri + ">");
    if (element.timestamp < buf.watermark)
        throw EngineError("out-of-order push on <" + stream_iri + ">: " +
                          std::to_string(element.timestamp) + " < watermark " +
                          std::to_string(buf.watermark));
    buf.watermark = element.timestamp;
    buf.elements.push_back(std::move(element));
}

namespace {

/// Elements of `buf` with timestamp in the half-open window (fire−range, fire].
std::pair<std::size_t, std::size_t> window_span(const StreamBuffer& buf, std::int64_t fire_time,
                                                std::int64_t range) {
    auto lo = std::partition_point(
        buf.elements.begin(), buf.elements.end(),
        [&](const TimestampedTriple& e) { return e.timestamp <= fire_time - range; });
    auto hi = std::partition_point(
        buf.elements.begin(), buf.elements.end(),
        [&](const TimestampedTriple& e) { return e.timestamp <= fire_time; });
    return {std::size_t(lo - buf.elements.begin()), std::size_t(hi - buf.elements.begin())};
}

/// Natural join of two row sets: rows merge when shared variables agree.
std::vector<Bindings> join_rows(const std::vector<Bindings>& left,
                                const std::vector<Bindings>& right) {
    std::vector<Bindings> out;
    for (const Bindings& a : left) {
        for (const Bindings& b : right) {
            Bindings merged = a;
            bool ok = true;
            for (const auto& [var, value] : b) {
                auto [it, inserted] = merged.emplace(var, value);
                if (!inserted && !(it->second == value)) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back(std::move(merged));
        }
    }
    return out;
}

} // namespace

Emission Engine::evaluate(const RegisteredQuery& query, std::int64_t fire_time) const {
    Emission emission;
    emission.query_name = query.name;
    emission.fire_time = fire_time;
    try {
        // (1) Per-source windows. Derived sources decode into base binding
        // rows; raw sources contribute window triples for pattern matching.
        std::vector<Bindings> base = {{}};
        StaticGraph graph = static_graph_;
        for (const StreamSource& s : query.sources) {
            const StreamBuffer& buf = buffer(s.stream_iri);
            auto [lo, hi] = window_span(buf, fire_time, s.range.ms);
            if (catalog_.is_derived(s.stream_iri)) {
                std::vector<TimestampedTriple> window(buf.elements.begin() + lo,
                                                      buf.elements.begin() + hi);
                base = join_rows(base, decode_bindings(window));
            } else {
                for (std::size_t i = lo; i < hi; ++i) graph.insert(buf.elements[i].triple);
            }
        }

        // Grouping key: selected non-aggregate variables.
        std::set<std::string> select_vars;
        for (const SelectItem& item : query.select) collect_expr_vars(item.expr, select_vars);
        for (const AggregateClause& a : query.aggregates) select_vars.erase(a.out_var);

        std::vector<Bindings> result_rows;
        for (const Bindings& b : base) {
            // (2) WHERE join, pattern by pattern, seeded with the base row.
            std::vector<Bindings> rows = {b};
            for (const TriplePattern& pattern : query.where) {
                std::vector<Bindings> next;
                for (const Bindings& row : rows) {
                    std::vector<Bindings> extended = graph.match(pattern, row);
                    next.insert(next.end(), extended.begin(), extended.end());
                }
                rows = std::move(next);
                if (rows.empty()) break;
            }

            // (3) Top-level filters drop rows before any aggregation.
            for (const ExprPtr& f : query.filters) {
                std::vector<Bindings> kept;
                for (const Bindings& row : rows)
                    if (eval_filter(f, row)) kept.push_back(row);
                rows = std::move(kept);
            }

            if (query.aggregates.empty()) {
                result_rows.insert(result_rows.end(), rows.begin(), rows.end());
                continue;
            }

            // (4) COUNT per group. The group key is the selected
            // non-aggregate variables; when the base row already fixes every
            // key variable there is exactly one group, present even when no
            // rows survive — a zero count is a result, not an absence.
            bool key_from_base = true;
            for (const std::string& v : select_vars)
                if (!b.count(v)) key_from_base = false;

            std::map<Bindings, std::vector<Bindings>> groups;
            if (key_from_base) {
                Bindings key;
                for (const std::string& v : select_vars) key.emplace(v, b.at(v));
                groups.emplace(std::move(key), rows);
            } else {
                for (const Bindings& row : rows) {
                    Bindings key;
                    for (const std::string& v : select_vars) {
                        auto it = row.find(v);
                        if (it == row.end())
                            throw EvalError("unbound grouping variable ?" + v);
                        key.emplace(v, it->second);
                    }
                    groups[std::move(key)].push_back(row);
                }
            }

            for (const auto& [key, group] : groups) {
                Bindings out = b;
                for (const auto& [var, value] : key) out.emplace(var, value);
                for (const AggregateClause& a : query.aggregates) {
                    std::int64_t count = 0;
                    for (const Bindings& row : group)
                        if (!a.filter || eval_filter(a.filter, row)) ++count;
                    out[a.out_var] = Term::integer_literal(count);
                }
                result_rows.push_back(std::move(out));
            }
        }

        // (5) Project through SELECT; (6) deterministic row order.
        for (const Bindings& row : result_rows) {
            Bindings projected;
            for (const SelectItem& item : query.select) {
                std::string name = item.output_name();
                if (name.empty()) throw EvalError("select expression lacks an AS alias");
                projected[name] = value_to_term(eval_expr(item.expr, row));
            }
            emission.rows.push_back(std::move(projected));
        }
        std::sort(emission.rows.begin(), emission.rows.end(), binding_less);
    } catch (const EvalError& e) {
        emission.rows.clear();
        emission.error = e.what();
    }
    return emission;
}

void Engine::fire_at(std::int64_t fire_time, std::vector<Emission>& out) {
    for (std::size_t i = 0; i < queries_.size(); ++i) {
        if (next_fire_[i] != fire_time) continue;
        const RegisteredQuery& q = queries_[i];
        Emission emission = evaluate(q, fire_time);
        if (q.kind == QueryKind::Stream && emission.error.empty())
            for (TimestampedTriple& tt : encode_result_stream(emission.rows, q.name, fire_time))
                push(output_iri(q.name), std::move(tt));
        report_sink_.push_back(emission);
        out.push_back(std::move(emission));
        next_fire_[i] += q.compute_every.ms;
    }
    if (eviction_) evict_before(fire_time);
}

void Engine::evict_before(std::int64_t fire_time) {
    for (auto& [iri, buf] : buffers_) {
        // Keep everything a registered subscriber's future window could read.
        std::int64_t max_range = -1;
        for (const RegisteredQuery& q : queries_)
            for (const StreamSource& s : q.sources)
                if (s.stream_iri == iri) max_range = std::max(max_range, s.range.ms);
        if (max_range < 0) continue;  // unsubscribed: future registrations may need it
        std::int64_t cutoff = fire_time - max_range;
        auto keep_from = std::partition_point(
            buf.elements.begin(), buf.elements.end(),
            [&](const TimestampedTriple& e) { return e.timestamp <= cutoff; });
        buf.elements.erase(buf.elements.begin(), keep_from);
    }
}

std::vector<Emission> Engine::advance_clock(std::int64_t to) {
    if (to < clock_)
        throw EngineError("clock cannot move backwards: " + std::to_string(to) + " < " +
                          std::to_string(clock_));
    std::vector<Emission> out;
    for (;;) {
        std::int64_t next = -1;
        for (std::size_t i = 0; i < queries_.size(); ++i)
            if (next_fire_[i] > clock_ && next_fire_[i] <= to)
                next = next < 0 ? next_fire_[i] : std::min(next, next_fire_[i]);
        if (next < 0) break;
        clock_ = next;
        fire_at(next, out);
    }
    clock_ = to;
    return out;
}

} // namespace cpps
