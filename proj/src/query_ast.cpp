#include "cpps/query_ast.hpp"

#include <sstream>

namespace cpps {

std::string duration_to_string(Duration d) {
    struct Unit {
        std::int64_t ms;
        const char* suffix;
    };
    static constexpr Unit kUnits[] = {
        {86'400'000, "d"}, {3'600'000, "h"}, {60'000, "m"}, {1'000, "s"}, {1, "ms"}};
    for (const Unit& u : kUnits)
        if (d.ms % u.ms == 0) return std::to_string(d.ms / u.ms) + u.suffix;
    return std::to_string(d.ms) + "ms";
}

ExprPtr Expr::var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Var;
    e->var_name = std::move(name);
    return e;
}

ExprPtr Expr::num(Number value) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Num;
    e->value = value;
    return e;
}

ExprPtr Expr::iri(Term term) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::IriConst;
    e->term = std::move(term);
    return e;
}

ExprPtr Expr::binary(ExprOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    switch (a->op) {
    case ExprOp::Var: return a->var_name == b->var_name;
    case ExprOp::Num: return a->value == b->value;
    case ExprOp::IriConst: return a->term == b->term;
    default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

void collect_expr_vars(const ExprPtr& expr, std::set<std::string>& out) {
    if (!expr) return;
    if (expr->op == ExprOp::Var) {
        out.insert(expr->var_name);
        return;
    }
    collect_expr_vars(expr->lhs, out);
    collect_expr_vars(expr->rhs, out);
}

namespace {

const char* op_symbol(ExprOp op) {
    switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Eq: return "=";
    case ExprOp::Ne: return "!=";
    case ExprOp::And: return "&&";
    case ExprOp::Or: return "||";
    default: return "?";
    }
}

std::string pattern_term_to_string(const Term& t) {
    // Patterns render in query syntax; literals reuse the N-Triples form.
    return t.to_string();
}

} // namespace

std::string expr_to_string(const ExprPtr& expr) {
    if (!expr) return "";
    switch (expr->op) {
    case ExprOp::Var: return "?" + expr->var_name;
    case ExprOp::Num: return expr->value.to_lexical();
    case ExprOp::IriConst: return expr->term.to_string();
    default:
        return "(" + expr_to_string(expr->lhs) + " " + op_symbol(expr->op) + " " +
               expr_to_string(expr->rhs) + ")";
    }
}

std::string SelectItem::output_name() const {
    if (!alias.empty()) return alias;
    return expr && expr->op == ExprOp::Var ? expr->var_name : std::string{};
}

bool select_item_equal(const SelectItem& a, const SelectItem& b) {
    return a.alias == b.alias && expr_equal(a.expr, b.expr);
}

std::string aggregate_function_name(AggregateFunction f) {
    switch (f) {
    case AggregateFunction::Count: return "COUNT";
    case AggregateFunction::Sum: return "SUM";
    case AggregateFunction::Avg: return "AVG";
    case AggregateFunction::Min: return "MIN";
    case AggregateFunction::Max: return "MAX";
    }
    return "COUNT";
}

bool aggregate_equal(const AggregateClause& a, const AggregateClause& b) {
    return a.out_var == b.out_var && a.function == b.function && a.over_vars == b.over_vars &&
           expr_equal(a.filter, b.filter);
}

std::set<std::string> RegisteredQuery::where_variables() const {
    std::set<std::string> vars;
    for (const TriplePattern& p : where)
        for (const Term* t : {&p.subject, &p.predicate, &p.object})
            if (t->is_variable()) vars.insert(t->text());
    return vars;
}

std::set<std::string> RegisteredQuery::output_variables() const {
    std::set<std::string> out;
    for (const SelectItem& item : select) {
        std::string name = item.output_name();
        if (!name.empty()) out.insert(name);
    }
    return out;
}

std::set<std::string> RegisteredQuery::aggregate_outputs() const {
    std::set<std::string> out;
    for (const AggregateClause& a : aggregates) out.insert(a.out_var);
    return out;
}

bool query_equal(const RegisteredQuery& a, const RegisteredQuery& b) {
    if (a.kind != b.kind || a.name != b.name || a.compute_every != b.compute_every ||
        a.sources != b.sources || a.where != b.where)
        return false;
    if (a.select.size() != b.select.size() || a.filters.size() != b.filters.size() ||
        a.aggregates.size() != b.aggregates.size())
        return false;
    for (std::size_t i = 0; i < a.select.size(); ++i)
        if (!select_item_equal(a.select[i], b.select[i])) return false;
    for (std::size_t i = 0; i < a.filters.size(); ++i)
        if (!expr_equal(a.filters[i], b.filters[i])) return false;
    for (std::size_t i = 0; i < a.aggregates.size(); ++i)
        if (!aggregate_equal(a.aggregates[i], b.aggregates[i])) return false;
    return true;
}

std::string serialize_query(const RegisteredQuery& q) {
    std::ostringstream out;
    out << "REGISTER " << (q.kind == QueryKind::Stream ? "STREAM" : "QUERY") << " " << q.name
        << " COMPUTED EVERY " << duration_to_string(q.compute_every) << " AS\n";
    for (const auto& [name, iri] : q.prefixes)
        out << "  PREFIX " << name << ": <" << iri << ">\n";
    out << "  SELECT";
    for (const SelectItem& item : q.select) {
        if (item.alias.empty()) {
            out << " " << expr_to_string(item.expr);
        } else {
            // Select items are juxtaposed, so an aliased expression is
            // parenthesized to keep it from continuing the previous item.
            std::string rendered = expr_to_string(item.expr);
            if (rendered.empty() || rendered.front() != '(') rendered = "(" + rendered + ")";
            out << " " << rendered << " AS ?" << item.alias;
        }
    }
    out << "\n";
    for (const StreamSource& s : q.sources)
        out << "  FROM STREAM <" << s.stream_iri << "> [RANGE " << duration_to_string(s.range)
            << " STEP " << duration_to_string(s.step) << "]\n";
    if (!q.where.empty()) {
        out << "  WHERE {";
        for (std::size_t i = 0; i < q.where.size(); ++i) {
            const TriplePattern& p = q.where[i];
            if (i > 0) out << "\n         ";
            out << pattern_term_to_string(p.subject) << " " << pattern_term_to_string(p.predicate)
                << " " << pattern_term_to_string(p.object);
            if (i + 1 < q.where.size()) out << ".";
        }
        out << "}\n";
    }
    for (const ExprPtr& f : q.filters)
        out << "  FILTER (" << expr_to_string(f) << ")\n";
    if (!q.aggregates.empty()) {
        out << "  AGGREGATE {";
        for (const AggregateClause& a : q.aggregates) {
            out << "(?" << a.out_var << ", " << aggregate_function_name(a.function) << ", {";
            for (std::size_t i = 0; i < a.over_vars.size(); ++i)
                out << (i == 0 ? "?" : ", ?") << a.over_vars[i];
            out << "})";
            if (a.filter) out << "\n    FILTER (" << expr_to_string(a.filter) << ")";
        }
        out << "}\n";
    }
    return out.str();
}

} // namespace cpps
