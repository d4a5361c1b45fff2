#include "cpps/term.hpp"

#include <cctype>
#include <stdexcept>

#include "cpps/errors.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

namespace {

bool valid_variable_name(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string escape_literal(const std::string& lexical) {
    std::string out;
    out.reserve(lexical.size() + 2);
    for (char c : lexical) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

Term Term::iri(std::string text) {
    if (text.empty()) throw std::invalid_argument("IRI must be non-empty");
    for (char c : text)
        if (std::isspace(static_cast<unsigned char>(c)))
            throw std::invalid_argument("IRI contains whitespace: '" + text + "'");
    Term t;
    t.kind_ = TermKind::Iri;
    t.text_ = std::move(text);
    return t;
}

Term Term::literal(std::string lexical, std::string datatype_iri) {
    Term t;
    t.kind_ = TermKind::Literal;
    t.text_ = std::move(lexical);
    t.datatype_ = std::move(datatype_iri);
    return t;
}

Term Term::blank(std::string label) {
    if (label.empty()) throw std::invalid_argument("blank node label must be non-empty");
    Term t;
    t.kind_ = TermKind::BlankNode;
    t.text_ = std::move(label);
    return t;
}

Term Term::variable(std::string name) {
    if (!valid_variable_name(name))
        throw std::invalid_argument("invalid variable name: '" + name + "'");
    Term t;
    t.kind_ = TermKind::Variable;
    t.text_ = std::move(name);
    return t;
}

Term Term::integer_literal(std::int64_t value) {
    return literal(std::to_string(value), vocab::kXsdInteger);
}

Term Term::decimal_literal(const Number& value) {
    return literal(value.to_lexical(), vocab::kXsdDecimal);
}

Term Term::string_literal(std::string value) {
    return literal(std::move(value), vocab::kXsdString);
}

Term Term::boolean_literal(bool value) {
    return literal(value ? "true" : "false", vocab::kXsdBoolean);
}

Term Term::number_literal(const Number& value) {
    if (value.is_integer()) return literal(value.to_lexical(), vocab::kXsdInteger);
    if (value.has_finite_decimal()) return literal(value.to_lexical(), vocab::kXsdDecimal);
    return literal(value.to_lexical(), vocab::kXsdDouble);
}

bool Term::is_numeric_literal() const {
    if (kind_ != TermKind::Literal) return false;
    return datatype_ == vocab::kXsdInteger || datatype_ == vocab::kXsdDecimal ||
           datatype_ == vocab::kXsdDouble;
}

std::string Term::to_string() const {
    switch (kind_) {
    case TermKind::Iri: return "<" + text_ + ">";
    case TermKind::Literal:
        if (datatype_.empty() || datatype_ == vocab::kXsdString)
            return "\"" + escape_literal(text_) + "\"";
        return "\"" + escape_literal(text_) + "\"^^<" + datatype_ + ">";
    case TermKind::BlankNode: return "_:" + text_;
    case TermKind::Variable: return "?" + text_;
    }
    return {};
}

Number numeric_value(const Term& literal) {
    if (!literal.is_literal())
        throw EvalError("not a literal: " + literal.to_string());
    const std::string& dt = literal.datatype();
    if (dt == vocab::kXsdInteger || dt == vocab::kXsdDecimal)
        return Number::parse_decimal(literal.text());
    if (dt == vocab::kXsdDouble)
        return Number::parse_double(literal.text());
    throw EvalError("not a numeric literal: " + literal.to_string());
}

std::string Triple::to_string() const {
    return subject.to_string() + " " + predicate.to_string() + " " + object.to_string() + " .";
}

Triple make_triple(Term subject, Term predicate, Term object) {
    if (!subject.is_iri() && !subject.is_blank())
        throw std::invalid_argument("triple subject must be an IRI or blank node");
    if (!predicate.is_iri())
        throw std::invalid_argument("triple predicate must be an IRI");
    if (object.is_variable())
        throw std::invalid_argument("triple object must not be a variable");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

} // namespace cpps
