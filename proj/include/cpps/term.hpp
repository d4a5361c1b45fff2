#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "cpps/number.hpp"

namespace cpps {

enum class TermKind { Iri, Literal, BlankNode, Variable };

/// One RDF term: IRI, typed literal, blank node, or query variable.
/// Value type, totally ordered (kind, then text, then datatype) so that
/// bindings and serializations are reproducible.
class Term {
public:
    Term() = default;

    /// Throws std::invalid_argument on an empty IRI or one containing whitespace.
    static Term iri(std::string text);
    static Term literal(std::string lexical, std::string datatype_iri);
    static Term blank(std::string label);
    /// Throws std::invalid_argument unless name matches [A-Za-z_][A-Za-z0-9_]*.
    static Term variable(std::string name);

    static Term integer_literal(std::int64_t value);
    static Term decimal_literal(const Number& value);
    static Term string_literal(std::string value);
    static Term boolean_literal(bool value);
    /// Literal with the datatype that best preserves the value: xsd:integer,
    /// xsd:decimal when the decimal expansion is finite, xsd:double otherwise.
    static Term number_literal(const Number& value);

    TermKind kind() const { return kind_; }
    bool is_iri() const { return kind_ == TermKind::Iri; }
    bool is_literal() const { return kind_ == TermKind::Literal; }
    bool is_blank() const { return kind_ == TermKind::BlankNode; }
    bool is_variable() const { return kind_ == TermKind::Variable; }

    /// IRI text, literal lexical form, blank label, or variable name.
    const std::string& text() const { return text_; }
    /// Datatype IRI; empty unless this is a literal.
    const std::string& datatype() const { return datatype_; }

    bool is_numeric_literal() const;

    /// N-Triples-style rendering: <iri>, "lex"^^<dt>, _:label, ?name.
    std::string to_string() const;

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term&, const Term&) = default;

private:
    TermKind kind_ = TermKind::Iri;
    std::string text_;
    std::string datatype_;
};

/// Numeric value of a literal with an xsd numeric datatype. Exact for
/// xsd:integer and xsd:decimal. Throws EvalError on a non-numeric datatype
/// or an unparseable lexical form.
Number numeric_value(const Term& literal);

/// Concrete triple: subject (IRI or blank), IRI predicate, any non-variable object.
struct Triple {
    Term subject;
    Term predicate;
    Term object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;

    std::string to_string() const;
};

/// Throws std::invalid_argument when a position violates the triple invariants.
Triple make_triple(Term subject, Term predicate, Term object);

/// Stream element: a triple stamped in virtual-clock milliseconds.
struct TimestampedTriple {
    Triple triple;
    std::int64_t timestamp = 0;

    friend bool operator==(const TimestampedTriple&, const TimestampedTriple&) = default;
};

/// Triple pattern; any position may hold a Variable.
struct TriplePattern {
    Term subject;
    Term predicate;
    Term object;

    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

} // namespace cpps
