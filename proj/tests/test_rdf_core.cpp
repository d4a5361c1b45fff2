#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "cpps/errors.hpp"
#include "cpps/graph.hpp"
#include "cpps/number.hpp"
#include "cpps/term.hpp"
#include "cpps/turtle.hpp"
#include "cpps/vocab.hpp"

using namespace cpps;

// ---------------------------------------------------------------------------
// Number
// ---------------------------------------------------------------------------

TEST_CASE("exact integer arithmetic stays exact") {
    Number a = Number::from_int(1440);
    Number b = Number::from_int(144);
    Number r = (a - b) / a;
    CHECK(r.exact());
    CHECK(r == Number::ratio(9, 10));
    CHECK(r.to_lexical() == "0.9");
    CHECK(r.to_double() == doctest::Approx(0.9));
}

TEST_CASE("rationals reduce to lowest terms") {
    Number r = Number::ratio(1200, 1296);
    CHECK(r.numerator() == 25);
    CHECK(r.denominator() == 27);
    CHECK(!r.has_finite_decimal());

    Number s = Number::ratio(-6, 4);
    CHECK(s.numerator() == -3);
    CHECK(s.denominator() == 2);
    CHECK(s.to_lexical() == "-1.5");
}

TEST_CASE("finite decimal expansions render exactly") {
    CHECK(Number::ratio(1, 8).to_lexical() == "0.125");
    CHECK(Number::ratio(3, 20).to_lexical() == "0.15");
    CHECK(Number::ratio(25, 32).to_lexical() == "0.78125");
    CHECK(Number::from_int(48).to_lexical() == "48");
    CHECK(Number::from_int(-7).to_lexical() == "-7");
    CHECK(Number::ratio(0, 5).to_lexical() == "0");
}

TEST_CASE("parse_decimal round-trips lexical forms") {
    CHECK(Number::parse_decimal("144") == Number::from_int(144));
    CHECK(Number::parse_decimal("-4.25") == Number::ratio(-17, 4));
    CHECK(Number::parse_decimal("0.9") == Number::ratio(9, 10));
    CHECK(Number::parse_decimal("+3") == Number::from_int(3));
    CHECK_THROWS_AS(Number::parse_decimal("abc"), EvalError);
    CHECK_THROWS_AS(Number::parse_decimal(""), EvalError);
    CHECK_THROWS_AS(Number::parse_decimal("1.2.3"), EvalError);
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS_AS(Number::from_int(1) / Number::from_int(0), EvalError);
    CHECK_THROWS_AS(Number::ratio(1, 0), EvalError);
}

TEST_CASE("overflow degrades to double instead of wrapping") {
    Number big = Number::from_int(INT64_MAX);
    Number r = big * big;
    CHECK(!r.exact());
    CHECK(r.to_double() == doctest::Approx(8.5070591730234616e37).epsilon(1e-9));

    // Sum of incompatible denominators beyond int64 range.
    Number a = Number::ratio(1, INT64_MAX);
    Number b = Number::ratio(1, INT64_MAX - 1);
    CHECK(!(a + b).exact());
}

TEST_CASE("comparisons are exact for rationals") {
    CHECK(Number::ratio(1, 3) < Number::ratio(34, 100));
    CHECK(Number::ratio(2, 6) == Number::ratio(1, 3));
    CHECK(Number::from_int(5) > Number::ratio(49, 10));
    CHECK(Number::ratio(-1, 2).compare(Number::from_int(0)) < 0);
    // Mixed exact/inexact falls back to double compare.
    CHECK(Number::from_double(0.5) == Number::ratio(1, 2));
}

TEST_CASE("parse_double handles exponents") {
    Number d = Number::parse_double("1.5e2");
    CHECK(!d.exact());
    CHECK(d.to_double() == doctest::Approx(150.0));
    CHECK_THROWS_AS(Number::parse_double("nope"), EvalError);
}

// ---------------------------------------------------------------------------
// Term / Triple
// ---------------------------------------------------------------------------

TEST_CASE("term factories validate their inputs") {
    CHECK_THROWS_AS(Term::iri(""), std::invalid_argument);
    CHECK_THROWS_AS(Term::iri("http://x y"), std::invalid_argument);
    CHECK_THROWS_AS(Term::variable("9bad"), std::invalid_argument);
    CHECK_THROWS_AS(Term::variable(""), std::invalid_argument);
    CHECK(Term::variable("downTime").text() == "downTime");
}

TEST_CASE("number_literal picks the narrowest xsd datatype") {
    CHECK(Term::number_literal(Number::from_int(42)).datatype() == vocab::kXsdInteger);
    CHECK(Term::number_literal(Number::ratio(9, 10)).datatype() == vocab::kXsdDecimal);
    CHECK(Term::number_literal(Number::ratio(1, 3)).datatype() == vocab::kXsdDouble);
    CHECK(Term::number_literal(Number::from_double(0.25)).datatype() == vocab::kXsdDouble);
}

TEST_CASE("numeric_value reads numeric literals and rejects the rest") {
    CHECK(numeric_value(Term::integer_literal(7)) == Number::from_int(7));
    CHECK(numeric_value(Term::literal("0.9", vocab::kXsdDecimal)) == Number::ratio(9, 10));
    CHECK(numeric_value(Term::literal("2.5e1", vocab::kXsdDouble)).to_double() ==
          doctest::Approx(25.0));
    CHECK_THROWS_AS(numeric_value(Term::string_literal("hi")), EvalError);
    CHECK_THROWS_AS(numeric_value(Term::iri("http://x")), EvalError);
}

TEST_CASE("make_triple enforces positional invariants") {
    Term s = Term::iri("http://x/s");
    Term p = Term::iri("http://x/p");
    Term o = Term::integer_literal(1);
    CHECK_NOTHROW(make_triple(s, p, o));
    CHECK_NOTHROW(make_triple(Term::blank("b0"), p, o));
    CHECK_THROWS_AS(make_triple(o, p, o), std::invalid_argument);
    CHECK_THROWS_AS(make_triple(s, Term::blank("b"), o), std::invalid_argument);
    CHECK_THROWS_AS(make_triple(s, p, Term::variable("v")), std::invalid_argument);
    CHECK_THROWS_AS(make_triple(Term::variable("v"), p, o), std::invalid_argument);
}

TEST_CASE("terms order deterministically") {
    std::vector<Term> terms = {
        Term::integer_literal(2),
        Term::iri("http://b"),
        Term::iri("http://a"),
        Term::blank("n1"),
    };
    std::sort(terms.begin(), terms.end());
    CHECK(terms[0].is_iri());
    CHECK(terms[0].text() == "http://a");
    CHECK(terms[1].text() == "http://b");
    CHECK(terms[2].is_literal());
    CHECK(terms[3].is_blank());
}

// ---------------------------------------------------------------------------
// StaticGraph
// ---------------------------------------------------------------------------

namespace {

StaticGraph sample_graph() {
    StaticGraph g;
    Term line = Term::iri("http://cpps.example/plant/ProductionLine");
    Term s1 = Term::iri("http://cpps.example/plant/sensor/v1");
    Term s2 = Term::iri("http://cpps.example/plant/sensor/v2");
    Term hosts = Term::iri(vocab::kSosaHosts);
    Term observes = Term::iri(vocab::kSosaObserves);
    g.insert(make_triple(line, hosts, s1));
    g.insert(make_triple(line, hosts, s2));
    g.insert(make_triple(s1, observes, Term::iri("http://cpps.example/plant/foi/voltage")));
    return g;
}

} // namespace

TEST_CASE("graph deduplicates and matches with seeds") {
    StaticGraph g = sample_graph();
    CHECK(g.size() == 3);
    Term line = Term::iri("http://cpps.example/plant/ProductionLine");
    Term hosts = Term::iri(vocab::kSosaHosts);
    CHECK(!g.insert(make_triple(line, hosts, Term::iri("http://cpps.example/plant/sensor/v1"))));
    CHECK(g.size() == 3);

    TriplePattern p{Term::variable("line"), hosts, Term::variable("sensor")};
    auto rows = g.match(p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].at("sensor").text() == "http://cpps.example/plant/sensor/v1");
    CHECK(rows[1].at("sensor").text() == "http://cpps.example/plant/sensor/v2");

    Bindings seed;
    seed["sensor"] = Term::iri("http://cpps.example/plant/sensor/v2");
    auto seeded = g.match(p, seed);
    REQUIRE(seeded.size() == 1);
    CHECK(seeded[0].at("line") == line);
    CHECK(seeded[0].at("sensor").text() == "http://cpps.example/plant/sensor/v2");
}

TEST_CASE("repeated variables must unify") {
    StaticGraph g;
    Term p = Term::iri("http://x/p");
    g.insert(make_triple(Term::iri("http://x/a"), p, Term::iri("http://x/a")));
    g.insert(make_triple(Term::iri("http://x/a"), p, Term::iri("http://x/b")));
    TriplePattern self{Term::variable("n"), p, Term::variable("n")};
    auto rows = g.match(self);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("n").text() == "http://x/a");
}

TEST_CASE("ground pattern match acts as containment test") {
    StaticGraph g = sample_graph();
    Term line = Term::iri("http://cpps.example/plant/ProductionLine");
    Term hosts = Term::iri(vocab::kSosaHosts);
    TriplePattern hit{line, hosts, Term::iri("http://cpps.example/plant/sensor/v1")};
    TriplePattern miss{line, hosts, Term::iri("http://cpps.example/plant/sensor/v9")};
    CHECK(g.match(hit).size() == 1);
    CHECK(g.match(hit)[0].empty());
    CHECK(g.match(miss).empty());
}

// ---------------------------------------------------------------------------
// Turtle
// ---------------------------------------------------------------------------

TEST_CASE("turtle parses prefixes, lists, and typed literals") {
    const char* text = R"(@prefix sosa: <http://www.w3.org/ns/sosa/> .
@prefix plant: <http://cpps.example/plant/> .

plant:WELDING/W1A a sosa:Platform ;
    sosa:hosts plant:sensor/w1 , plant:sensor/w2 .
plant:sensor/w1 sosa:observes plant:foi/voltage .
plant:obs/1 sosa:hasSimpleResult "4.2"^^<http://www.w3.org/2001/XMLSchema#decimal> .
plant:obs/2 sosa:hasSimpleResult 12 .
)";
    StaticGraph g = parse_turtle(text);
    CHECK(g.size() == 6);
    CHECK(g.contains(make_triple(Term::iri("http://cpps.example/plant/WELDING/W1A"),
                                 Term::iri(vocab::kRdfType), Term::iri(vocab::kSosaPlatform))));
    CHECK(g.contains(make_triple(Term::iri("http://cpps.example/plant/obs/2"),
                                 Term::iri(vocab::kSosaHasSimpleResult),
                                 Term::literal("12", vocab::kXsdInteger))));
    CHECK(g.contains(make_triple(Term::iri("http://cpps.example/plant/obs/1"),
                                 Term::iri(vocab::kSosaHasSimpleResult),
                                 Term::literal("4.2", vocab::kXsdDecimal))));
}

TEST_CASE("turtle round-trips through the writer") {
    StaticGraph g = sample_graph();
    g.insert(make_triple(Term::iri("http://cpps.example/plant/obs/5"),
                         Term::iri(vocab::kSosaHasSimpleResult),
                         Term::literal("3.75", vocab::kXsdDecimal)));
    g.insert(make_triple(Term::blank("row0"), Term::iri("http://cpps.example/binding#downTime"),
                         Term::integer_literal(144)));
    g.insert(make_triple(Term::iri("http://cpps.example/plant/obs/6"),
                         Term::iri("http://www.w3.org/2000/01/rdf-schema#label"),
                         Term::string_literal("line \"A\"\nshift 2")));
    std::string text = serialize_turtle(g);
    StaticGraph back = parse_turtle(text);
    CHECK(back == g);
}

TEST_CASE("turtle reports position on errors") {
    try {
        parse_turtle("bad:local <http://x/p> <http://x/o> .");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_turtle("<http://x/s> <http://x/p> ."), ParseError);
    CHECK_THROWS_AS(parse_turtle("\"lit\" <http://x/p> <http://x/o> ."), ParseError);
    CHECK_THROWS_AS(parse_turtle("<http://x/s> <http://x/p> <http://x/o>"), ParseError);
}

TEST_CASE("turtle accepts the a keyword only in predicate position") {
    StaticGraph g = parse_turtle("<http://x/s> a <http://x/C> .");
    CHECK(g.contains(
        make_triple(Term::iri("http://x/s"), Term::iri(vocab::kRdfType), Term::iri("http://x/C"))));
}
