#include "cpps/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cpps/errors.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

std::map<std::string, std::string> default_prefixes() {
    return {
        {"rdf", vocab::kRdfNs},
        {"rdfs", vocab::kRdfsNs},
        {"xsd", vocab::kXsdNs},
        {"sosa", vocab::kSosaNs},
    };
}

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class TurtleParser {
public:
    explicit TurtleParser(std::string_view text)
        : text_(text), prefixes_(default_prefixes()) {}

    StaticGraph parse() {
        StaticGraph graph;
        skip_ws();
        while (!at_end()) {
            if (peek() == '@') {
                parse_prefix_directive();
            } else {
                parse_statement(graph);
            }
            skip_ws();
        }
        return graph;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, column_);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_ws() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    void parse_prefix_directive() {
        // @prefix name: <iri> .
        for (char c : std::string_view("@prefix")) {
            if (at_end() || peek() != c) fail("expected @prefix directive");
            advance();
        }
        skip_ws();
        std::string name;
        while (!at_end() && is_name_char(peek())) name += advance();
        expect(':');
        skip_ws();
        Term iri = parse_iri_ref();
        skip_ws();
        expect('.');
        prefixes_[name] = iri.text();
    }

    Term parse_iri_ref() {
        expect('<');
        std::string text;
        while (!at_end() && peek() != '>') {
            char c = advance();
            if (std::isspace(static_cast<unsigned char>(c))) fail("whitespace inside IRI");
            text += c;
        }
        expect('>');
        if (text.empty()) fail("empty IRI");
        return Term::iri(text);
    }

    Term parse_prefixed_name() {
        std::string prefix;
        while (!at_end() && is_name_char(peek())) prefix += advance();
        expect(':');
        std::string local;
        while (!at_end() && (is_name_char(peek()) || peek() == '/')) local += advance();
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail("unknown prefix '" + prefix + ":'");
        return Term::iri(it->second + local);
    }

    Term parse_blank() {
        expect('_');
        expect(':');
        std::string label;
        while (!at_end() && is_name_char(peek())) label += advance();
        if (label.empty()) fail("empty blank node label");
        return Term::blank(label);
    }

    Term parse_string_literal() {
        expect('"');
        std::string lexical;
        while (true) {
            if (at_end()) fail("unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("dangling escape");
                char e = advance();
                switch (e) {
                case '"': lexical += '"'; break;
                case '\\': lexical += '\\'; break;
                case 'n': lexical += '\n'; break;
                case 'r': lexical += '\r'; break;
                case 't': lexical += '\t'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                lexical += c;
            }
        }
        if (!at_end() && peek() == '^') {
            advance();
            expect('^');
            Term datatype = peek() == '<' ? parse_iri_ref() : parse_prefixed_name();
            return Term::literal(lexical, datatype.text());
        }
        return Term::literal(lexical, vocab::kXsdString);
    }

    Term parse_numeric_literal() {
        std::string lexical;
        if (peek() == '+' || peek() == '-') lexical += advance();
        bool has_dot = false;
        bool has_exp = false;
        while (!at_end()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lexical += advance();
            } else if (c == '.' && !has_dot && !has_exp) {
                // A '.' not followed by a digit terminates the statement instead.
                if (pos_ + 1 >= text_.size() ||
                    !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
                    break;
                has_dot = true;
                lexical += advance();
            } else if ((c == 'e' || c == 'E') && !has_exp) {
                has_exp = true;
                lexical += advance();
                if (!at_end() && (peek() == '+' || peek() == '-')) lexical += advance();
            } else {
                break;
            }
        }
        if (lexical.empty() || lexical == "+" || lexical == "-") fail("malformed number");
        if (has_exp) return Term::literal(lexical, vocab::kXsdDouble);
        if (has_dot) return Term::literal(lexical, vocab::kXsdDecimal);
        return Term::literal(lexical, vocab::kXsdInteger);
    }

    Term parse_term(bool as_predicate) {
        if (at_end()) fail("unexpected end of input");
        char c = peek();
        if (c == '<') return parse_iri_ref();
        if (c == '_') return parse_blank();
        if (c == '"') return parse_string_literal();
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)))
            return parse_numeric_literal();
        if (c == 'a' && as_predicate) {
            // `a` only counts as rdf:type when it stands alone.
            if (pos_ + 1 >= text_.size() ||
                std::isspace(static_cast<unsigned char>(text_[pos_ + 1]))) {
                advance();
                return Term::iri(vocab::kRdfType);
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == ':' || c == '_')
            return parse_prefixed_name();
        fail(std::string("unexpected character '") + c + "'");
    }

    void parse_statement(StaticGraph& graph) {
        Term subject = parse_term(false);
        if (subject.is_literal()) fail("subject must not be a literal");
        while (true) {
            skip_ws();
            Term predicate = parse_term(true);
            if (!predicate.is_iri()) fail("predicate must be an IRI");
            while (true) {
                skip_ws();
                Term object = parse_term(false);
                graph.insert(make_triple(subject, predicate, object));
                skip_ws();
                if (!at_end() && peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
            if (!at_end() && peek() == ';') {
                advance();
                skip_ws();
                // Allow a trailing ';' before the closing '.'.
                if (!at_end() && peek() == '.') break;
                continue;
            }
            break;
        }
        skip_ws();
        expect('.');
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    std::map<std::string, std::string> prefixes_;
};

bool plain_integer_lexical(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

bool plain_decimal_lexical(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    bool digits_before = false, dot = false, digits_after = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            (dot ? digits_after : digits_before) = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return dot && digits_before && digits_after;
}

std::string escape_literal(const std::string& lexical) {
    std::string out;
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

class TurtleWriter {
public:
    std::string write(const StaticGraph& graph) {
        std::map<std::string, std::string> prefixes = default_prefixes();

        std::ostringstream body;
        // Deterministic output: subjects and predicates in term order.
        std::map<Term, std::map<Term, std::vector<Term>>> grouped;
        for (const Triple& t : graph.triples())
            grouped[t.subject][t.predicate].push_back(t.object);

        for (auto& [subject, predicates] : grouped) {
            body << render(subject, prefixes);
            bool first_predicate = true;
            for (auto& [predicate, objects] : predicates) {
                body << (first_predicate ? " " : " ;\n    ");
                first_predicate = false;
                body << render_predicate(predicate, prefixes);
                std::sort(objects.begin(), objects.end());
                for (std::size_t i = 0; i < objects.size(); ++i)
                    body << (i == 0 ? " " : ", ") << render(objects[i], prefixes);
            }
            body << " .\n";
        }

        std::ostringstream out;
        for (const auto& [name, iri] : used_prefixes_)
            out << "@prefix " << name << ": <" << iri << "> .\n";
        if (!used_prefixes_.empty() && !grouped.empty()) out << "\n";
        out << body.str();
        return out.str();
    }

private:
    std::string render_predicate(const Term& predicate,
                                 const std::map<std::string, std::string>& prefixes) {
        if (predicate.text() == vocab::kRdfType) return "a";
        return render(predicate, prefixes);
    }

    std::string render(const Term& term, const std::map<std::string, std::string>& prefixes) {
        switch (term.kind()) {
        case TermKind::Iri: {
            for (const auto& [name, ns] : prefixes) {
                if (term.text().starts_with(ns)) {
                    std::string local = term.text().substr(ns.size());
                    if (!local.empty() &&
                        std::all_of(local.begin(), local.end(),
                                    [](char c) { return is_name_char(c) || c == '/'; })) {
                        used_prefixes_[name] = ns;
                        return name + ":" + local;
                    }
                }
            }
            return "<" + term.text() + ">";
        }
        case TermKind::BlankNode:
            return "_:" + term.text();
        case TermKind::Literal: {
            const std::string& dt = term.datatype();
            if (dt == vocab::kXsdInteger && plain_integer_lexical(term.text()))
                return term.text();
            if (dt == vocab::kXsdDecimal && plain_decimal_lexical(term.text()))
                return term.text();
            std::string quoted = "\"" + escape_literal(term.text()) + "\"";
            if (dt.empty() || dt == vocab::kXsdString) return quoted;
            return quoted + "^^" + render(Term::iri(dt), prefixes);
        }
        case TermKind::Variable:
            break;
        }
        return term.to_string();
    }

    std::map<std::string, std::string> used_prefixes_;
};

} // namespace

StaticGraph parse_turtle(std::string_view text) {
    return TurtleParser(text).parse();
}

std::string serialize_turtle(const StaticGraph& graph) {
    return TurtleWriter().write(graph);
}

} // namespace cpps
