#include "cpps/query_parser.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "cpps/errors.hpp"
#include "cpps/turtle.hpp"
#include "cpps/vocab.hpp"

namespace cpps {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokenType {
    Ident,      // REGISTER, STREAM, names, COUNT, ...
    Variable,   // ?name
    IriRef,     // <...>
    PrefixedName,
    Number,     // integer or decimal constant
    DoubleNum,  // with exponent
    DurationTok,
    String,  // "..." (optionally ^^datatype handled by parser)
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    AndAnd,
    OrOr,
    HatHat,
    End,
};

struct Token {
    TokenType type = TokenType::End;
    std::string text;
    int line = 1;
    int column = 1;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            skip_ws();
            Token t = next();
            bool end = t.type == TokenType::End;
            tokens.push_back(std::move(t));
            if (end) break;
        }
        return tokens;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, column_);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

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

    Token make(TokenType type, std::string text, int line, int column) {
        return Token{type, std::move(text), line, column};
    }

    Token next() {
        int line = line_;
        int column = column_;
        if (at_end()) return make(TokenType::End, "", line, column);
        char c = peek();

        if (c == '?') {
            advance();
            if (!ident_start(peek())) fail("expected variable name after '?'");
            std::string name;
            while (ident_char(peek())) name += advance();
            return make(TokenType::Variable, name, line, column);
        }
        if (c == '<') {
            if (peek(1) == '=') {
                advance();
                advance();
                return make(TokenType::Le, "<=", line, column);
            }
            // <...> closed before any whitespace (or a second '<') is an IRI;
            // otherwise this is the comparison operator '<'.
            std::size_t look = pos_ + 1;
            bool iri = false;
            while (look < text_.size()) {
                char ch = text_[look];
                if (ch == '>') {
                    iri = true;
                    break;
                }
                if (std::isspace(static_cast<unsigned char>(ch)) || ch == '<' || ch == '"') break;
                ++look;
            }
            if (!iri) {
                advance();
                return make(TokenType::Lt, "<", line, column);
            }
            advance();  // '<'
            std::string text;
            while (peek() != '>') text += advance();
            advance();  // '>'
            if (text.empty()) fail("empty IRI");
            return make(TokenType::IriRef, text, line, column);
        }
        if (c == '"') {
            advance();
            std::string text;
            while (true) {
                if (at_end()) fail("unterminated string");
                char ch = advance();
                if (ch == '"') break;
                if (ch == '\\') {
                    char e = advance();
                    switch (e) {
                    case '"': text += '"'; break;
                    case '\\': text += '\\'; break;
                    case 'n': text += '\n'; break;
                    case 'r': text += '\r'; break;
                    case 't': text += '\t'; break;
                    default: fail("unsupported escape");
                    }
                } else {
                    text += ch;
                }
            }
            return make(TokenType::String, text, line, column);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            bool dot = false;
            bool exponent = false;
            while (!at_end()) {
                char ch = peek();
                if (std::isdigit(static_cast<unsigned char>(ch))) {
                    digits += advance();
                } else if (ch == '.' && !dot && !exponent &&
                           std::isdigit(static_cast<unsigned char>(peek(1)))) {
                    dot = true;
                    digits += advance();
                } else if ((ch == 'e' || ch == 'E') && !exponent &&
                           (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                            ((peek(1) == '+' || peek(1) == '-') &&
                             std::isdigit(static_cast<unsigned char>(peek(2)))))) {
                    exponent = true;
                    digits += advance();
                    if (peek() == '+' || peek() == '-') digits += advance();
                } else {
                    break;
                }
            }
            // Unit suffix turns a number into a duration: 24h, 1m, 500ms.
            if (!dot && !exponent && std::isalpha(static_cast<unsigned char>(peek()))) {
                std::string unit;
                while (std::isalpha(static_cast<unsigned char>(peek()))) unit += advance();
                if (unit != "ms" && unit != "s" && unit != "m" && unit != "h" && unit != "d")
                    fail("malformed duration unit '" + unit + "'");
                return make(TokenType::DurationTok, digits + unit, line, column);
            }
            return make(exponent ? TokenType::DoubleNum : TokenType::Number, digits, line, column);
        }
        if (ident_start(c)) {
            std::string name;
            while (ident_char(peek())) name += advance();
            if (peek() == ':') {
                advance();
                std::string local;
                while (ident_char(peek()) || peek() == '/' || peek() == '-') local += advance();
                return make(TokenType::PrefixedName, name + ":" + local, line, column);
            }
            return make(TokenType::Ident, name, line, column);
        }

        advance();
        switch (c) {
        case '(': return make(TokenType::LParen, "(", line, column);
        case ')': return make(TokenType::RParen, ")", line, column);
        case '{': return make(TokenType::LBrace, "{", line, column);
        case '}': return make(TokenType::RBrace, "}", line, column);
        case '[': return make(TokenType::LBracket, "[", line, column);
        case ']': return make(TokenType::RBracket, "]", line, column);
        case ',': return make(TokenType::Comma, ",", line, column);
        case '.': return make(TokenType::Dot, ".", line, column);
        case ':': return make(TokenType::Colon, ":", line, column);
        case '+': return make(TokenType::Plus, "+", line, column);
        case '*': return make(TokenType::Star, "*", line, column);
        case '/': return make(TokenType::Slash, "/", line, column);
        case '-': return make(TokenType::Minus, "-", line, column);
        case '=': return make(TokenType::Eq, "=", line, column);
        case '>':
            if (peek() == '=') {
                advance();
                return make(TokenType::Ge, ">=", line, column);
            }
            return make(TokenType::Gt, ">", line, column);
        case '!':
            if (peek() == '=') {
                advance();
                return make(TokenType::Ne, "!=", line, column);
            }
            fail("expected '=' after '!'");
        case '&':
            if (peek() == '&') {
                advance();
                return make(TokenType::AndAnd, "&&", line, column);
            }
            fail("expected '&&'");
        case '|':
            if (peek() == '|') {
                advance();
                return make(TokenType::OrOr, "||", line, column);
            }
            fail("expected '||'");
        case '^':
            if (peek() == '^') {
                advance();
                return make(TokenType::HatHat, "^^", line, column);
            }
            fail("expected '^^'");
        default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

bool keyword_is(const Token& t, std::string_view keyword) {
    if (t.type != TokenType::Ident || t.text.size() != keyword.size()) return false;
    for (std::size_t i = 0; i < keyword.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != keyword[i]) return false;
    return true;
}

class QueryParser {
public:
    QueryParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    RegisteredQuery parse_register() {
        RegisteredQuery q;
        expect_keyword("REGISTER");
        if (accept_keyword("STREAM"))
            q.kind = QueryKind::Stream;
        else if (accept_keyword("QUERY"))
            q.kind = QueryKind::Query;
        else
            fail("expected STREAM or QUERY");
        q.name = expect(TokenType::Ident, "query name").text;
        expect_keyword("COMPUTED");
        expect_keyword("EVERY");
        q.compute_every = expect_duration();
        expect_keyword("AS");

        while (accept_keyword("PREFIX")) {
            // The lexer folds "name:" into one PrefixedName token with an
            // empty local part; a bare Ident followed by ':' also appears
            // when whitespace separates them.
            Token name = next();
            std::string prefix_name;
            if (name.type == TokenType::PrefixedName && !name.text.empty() &&
                name.text.back() == ':') {
                prefix_name = name.text.substr(0, name.text.size() - 1);
            } else if (name.type == TokenType::Ident) {
                expect(TokenType::Colon, "':'");
                prefix_name = name.text;
            } else {
                fail_at(name, "expected prefix name");
            }
            Token iri = expect(TokenType::IriRef, "IRI");
            if (q.prefixes.count(prefix_name))
                fail_at(name, "duplicate PREFIX '" + prefix_name + ":'");
            q.prefixes[prefix_name] = iri.text;
        }
        prefixes_ = default_prefixes();
        for (const auto& [name, iri] : q.prefixes) prefixes_[name] = iri;

        expect_keyword("SELECT");
        while (starts_expression(peek())) {
            SelectItem item;
            item.expr = parse_expr();
            if (accept_keyword("AS")) {
                Token alias = expect(TokenType::Variable, "alias variable");
                item.alias = alias.text;
            } else if (item.expr->op != ExprOp::Var) {
                fail("compound select expression requires an AS alias");
            }
            q.select.push_back(std::move(item));
        }
        if (q.select.empty()) fail("SELECT requires at least one item");

        while (check_keyword("FROM")) {
            next();
            expect_keyword("STREAM");
            StreamSource source;
            source.stream_iri = expect(TokenType::IriRef, "stream IRI").text;
            expect(TokenType::LBracket, "'['");
            expect_keyword("RANGE");
            source.range = expect_duration();
            expect_keyword("STEP");
            source.step = expect_duration();
            expect(TokenType::RBracket, "']'");
            q.sources.push_back(std::move(source));
        }
        if (q.sources.empty()) fail("expected at least one FROM STREAM clause");

        if (accept_keyword("WHERE")) {
            expect(TokenType::LBrace, "'{'");
            while (peek().type != TokenType::RBrace) {
                if (check_keyword("FILTER")) {
                    q.filters.push_back(parse_filter());
                    continue;
                }
                TriplePattern p;
                p.subject = parse_pattern_term();
                p.predicate = parse_pattern_term();
                p.object = parse_pattern_term();
                q.where.push_back(std::move(p));
                if (peek().type == TokenType::Dot) next();
            }
            expect(TokenType::RBrace, "'}'");
        }

        for (;;) {
            if (check_keyword("FILTER")) {
                q.filters.push_back(parse_filter());
            } else if (check_keyword("AGGREGATE")) {
                next();
                expect(TokenType::LBrace, "'{'");
                while (peek().type == TokenType::LParen) {
                    AggregateClause clause;
                    next();  // '('
                    clause.out_var = expect(TokenType::Variable, "aggregate output variable").text;
                    expect(TokenType::Comma, "','");
                    Token func = expect(TokenType::Ident, "aggregate function");
                    clause.function = parse_aggregate_function(func);
                    expect(TokenType::Comma, "','");
                    expect(TokenType::LBrace, "'{'");
                    for (;;) {
                        clause.over_vars.push_back(
                            expect(TokenType::Variable, "aggregate variable").text);
                        if (peek().type != TokenType::Comma) break;
                        next();
                    }
                    expect(TokenType::RBrace, "'}'");
                    expect(TokenType::RParen, "')'");
                    if (check_keyword("FILTER")) clause.filter = parse_filter();
                    q.aggregates.push_back(std::move(clause));
                }
                expect(TokenType::RBrace, "'}'");
            } else {
                break;
            }
        }
        return q;
    }

    bool at_register_boundary() const { return keyword_is(peek(), "REGISTER"); }
    bool at_end() const { return peek().type == TokenType::End; }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing input");
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }

    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& message) const { fail_at(peek(), message); }

    [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
        throw ParseError(message, t.line, t.column);
    }

    const Token& expect(TokenType type, const std::string& what) {
        if (peek().type != type) fail("expected " + what);
        return next();
    }

    void expect_keyword(std::string_view keyword) {
        if (!keyword_is(peek(), keyword)) fail("expected " + std::string(keyword));
        next();
    }

    bool check_keyword(std::string_view keyword) const { return keyword_is(peek(), keyword); }

    bool accept_keyword(std::string_view keyword) {
        if (!check_keyword(keyword)) return false;
        next();
        return true;
    }

    Duration expect_duration() {
        const Token& t = peek();
        if (t.type == TokenType::DurationTok) {
            next();
            return parse_duration(t.text);
        }
        fail("expected duration (e.g. 24h, 1m)");
    }

    AggregateFunction parse_aggregate_function(const Token& t) {
        if (keyword_is(t, "COUNT")) return AggregateFunction::Count;
        if (keyword_is(t, "SUM")) return AggregateFunction::Sum;
        if (keyword_is(t, "AVG")) return AggregateFunction::Avg;
        if (keyword_is(t, "MIN")) return AggregateFunction::Min;
        if (keyword_is(t, "MAX")) return AggregateFunction::Max;
        fail_at(t, "unknown aggregate function '" + t.text + "'");
    }

    Term expand_prefixed(const Token& t) {
        auto colon = t.text.find(':');
        std::string prefix = t.text.substr(0, colon);
        std::string local = t.text.substr(colon + 1);
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail_at(t, "unknown prefix '" + prefix + ":'");
        return Term::iri(it->second + local);
    }

    ExprPtr parse_filter() {
        expect_keyword("FILTER");
        expect(TokenType::LParen, "'('");
        ExprPtr e = parse_expr();
        expect(TokenType::RParen, "')'");
        return e;
    }

    bool starts_expression(const Token& t) const {
        switch (t.type) {
        case TokenType::Variable:
        case TokenType::Number:
        case TokenType::DoubleNum:
        case TokenType::IriRef:
        case TokenType::PrefixedName:
        case TokenType::LParen:
        case TokenType::Minus:
            return true;
        default:
            return false;
        }
    }

    // Precedence: * / over + -, comparisons, &&, || lowest.
    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (peek().type == TokenType::OrOr) {
            next();
            lhs = Expr::binary(ExprOp::Or, lhs, parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_comparison();
        while (peek().type == TokenType::AndAnd) {
            next();
            lhs = Expr::binary(ExprOp::And, lhs, parse_comparison());
        }
        return lhs;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        std::optional<ExprOp> op;
        switch (peek().type) {
        case TokenType::Lt: op = ExprOp::Lt; break;
        case TokenType::Le: op = ExprOp::Le; break;
        case TokenType::Gt: op = ExprOp::Gt; break;
        case TokenType::Ge: op = ExprOp::Ge; break;
        case TokenType::Eq: op = ExprOp::Eq; break;
        case TokenType::Ne: op = ExprOp::Ne; break;
        default: break;
        }
        if (!op) return lhs;
        next();
        return Expr::binary(*op, lhs, parse_additive());
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        for (;;) {
            if (peek().type == TokenType::Plus) {
                next();
                lhs = Expr::binary(ExprOp::Add, lhs, parse_multiplicative());
            } else if (peek().type == TokenType::Minus) {
                next();
                lhs = Expr::binary(ExprOp::Sub, lhs, parse_multiplicative());
            } else {
                break;
            }
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (peek().type == TokenType::Star) {
                next();
                lhs = Expr::binary(ExprOp::Mul, lhs, parse_unary());
            } else if (peek().type == TokenType::Slash) {
                next();
                lhs = Expr::binary(ExprOp::Div, lhs, parse_unary());
            } else {
                break;
            }
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek().type == TokenType::Minus) {
            next();
            ExprPtr operand = parse_unary();
            if (operand->op == ExprOp::Num) return Expr::num(-operand->value);
            return Expr::binary(ExprOp::Sub, Expr::num(Number::from_int(0)), operand);
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.type) {
        case TokenType::Variable:
            next();
            return Expr::var(t.text);
        case TokenType::Number:
            next();
            return Expr::num(Number::parse_decimal(t.text));
        case TokenType::DoubleNum:
            next();
            return Expr::num(Number::parse_double(t.text));
        case TokenType::IriRef:
            next();
            return Expr::iri(Term::iri(t.text));
        case TokenType::PrefixedName: {
            next();
            return Expr::iri(expand_prefixed(t));
        }
        case TokenType::LParen: {
            next();
            ExprPtr e = parse_expr();
            expect(TokenType::RParen, "')'");
            return e;
        }
        default:
            fail("expected expression");
        }
    }

    Term parse_pattern_term() {
        const Token& t = peek();
        switch (t.type) {
        case TokenType::Variable:
            next();
            return Term::variable(t.text);
        case TokenType::IriRef:
            next();
            return Term::iri(t.text);
        case TokenType::PrefixedName:
            next();
            return expand_prefixed(t);
        case TokenType::Ident:
            if (t.text == "a") {
                next();
                return Term::iri(vocab::kRdfType);
            }
            fail("unexpected identifier '" + t.text + "' in triple pattern");
        case TokenType::Number:
            next();
            return Term::literal(t.text, t.text.find('.') == std::string::npos
                                             ? vocab::kXsdInteger
                                             : vocab::kXsdDecimal);
        case TokenType::DoubleNum:
            next();
            return Term::literal(t.text, vocab::kXsdDouble);
        case TokenType::String: {
            next();
            if (peek().type == TokenType::HatHat) {
                next();
                const Token& dt = peek();
                if (dt.type == TokenType::IriRef) {
                    next();
                    return Term::literal(t.text, dt.text);
                }
                if (dt.type == TokenType::PrefixedName) {
                    next();
                    return Term::literal(t.text, expand_prefixed(dt).text());
                }
                fail("expected datatype IRI after '^^'");
            }
            return Term::literal(t.text, vocab::kXsdString);
        }
        default:
            fail("expected triple pattern term");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, std::string> prefixes_;
};

} // namespace

Duration parse_duration(std::string_view token) {
    std::size_t i = 0;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
    if (i == 0) throw ParseError("malformed duration '" + std::string(token) + "'", 1, 1);
    if (i > 15) throw ParseError("duration too large: '" + std::string(token) + "'", 1, 1);
    std::int64_t value = 0;
    for (std::size_t k = 0; k < i; ++k) value = value * 10 + (token[k] - '0');
    std::string_view unit = token.substr(i);
    std::int64_t scale = 0;
    if (unit == "ms")
        scale = 1;
    else if (unit == "s")
        scale = 1'000;
    else if (unit == "m")
        scale = 60'000;
    else if (unit == "h")
        scale = 3'600'000;
    else if (unit == "d")
        scale = 86'400'000;
    else
        throw ParseError("malformed duration unit '" + std::string(unit) + "'", 1, 1);
    if (value <= 0)
        throw ParseError("duration must be positive: '" + std::string(token) + "'", 1, 1);
    return Duration{value * scale};
}

RegisteredQuery parse_query(std::string_view text) {
    QueryParser parser(Lexer(text).run());
    RegisteredQuery q = parser.parse_register();
    parser.expect_end();
    return q;
}

std::vector<RegisteredQuery> parse_queries(std::string_view text) {
    QueryParser parser(Lexer(text).run());
    std::vector<RegisteredQuery> out;
    if (parser.at_end()) return out;
    do {
        out.push_back(parser.parse_register());
    } while (parser.at_register_boundary());
    parser.expect_end();
    return out;
}

} // namespace cpps
