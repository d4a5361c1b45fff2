#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cpps {

/// Exact rational number with graceful degradation to double.
///
/// Query constants and xsd:integer/xsd:decimal literals are held as reduced
/// int64 fractions, so KPI ratios like (1440-144)/1440 come out exact.
/// xsd:double literals, and any operation whose reduced result no longer
/// fits in int64, fall back to double. Once inexact, always inexact.
class Number {
public:
    Number() = default;

    static Number from_int(std::int64_t value);
    static Number ratio(std::int64_t numerator, std::int64_t denominator);
    static Number from_double(double value);

    /// Parses an xsd:integer or xsd:decimal lexical form ("144", "-4.2", ".5").
    /// Throws EvalError on garbage. Falls back to double when the scaled
    /// integer would overflow.
    static Number parse_decimal(std::string_view lexical);

    /// Parses an xsd:double lexical form (accepts exponents). Inexact.
    static Number parse_double(std::string_view lexical);

    bool exact() const { return exact_; }
    bool is_zero() const;
    bool is_integer() const;
    double to_double() const;
    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    Number operator+(const Number& rhs) const;
    Number operator-(const Number& rhs) const;
    Number operator*(const Number& rhs) const;
    /// Throws EvalError on division by zero.
    Number operator/(const Number& rhs) const;
    Number operator-() const;

    /// Three-way comparison: negative, zero, positive. Exact when both
    /// operands are exact.
    int compare(const Number& rhs) const;
    bool operator==(const Number& rhs) const { return compare(rhs) == 0; }
    bool operator!=(const Number& rhs) const { return compare(rhs) != 0; }
    bool operator<(const Number& rhs) const { return compare(rhs) < 0; }
    bool operator<=(const Number& rhs) const { return compare(rhs) <= 0; }
    bool operator>(const Number& rhs) const { return compare(rhs) > 0; }
    bool operator>=(const Number& rhs) const { return compare(rhs) >= 0; }

    /// True when the exact value has a finite decimal expansion (denominator
    /// of the form 2^a * 5^b).
    bool has_finite_decimal() const;

    /// Canonical decimal string. Exact when has_finite_decimal(); otherwise
    /// the shortest round-trip form of to_double().
    std::string to_lexical() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    double dbl_ = 0.0;
    bool exact_ = true;
};

} // namespace cpps
