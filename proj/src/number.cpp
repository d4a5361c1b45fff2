#include "cpps/number.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "cpps/errors.hpp"

namespace cpps {

namespace {

using int128 = __int128;

constexpr std::int64_t kMaxInt64 = std::numeric_limits<std::int64_t>::max();

bool fits_int64(int128 v) {
    return v <= static_cast<int128>(kMaxInt64) && v >= -static_cast<int128>(kMaxInt64);
}

int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

Number Number::from_int(std::int64_t value) {
    Number n;
    n.num_ = value;
    n.den_ = 1;
    n.exact_ = true;
    return n;
}

Number Number::from_double(double value) {
    Number n;
    n.exact_ = false;
    n.dbl_ = value;
    return n;
}

Number Number::ratio(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw EvalError("division by zero");
    int128 num = numerator;
    int128 den = denominator;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Number n;
    n.num_ = static_cast<std::int64_t>(num);
    n.den_ = static_cast<std::int64_t>(den);
    n.exact_ = true;
    return n;
}

Number Number::parse_decimal(std::string_view lexical) {
    std::string_view s = lexical;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
        throw EvalError("not a decimal literal: '" + std::string(lexical) + "'");
    for (std::string_view part : {int_part, frac_part})
        for (char c : part)
            if (c < '0' || c > '9')
                throw EvalError("not a decimal literal: '" + std::string(lexical) + "'");

    int128 value = 0;
    bool overflow = false;
    for (char c : int_part) {
        value = value * 10 + (c - '0');
        if (value > static_cast<int128>(kMaxInt64) * 1000000000) {
            overflow = true;
            break;
        }
    }
    int128 den = 1;
    if (!overflow) {
        for (char c : frac_part) {
            value = value * 10 + (c - '0');
            den *= 10;
            if (value > static_cast<int128>(kMaxInt64) * 1000000000) {
                overflow = true;
                break;
            }
        }
    }
    if (overflow || !fits_int64(value) || !fits_int64(den)) {
        double d = std::strtod(std::string(lexical).c_str(), nullptr);
        return from_double(d);
    }
    if (negative) value = -value;
    return ratio(static_cast<std::int64_t>(value), static_cast<std::int64_t>(den));
}

Number Number::parse_double(std::string_view lexical) {
    std::string copy(lexical);
    char* end = nullptr;
    double d = std::strtod(copy.c_str(), &end);
    if (end == copy.c_str() || *end != '\0')
        throw EvalError("not a double literal: '" + copy + "'");
    return from_double(d);
}

bool Number::is_zero() const {
    return exact_ ? num_ == 0 : dbl_ == 0.0;
}

bool Number::is_integer() const {
    return exact_ && den_ == 1;
}

double Number::to_double() const {
    if (!exact_) return dbl_;
    return static_cast<double>(num_) / static_cast<double>(den_);
}

namespace {

Number make_exact_or_double(int128 num, int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (fits_int64(num) && fits_int64(den))
        return Number::ratio(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    return Number::from_double(static_cast<double>(num) / static_cast<double>(den));
}

} // namespace

Number Number::operator+(const Number& rhs) const {
    if (exact_ && rhs.exact_) {
        int128 num = static_cast<int128>(num_) * rhs.den_ + static_cast<int128>(rhs.num_) * den_;
        int128 den = static_cast<int128>(den_) * rhs.den_;
        return make_exact_or_double(num, den);
    }
    return from_double(to_double() + rhs.to_double());
}

Number Number::operator-(const Number& rhs) const {
    return *this + (-rhs);
}

Number Number::operator*(const Number& rhs) const {
    if (exact_ && rhs.exact_) {
        int128 num = static_cast<int128>(num_) * rhs.num_;
        int128 den = static_cast<int128>(den_) * rhs.den_;
        return make_exact_or_double(num, den);
    }
    return from_double(to_double() * rhs.to_double());
}

Number Number::operator/(const Number& rhs) const {
    if (rhs.is_zero()) throw EvalError("division by zero");
    if (exact_ && rhs.exact_) {
        int128 num = static_cast<int128>(num_) * rhs.den_;
        int128 den = static_cast<int128>(den_) * rhs.num_;
        return make_exact_or_double(num, den);
    }
    return from_double(to_double() / rhs.to_double());
}

Number Number::operator-() const {
    if (exact_) return ratio(-num_, den_);
    return from_double(-dbl_);
}

int Number::compare(const Number& rhs) const {
    if (exact_ && rhs.exact_) {
        int128 lhs_scaled = static_cast<int128>(num_) * rhs.den_;
        int128 rhs_scaled = static_cast<int128>(rhs.num_) * den_;
        if (lhs_scaled < rhs_scaled) return -1;
        if (lhs_scaled > rhs_scaled) return 1;
        return 0;
    }
    double a = to_double();
    double b = rhs.to_double();
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

bool Number::has_finite_decimal() const {
    if (!exact_) return false;
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

std::string Number::to_lexical() const {
    if (!exact_) return shortest_double(dbl_);
    if (den_ == 1) return std::to_string(num_);
    if (!has_finite_decimal()) return shortest_double(to_double());

    // Scale the fraction to digits / 10^k, then place the decimal point.
    int scale = 0;
    int128 den = den_;
    int128 num = num_ < 0 ? -static_cast<int128>(num_) : num_;
    while (den % 2 == 0) {
        den /= 2;
        num *= 5;
        ++scale;
    }
    while (den % 5 == 0) {
        den /= 5;
        num *= 2;
        ++scale;
    }
    std::string digits;
    if (num == 0) digits = "0";
    while (num > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(num % 10)));
        num /= 10;
    }
    while (static_cast<int>(digits.size()) <= scale) digits.insert(digits.begin(), '0');
    std::string out = digits.substr(0, digits.size() - scale) + "." + digits.substr(digits.size() - scale);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    if (num_ < 0) out.insert(out.begin(), '-');
    return out;
}

} // namespace cpps
