#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrfkit {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Vec = std::vector<Rational>;

/// Malformed user input: bad files, inconsistent dimensions, unknown names.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in one of the text formats, with 1-based location.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

inline Integer numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denom(const Rational& r) { return boost::multiprecision::denominator(r); }
inline bool is_integral(const Rational& r) { return denom(r) == 1; }

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q, rem;
    boost::multiprecision::divide_qr(a, b, q, rem);
    if (rem != 0 && ((rem < 0) != (b < 0))) --q;
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }
inline Integer floor_of(const Rational& r) { return floor_div(numer(r), denom(r)); }
inline Integer ceil_of(const Rational& r) { return ceil_div(numer(r), denom(r)); }

inline bool all_integral(std::span<const Rational> v) {
    for (const auto& x : v)
        if (!is_integral(x)) return false;
    return true;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

inline bool is_zero_vec(std::span<const Rational> v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

/// Parses "p/q" or "p" with an optional sign; q must be positive.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { return InputError("malformed rational '" + std::string(text) + "'"); };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        return j;
    };
    std::size_t end_num = digits(i);
    if (end_num == i) throw fail();
    Integer num(std::string(text.substr(i, end_num - i)));
    Integer den = 1;
    if (end_num < text.size()) {
        if (text[end_num] != '/') throw fail();
        std::size_t end_den = digits(end_num + 1);
        if (end_den == end_num + 1 || end_den != text.size()) throw fail();
        den = Integer(std::string(text.substr(end_num + 1, end_den - end_num - 1)));
        if (den == 0) throw fail();
    }
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) {
    if (is_integral(r)) return numer(r).str();
    return numer(r).str() + "/" + denom(r).str();
}

inline std::string to_string(std::span<const Rational> v, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += to_string(v[i]);
    }
    return out;
}

/// Least positive k with k*v integral, then divided by the gcd of the result:
/// returns the primitive integer vector on the same ray as v (zero stays zero).
inline Vec primitive_direction(std::span<const Rational> v, Rational* scale_out = nullptr) {
    Integer l = 1;
    for (const auto& x : v)
        if (!x.is_zero()) l = boost::multiprecision::lcm(l, denom(x));
    Integer g = 0;
    for (const auto& x : v)
        if (!x.is_zero()) g = boost::multiprecision::gcd(g, Integer(numer(x) * (l / denom(x))));
    Rational scale = g == 0 ? Rational(1) : Rational(l, g);
    if (scale_out) *scale_out = scale;
    Vec out(v.begin(), v.end());
    for (auto& x : out) x *= scale;
    return out;
}

} // namespace lrfkit
