#pragma once

#include "polyhedron.hpp"

#include <fstream>
#include <sstream>

namespace lrfkit::text {

struct Line {
    std::size_t number; // 1-based
    std::string content;
};

/// Splits into lines and strips '#' comments; blank lines are dropped.
inline std::vector<Line> lines_of(std::string_view src) {
    std::vector<Line> out;
    std::size_t number = 0, pos = 0;
    while (pos <= src.size()) {
        std::size_t end = src.find('\n', pos);
        if (end == std::string_view::npos) end = src.size();
        ++number;
        std::string s(src.substr(pos, end - pos));
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        if (!s.empty() && s.back() == '\r') s.pop_back();
        if (s.find_first_not_of(" \t") != std::string::npos) out.push_back({number, std::move(s)});
        pos = end + 1;
    }
    return out;
}

struct Token {
    std::string text;
    std::size_t column; // 1-based
};

/// Whitespace-separated words of a line, with their columns.
inline std::vector<Token> words(const Line& line) {
    std::vector<Token> out;
    const std::string& s = line.content;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        out.push_back({s.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

inline Rational rational_at(const Token& t, std::size_t line) {
    try {
        return parse_rational(t.text);
    } catch (const InputError&) {
        throw ParseError(line, t.column, "expected a number, got '" + t.text + "'");
    }
}

inline Integer integer_at(const Token& t, std::size_t line) {
    Rational r = rational_at(t, line);
    if (!is_integral(r)) throw ParseError(line, t.column, "expected an integer, got '" + t.text + "'");
    return numer(r);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Splits "key: rest" when the line starts with one of the given keys.
inline std::optional<std::pair<std::string, std::string>> section_header(const std::string& s,
                                                                         std::initializer_list<const char*> keys) {
    std::size_t b = s.find_first_not_of(" \t");
    for (const char* k : keys) {
        std::string key = k;
        if (s.compare(b, key.size(), key) == 0) {
            std::size_t after = b + key.size();
            while (after < s.size() && (s[after] == ' ' || s[after] == '\t')) ++after;
            if (after < s.size() && s[after] == ':') return std::make_pair(key, s.substr(after + 1));
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Linear constraints over named variables, primed names allowed when requested.

enum class Rel { Le, Lt, Ge, Gt, Eq };

struct LinExpr {
    Vec coeffs;
    Rational constant;
};

class ConstraintParser {
public:
    ConstraintParser(const std::vector<std::string>& names, bool allow_primed)
        : names_(names), primed_(allow_primed) {}

    std::size_t dim() const { return primed_ ? 2 * names_.size() : names_.size(); }

    /// Parses a ',' or ';' separated list of (possibly chained) constraints, appending to P.
    void parse_into(const std::string& s, std::size_t line, std::size_t col0, Polyhedron& P) {
        src_ = &s;
        line_ = line;
        col0_ = col0;
        pos_ = 0;
        for (;;) {
            skip_ws();
            if (pos_ >= s.size()) return;
            parse_chain(P);
            skip_ws();
            if (pos_ >= s.size()) return;
            if (s[pos_] == ',' || s[pos_] == ';') {
                ++pos_;
                continue;
            }
            fail("expected ',' or end of line");
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, col0_ + pos_, what); }

    void skip_ws() {
        while (pos_ < src_->size() && std::isspace(static_cast<unsigned char>((*src_)[pos_]))) ++pos_;
    }

    std::optional<Rel> relation() {
        skip_ws();
        const std::string& s = *src_;
        auto two = [&](const char* op) { return s.compare(pos_, 2, op) == 0; };
        if (two("<=")) return pos_ += 2, Rel::Le;
        if (two(">=")) return pos_ += 2, Rel::Ge;
        if (two("==")) return pos_ += 2, Rel::Eq;
        if (pos_ < s.size()) {
            char c = s[pos_];
            if (c == '<') return ++pos_, Rel::Lt;
            if (c == '>') return ++pos_, Rel::Gt;
            if (c == '=') return ++pos_, Rel::Eq;
        }
        return std::nullopt;
    }

    void parse_chain(Polyhedron& P) {
        LinExpr lhs = expr();
        auto r = relation();
        if (!r) fail("expected a relation (<=, <, >=, >, =)");
        for (;;) {
            LinExpr rhs = expr();
            emit(lhs, *r, rhs, P);
            auto next = relation();
            if (!next) return;
            lhs = std::move(rhs);
            r = next;
        }
    }

    static void emit(const LinExpr& l, Rel r, const LinExpr& rr, Polyhedron& P) {
        // (l - rr).coeffs  rel  rr.constant - l.constant
        Vec a(l.coeffs.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = l.coeffs[i] - rr.coeffs[i];
        Rational b = rr.constant - l.constant;
        switch (r) {
        case Rel::Le: P.add_le(a, b); break;
        case Rel::Lt: P.add_lt(a, b); break;
        case Rel::Ge: P.add_ge(a, b); break;
        case Rel::Gt: {
            for (auto& v : a) v = -v;
            P.add_lt(a, -b);
            break;
        }
        case Rel::Eq: P.add_eq(a, b); break;
        }
    }

    LinExpr expr() {
        LinExpr e{Vec(dim(), Rational(0)), Rational(0)};
        bool first = true;
        for (;;) {
            skip_ws();
            int sign = 1;
            const std::string& s = *src_;
            if (pos_ < s.size() && (s[pos_] == '+' || s[pos_] == '-')) {
                sign = s[pos_] == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                return e;
            }
            term(e, sign);
            first = false;
        }
    }

    std::optional<Rational> number() {
        const std::string& s = *src_;
        std::size_t start = pos_;
        while (pos_ < s.size() && std::isdigit(static_cast<unsigned char>(s[pos_]))) ++pos_;
        if (pos_ == start) return std::nullopt;
        if (pos_ < s.size() && s[pos_] == '/') {
            std::size_t slash = pos_++;
            std::size_t dstart = pos_;
            while (pos_ < s.size() && std::isdigit(static_cast<unsigned char>(s[pos_]))) ++pos_;
            if (pos_ == dstart) {
                pos_ = slash;
                fail("malformed fraction");
            }
        }
        try {
            return parse_rational(s.substr(start, pos_ - start));
        } catch (const InputError&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    std::optional<std::size_t> variable() {
        const std::string& s = *src_;
        std::size_t start = pos_;
        if (pos_ >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[pos_])) || s[pos_] == '_'))
            return std::nullopt;
        while (pos_ < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos_])) || s[pos_] == '_')) ++pos_;
        std::string name = s.substr(start, pos_ - start);
        bool primed = false;
        if (pos_ < s.size() && s[pos_] == '\'') {
            primed = true;
            ++pos_;
            if (pos_ < s.size() && s[pos_] == '\'') fail("a variable may carry at most one prime");
        }
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (primed && !primed_) {
            pos_ = start;
            fail("primed variable '" + name + "'' not allowed here");
        }
        std::size_t idx = static_cast<std::size_t>(it - names_.begin());
        return primed ? idx + names_.size() : idx;
    }

    void term(LinExpr& e, int sign) {
        skip_ws();
        auto num = number();
        skip_ws();
        if (num && pos_ < src_->size() && (*src_)[pos_] == '*') {
            ++pos_;
            skip_ws();
        }
        auto var = variable();
        if (!num && !var) fail("expected a number or a variable");
        Rational c = num ? *num : Rational(1);
        if (sign < 0) c = -c;
        if (var)
            e.coeffs[*var] += c;
        else
            e.constant += c;
    }

    const std::vector<std::string>& names_;
    bool primed_;
    const std::string* src_ = nullptr;
    std::size_t line_ = 0, col0_ = 1, pos_ = 0;
};

inline std::string name_of(const std::vector<std::string>& names, std::size_t idx) {
    return idx < names.size() ? names[idx] : names[idx - names.size()] + "'";
}

inline std::string format_lhs(const Vec& coeffs, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Rational& c = coeffs[i];
        if (c.is_zero()) continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (mag != 1) out += to_string(mag) + "*";
        out += name_of(names, i);
    }
    return out.empty() ? "0" : out;
}

/// One constraint per line; a row immediately followed by its negation prints as '='.
inline std::string format_rows(const Polyhedron& P, const std::vector<std::string>& names,
                               const std::string& indent = "  ") {
    std::string out;
    const auto& rows = P.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i + 1 < rows.size() && !r.strict && !rows[i + 1].strict && rows[i + 1].bound == -r.bound) {
            bool neg = true;
            for (std::size_t j = 0; j < r.coeffs.size() && neg; ++j) neg = rows[i + 1].coeffs[j] == -r.coeffs[j];
            if (neg) {
                out += indent + format_lhs(r.coeffs, names) + " = " + to_string(r.bound) + "\n";
                ++i;
                continue;
            }
        }
        out += indent + format_lhs(r.coeffs, names) + (r.strict ? " < " : " <= ") + to_string(r.bound) + "\n";
    }
    return out;
}

/// Comma-separated names (or whitespace separated); validated as identifiers.
inline std::vector<std::string> parse_names(const std::string& s, std::size_t line, std::size_t col0) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i < s.size()) {
        if (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',') {
            ++i;
            continue;
        }
        std::size_t j = i;
        if (!(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            throw ParseError(line, col0 + i, "expected a variable name");
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string n = s.substr(i, j - i);
        if (std::find(names.begin(), names.end(), n) != names.end())
            throw ParseError(line, col0 + i, "duplicate variable '" + n + "'");
        names.push_back(std::move(n));
        i = j;
    }
    return names;
}

} // namespace lrfkit::text
