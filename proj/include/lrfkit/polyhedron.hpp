#pragma once

#include "rational.hpp"

#include <algorithm>
#include <optional>

namespace lrfkit {

/// coeffs . x <= bound, or < bound when strict.
struct Constraint {
    Vec coeffs;
    Rational bound;
    bool strict = false;

    bool holds(std::span<const Rational> x) const {
        Rational lhs = dot(coeffs, x);
        return strict ? lhs < bound : lhs <= bound;
    }

    Constraint negated_weak() const {
        // not (a.x <= b)  <=>  -a.x < -b
        Constraint c{coeffs, -bound, !strict};
        for (auto& v : c.coeffs) v = -v;
        return c;
    }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Conjunction of linear constraints over dim variables. No rows = full space.
class Polyhedron {
public:
    Polyhedron() = default;
    explicit Polyhedron(std::size_t dim) : dim_(dim) {}

    static Polyhedron empty(std::size_t dim) {
        Polyhedron p(dim);
        p.add_le(Vec(dim, Rational(0)), Rational(-1));
        return p;
    }

    std::size_t dim() const { return dim_; }
    const std::vector<Constraint>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    const Constraint& operator[](std::size_t i) const { return rows_[i]; }

    void add(Constraint c) {
        if (c.coeffs.size() != dim_)
            throw InputError("constraint has " + std::to_string(c.coeffs.size()) + " coefficients, expected " +
                             std::to_string(dim_));
        rows_.push_back(std::move(c));
    }
    void add_le(Vec coeffs, Rational bound) { add({std::move(coeffs), std::move(bound), false}); }
    void add_lt(Vec coeffs, Rational bound) { add({std::move(coeffs), std::move(bound), true}); }
    void add_ge(Vec coeffs, const Rational& bound) {
        for (auto& v : coeffs) v = -v;
        add_le(std::move(coeffs), -bound);
    }
    /// Stored as the pair a.x <= b, -a.x <= -b.
    void add_eq(const Vec& coeffs, const Rational& bound) {
        add_le(coeffs, bound);
        add_ge(coeffs, bound);
    }

    void append(const Polyhedron& other) {
        if (other.dim_ != dim_) throw InputError("dimension mismatch in polyhedron conjunction");
        rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
    }

    bool has_strict() const {
        return std::any_of(rows_.begin(), rows_.end(), [](const Constraint& c) { return c.strict; });
    }

    bool contains(std::span<const Rational> x) const {
        if (x.size() != dim_) throw InputError("point dimension mismatch");
        return std::all_of(rows_.begin(), rows_.end(), [&](const Constraint& c) { return c.holds(x); });
    }

    /// Same constraints placed in a larger space, variable i becomes offset + i.
    Polyhedron embedded(std::size_t new_dim, std::size_t offset) const {
        if (offset + dim_ > new_dim) throw InputError("embedding does not fit");
        Polyhedron p(new_dim);
        for (const auto& c : rows_) {
            Vec v(new_dim, Rational(0));
            std::copy(c.coeffs.begin(), c.coeffs.end(), v.begin() + static_cast<std::ptrdiff_t>(offset));
            p.add({std::move(v), c.bound, c.strict});
        }
        return p;
    }

    /// Substitutes fixed values for some variables; the rest keep their relative order.
    /// fixed[i] empty means variable i stays.
    Polyhedron restricted(const std::vector<std::optional<Rational>>& fixed) const {
        std::size_t kept = 0;
        for (const auto& f : fixed)
            if (!f) ++kept;
        Polyhedron p(kept);
        for (const auto& c : rows_) {
            Vec v;
            v.reserve(kept);
            Rational b = c.bound;
            for (std::size_t i = 0; i < dim_; ++i) {
                if (fixed[i])
                    b -= c.coeffs[i] * *fixed[i];
                else
                    v.push_back(c.coeffs[i]);
            }
            p.add({std::move(v), std::move(b), c.strict});
        }
        return p;
    }

    /// Integer reading of strict rows: t < b becomes t <= ceil(b) - 1 after scaling t to a
    /// primitive integer row. Rows with rational coefficients are scaled first.
    Polyhedron integer_tightened() const {
        Polyhedron p(dim_);
        for (const auto& c : rows_) p.add(tighten_row(c));
        return p;
    }

    static Constraint tighten_row(const Constraint& c) {
        if (is_zero_vec(c.coeffs)) {
            bool ok = c.strict ? Rational(0) < c.bound : Rational(0) <= c.bound;
            return {c.coeffs, ok ? Rational(0) : Rational(-1), false};
        }
        Rational scale;
        Vec v = primitive_direction(c.coeffs, &scale);
        Rational b = c.bound * scale;
        Integer nb = c.strict ? Integer(ceil_of(b) - 1) : floor_of(b);
        return {std::move(v), Rational(nb), false};
    }

    friend bool operator==(const Polyhedron&, const Polyhedron&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Constraint> rows_;
};

inline Vec unit(std::size_t dim, std::size_t i, const Rational& v = 1) {
    Vec e(dim, Rational(0));
    e[i] = v;
    return e;
}

} // namespace lrfkit
