#pragma once

#include "polyhedron.hpp"
#include "simplex.hpp"

#include <variant>

namespace lrfkit {

/// Nonnegative multipliers, one per row of the source polyhedron.
struct FarkasCertificate {
    Vec multipliers;
};

struct SatPoint {
    Vec point;
};
struct UnsatCertificate {
    FarkasCertificate cert;
};
using FeasibilityResult = std::variant<SatPoint, UnsatCertificate>;

struct Entailed {
    FarkasCertificate cert;
};
struct NotEntailed {
    Vec point;
};
struct EmptyPremise {
    FarkasCertificate cert;
};
using EntailResult = std::variant<Entailed, NotEntailed, EmptyPremise>;

enum class Direction { Max, Min };

struct Bounded {
    Rational value;
    Vec point;
};
struct UnboundedLP {
    Vec point;
    Vec ray;
};
struct EmptyLP {
    FarkasCertificate cert;
};
using OptimizeResult = std::variant<Bounded, UnboundedLP, EmptyLP>;

/// lambda . rows, returned as (combined coefficients, combined bound, strict weight).
struct Combination {
    Vec coeffs;
    Rational bound;
    Rational strict_weight;
};

inline Combination combine(const Polyhedron& P, const FarkasCertificate& c) {
    if (c.multipliers.size() != P.size()) throw InputError("certificate length does not match row count");
    Combination out{Vec(P.dim(), Rational(0)), Rational(0), Rational(0)};
    for (std::size_t i = 0; i < P.size(); ++i) {
        const Rational& l = c.multipliers[i];
        if (l.is_zero()) continue;
        for (std::size_t j = 0; j < P.dim(); ++j)
            if (!P[i].coeffs[j].is_zero()) out.coeffs[j] += l * P[i].coeffs[j];
        out.bound += l * P[i].bound;
        if (P[i].strict) out.strict_weight += l;
    }
    return out;
}

inline bool nonnegative(const FarkasCertificate& c) {
    for (const auto& l : c.multipliers)
        if (l < 0) return false;
    return true;
}

/// lambda >= 0, lambda M = 0 and either lambda m < 0 or (lambda m = 0 with positive weight on strict rows).
inline bool certifies_infeasible(const Polyhedron& P, const FarkasCertificate& c) {
    if (c.multipliers.size() != P.size() || !nonnegative(c)) return false;
    auto comb = combine(P, c);
    if (!is_zero_vec(comb.coeffs)) return false;
    return comb.bound < 0 || (comb.bound == 0 && comb.strict_weight > 0);
}

/// lambda >= 0, lambda M = coeffs, lambda m <= bound.
inline bool certifies_entailment(const Polyhedron& P, const Constraint& target, const FarkasCertificate& c) {
    if (c.multipliers.size() != P.size() || !nonnegative(c)) return false;
    auto comb = combine(P, c);
    if (comb.coeffs != target.coeffs) return false;
    if (target.strict) return comb.bound < target.bound || (comb.bound == target.bound && comb.strict_weight > 0);
    return comb.bound <= target.bound;
}

namespace detail {

inline void split(const Polyhedron& P, std::vector<Vec>& M, Vec& m) {
    M.clear();
    m.clear();
    for (const auto& c : P.rows()) {
        M.push_back(c.coeffs);
        m.push_back(c.bound);
    }
}

inline FarkasCertificate checked_unsat(const Polyhedron& P, Vec y) {
    FarkasCertificate c{std::move(y)};
    if (!certifies_infeasible(P, c)) throw std::logic_error("internal error: invalid infeasibility certificate");
    return c;
}

// Strict feasibility: maximize eps subject to rows with eps added on strict rows, eps <= 1.
inline FeasibilityResult feasible_strict(const Polyhedron& P) {
    const std::size_t n = P.dim();
    std::vector<Vec> M;
    Vec m;
    for (const auto& c : P.rows()) {
        Vec row = c.coeffs;
        row.push_back(c.strict ? Rational(1) : Rational(0));
        M.push_back(std::move(row));
        m.push_back(c.bound);
    }
    Vec cap(n + 1, Rational(0));
    cap[n] = 1;
    M.push_back(cap);
    m.push_back(1);
    Vec obj = cap;
    auto res = simplex::maximize(M, m, obj);
    if (auto* inf = std::get_if<simplex::Infeasible>(&res)) {
        Vec y(inf->y.begin(), inf->y.end() - 1);
        return UnsatCertificate{checked_unsat(P, std::move(y))};
    }
    auto& opt = std::get<simplex::Optimal>(res);
    if (opt.value > 0) {
        Vec x(opt.x.begin(), opt.x.end() - 1);
        return SatPoint{std::move(x)};
    }
    Vec y(opt.y.begin(), opt.y.end() - 1);
    return UnsatCertificate{checked_unsat(P, std::move(y))};
}

inline Polyhedron closure(const Polyhedron& P) {
    Polyhedron q(P.dim());
    for (const auto& c : P.rows()) q.add_le(c.coeffs, c.bound);
    return q;
}

} // namespace detail

inline FeasibilityResult lp_feasible(const Polyhedron& P) {
    if (P.has_strict()) return detail::feasible_strict(P);
    std::vector<Vec> M;
    Vec m;
    detail::split(P, M, m);
    auto res = simplex::maximize(M, m, Vec(P.dim(), Rational(0)));
    if (auto* inf = std::get_if<simplex::Infeasible>(&res))
        return UnsatCertificate{detail::checked_unsat(P, std::move(inf->y))};
    return SatPoint{std::move(std::get<simplex::Optimal>(res).x)};
}

/// Optimizes over P; strict rows are read as their closure once P is known to be nonempty.
inline OptimizeResult optimize(const Polyhedron& P, const Vec& objective, Direction dir) {
    if (objective.size() != P.dim()) throw InputError("objective dimension mismatch");
    if (P.has_strict()) {
        auto f = lp_feasible(P);
        if (auto* u = std::get_if<UnsatCertificate>(&f)) return EmptyLP{u->cert};
    }
    std::vector<Vec> M;
    Vec m;
    detail::split(P, M, m);
    Vec c = objective;
    if (dir == Direction::Min)
        for (auto& v : c) v = -v;
    auto res = simplex::maximize(M, m, c);
    if (auto* inf = std::get_if<simplex::Infeasible>(&res))
        return EmptyLP{detail::checked_unsat(P, std::move(inf->y))};
    if (auto* unb = std::get_if<simplex::Unbounded>(&res)) return UnboundedLP{std::move(unb->x), std::move(unb->ray)};
    auto& opt = std::get<simplex::Optimal>(res);
    Rational value = dot(objective, opt.x);
    return Bounded{std::move(value), std::move(opt.x)};
}

/// Does every point of P satisfy target? target must be non-strict.
inline EntailResult entails(const Polyhedron& P, const Constraint& target) {
    if (target.coeffs.size() != P.dim()) throw InputError("target dimension mismatch");
    if (target.strict) throw InputError("entailment target must be non-strict");
    Vec interior;
    if (P.has_strict()) {
        auto f = lp_feasible(P);
        if (auto* u = std::get_if<UnsatCertificate>(&f)) return EmptyPremise{u->cert};
        interior = std::get<SatPoint>(f).point;
    }
    std::vector<Vec> M;
    Vec m;
    detail::split(P, M, m);
    auto res = simplex::maximize(M, m, target.coeffs);
    if (auto* inf = std::get_if<simplex::Infeasible>(&res))
        return EmptyPremise{detail::checked_unsat(P, std::move(inf->y))};
    if (auto* unb = std::get_if<simplex::Unbounded>(&res)) {
        Vec base = interior.empty() ? unb->x : interior;
        Rational slope = dot(target.coeffs, unb->ray);
        Rational gap = target.bound - dot(target.coeffs, base);
        Rational t = gap < 0 ? Rational(0) : Rational(gap / slope + 1);
        for (std::size_t i = 0; i < base.size(); ++i) base[i] += t * unb->ray[i];
        return NotEntailed{std::move(base)};
    }
    auto& opt = std::get<simplex::Optimal>(res);
    if (opt.value <= target.bound) {
        FarkasCertificate c{std::move(opt.y)};
        if (!certifies_entailment(P, target, c)) throw std::logic_error("internal error: invalid entailment certificate");
        return Entailed{std::move(c)};
    }
    if (interior.empty()) return NotEntailed{std::move(opt.x)};
    // Move from the closure optimum toward a strictly feasible point, staying above the bound.
    Rational vi = dot(target.coeffs, interior);
    if (vi > target.bound) return NotEntailed{std::move(interior)};
    Rational t = (opt.value - target.bound) / (2 * (opt.value - vi));
    Vec p(opt.x.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = opt.x[i] + t * (interior[i] - opt.x[i]);
    return NotEntailed{std::move(p)};
}

inline bool is_empty(const Polyhedron& P) { return std::holds_alternative<UnsatCertificate>(lp_feasible(P)); }

} // namespace lrfkit
