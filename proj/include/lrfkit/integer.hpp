#pragma once

#include "lp.hpp"

#include <memory>

namespace lrfkit {

struct IntBound {
    std::optional<Integer> lo;
    std::optional<Integer> hi;

    bool empty() const { return lo && hi && *lo > *hi; }
    bool fixed() const { return lo && hi && *lo == *hi; }
};

using Box = std::vector<IntBound>;

inline Box full_box(std::size_t dim) { return Box(dim); }

inline Box make_box(std::size_t dim, const Integer& lo, const Integer& hi) {
    Box b(dim);
    for (auto& x : b) {
        x.lo = lo;
        x.hi = hi;
    }
    return b;
}

namespace detail {

struct IntRow {
    std::vector<std::pair<std::size_t, Integer>> terms;
    Integer bound;
};

inline std::vector<IntRow> integer_rows(const Polyhedron& P) {
    std::vector<IntRow> out;
    for (const auto& c : P.rows()) {
        Constraint t = Polyhedron::tighten_row(c);
        IntRow r;
        for (std::size_t j = 0; j < t.coeffs.size(); ++j)
            if (!t.coeffs[j].is_zero()) r.terms.emplace_back(j, numer(t.coeffs[j]));
        r.bound = numer(t.bound);
        out.push_back(std::move(r));
    }
    return out;
}

// Tightens the box against the rows until fixpoint or round cap. Returns false if some domain empties.
inline bool propagate(const std::vector<IntRow>& rows, Box& box, int max_rounds = 64) {
    for (int round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (const auto& r : rows) {
            if (r.terms.empty()) {
                if (r.bound < 0) return false;
                continue;
            }
            // minimal activity, counting terms without a finite minimum
            Integer act = 0;
            std::size_t unbounded = 0, which = 0;
            for (std::size_t t = 0; t < r.terms.size(); ++t) {
                const auto& [j, a] = r.terms[t];
                const auto& bd = a > 0 ? box[j].lo : box[j].hi;
                if (bd)
                    act += a * *bd;
                else {
                    ++unbounded;
                    which = t;
                }
            }
            if (unbounded > 1) continue;
            if (unbounded == 0 && act > r.bound) return false;
            for (std::size_t t = 0; t < r.terms.size(); ++t) {
                if (unbounded == 1 && t != which) continue;
                const auto& [j, a] = r.terms[t];
                Integer rest = act;
                if (unbounded == 0) rest -= a * *(a > 0 ? box[j].lo : box[j].hi);
                Integer slack = r.bound - rest; // a * x_j <= slack
                if (a > 0) {
                    Integer ub = floor_div(slack, a);
                    if (!box[j].hi || ub < *box[j].hi) {
                        box[j].hi = ub;
                        changed = true;
                    }
                } else {
                    Integer lb = ceil_div(slack, a);
                    if (!box[j].lo || lb > *box[j].lo) {
                        box[j].lo = lb;
                        changed = true;
                    }
                }
                if (box[j].empty()) return false;
            }
        }
        if (!changed) return true;
    }
    return true;
}

inline void enumerate_rec(const Polyhedron& P, const std::vector<IntRow>& rows, Box box, std::vector<Vec>& out,
                          std::size_t limit) {
    if (!propagate(rows, box)) return;
    std::size_t pick = box.size();
    Integer best_width;
    for (std::size_t j = 0; j < box.size(); ++j) {
        if (!box[j].lo || !box[j].hi)
            throw InputError("integer enumeration: coordinate " + std::to_string(j) + " is unbounded");
        if (box[j].fixed()) continue;
        Integer w = *box[j].hi - *box[j].lo;
        if (pick == box.size() || w < best_width) {
            pick = j;
            best_width = w;
        }
    }
    if (pick == box.size()) {
        Vec x(box.size());
        for (std::size_t j = 0; j < box.size(); ++j) x[j] = Rational(*box[j].lo);
        if (P.contains(x)) out.push_back(std::move(x));
        return;
    }
    for (Integer v = *box[pick].lo; v <= *box[pick].hi; ++v) {
        if (out.size() >= limit) throw InputError("integer enumeration exceeded the point limit");
        Box child = box;
        child[pick].lo = v;
        child[pick].hi = v;
        enumerate_rec(P, rows, std::move(child), out, limit);
    }
}

} // namespace detail

/// Propagated integer bounds of P intersected with box (nullopt when the box becomes empty).
inline std::optional<Box> integer_bounds(const Polyhedron& P, Box box) {
    auto rows = detail::integer_rows(P);
    if (!detail::propagate(rows, box)) return std::nullopt;
    return box;
}

/// All integer points of P inside box, sorted lexicographically. Every coordinate must end up bounded.
inline std::vector<Vec> enumerate_integer_points(const Polyhedron& P, const Box& box, std::size_t limit = 1000000) {
    if (box.size() != P.dim()) throw InputError("box dimension mismatch");
    std::vector<Vec> out;
    detail::enumerate_rec(P, detail::integer_rows(P), box, out, limit);
    std::sort(out.begin(), out.end());
    return out;
}

/// Branch-and-bound proof tree: leaves carry Farkas certificates over the base rows plus branch rows.
struct BranchTree {
    enum class Kind { Entailed, Infeasible, Split };
    Kind kind = Kind::Entailed;
    FarkasCertificate cert;
    std::size_t var = 0;
    Integer split; // left: x_var <= split, right: x_var >= split + 1
    std::unique_ptr<BranchTree> left, right;

    std::size_t leaves() const { return kind == Kind::Split ? left->leaves() + right->leaves() : 1; }
};

struct IntYes {
    std::shared_ptr<BranchTree> tree;
};
struct IntNo {
    Vec point;
};
struct IntUnknown {};
using IntEntailResult = std::variant<IntYes, IntNo, IntUnknown>;

namespace detail {

inline Polyhedron with_branch_rows(const Polyhedron& P, const std::vector<Constraint>& extra) {
    Polyhedron q = P;
    for (const auto& c : extra) q.add(c);
    return q;
}

inline Constraint branch_le(std::size_t dim, std::size_t var, const Integer& k) {
    return {unit(dim, var), Rational(k), false};
}
inline Constraint branch_ge(std::size_t dim, std::size_t var, const Integer& k) {
    return {unit(dim, var, -1), Rational(-k), false};
}

inline std::unique_ptr<BranchTree> bb(const Polyhedron& P, const Constraint& target, std::vector<Constraint>& extra,
                                      std::size_t& budget, std::optional<Vec>& found) {
    if (budget == 0) return nullptr;
    --budget;
    Polyhedron node = with_branch_rows(P, extra);
    auto res = entails(node, target);
    auto tree = std::make_unique<BranchTree>();
    if (auto* e = std::get_if<Entailed>(&res)) {
        tree->kind = BranchTree::Kind::Entailed;
        tree->cert = std::move(e->cert);
        return tree;
    }
    if (auto* e = std::get_if<EmptyPremise>(&res)) {
        tree->kind = BranchTree::Kind::Infeasible;
        tree->cert = std::move(e->cert);
        return tree;
    }
    const Vec& p = std::get<NotEntailed>(res).point;
    std::size_t var = p.size();
    for (std::size_t j = 0; j < p.size(); ++j)
        if (!is_integral(p[j])) {
            var = j;
            break;
        }
    if (var == p.size()) {
        found = p;
        return nullptr;
    }
    tree->kind = BranchTree::Kind::Split;
    tree->var = var;
    tree->split = floor_of(p[var]);
    extra.push_back(branch_le(P.dim(), var, tree->split));
    tree->left = bb(P, target, extra, budget, found);
    extra.pop_back();
    if (!tree->left) return nullptr;
    extra.push_back(branch_ge(P.dim(), var, tree->split + 1));
    tree->right = bb(P, target, extra, budget, found);
    extra.pop_back();
    if (!tree->right) return nullptr;
    return tree;
}

inline bool check_tree(const Polyhedron& P, const Constraint& target, const BranchTree& t,
                       std::vector<Constraint>& extra) {
    Polyhedron node = with_branch_rows(P, extra);
    switch (t.kind) {
    case BranchTree::Kind::Entailed:
        return certifies_entailment(node, target, t.cert);
    case BranchTree::Kind::Infeasible:
        return certifies_infeasible(node, t.cert);
    case BranchTree::Kind::Split:
        break;
    }
    if (!t.left || !t.right || t.var >= P.dim()) return false;
    extra.push_back(branch_le(P.dim(), t.var, t.split));
    bool ok = check_tree(P, target, *t.left, extra);
    extra.pop_back();
    if (!ok) return false;
    extra.push_back(branch_ge(P.dim(), t.var, t.split + 1));
    ok = check_tree(P, target, *t.right, extra);
    extra.pop_back();
    return ok;
}

} // namespace detail

/// The target as read over integer points: primitive integer row with floored bound.
inline Constraint integer_target(const Constraint& target) { return Polyhedron::tighten_row(target); }

/// Does every integer point of P satisfy target? Strict rows of P are tightened first.
inline IntEntailResult entails_integer(const Polyhedron& P, const Constraint& target, std::size_t node_budget = 2000) {
    Polyhedron base = P.integer_tightened();
    Constraint t = integer_target(target);
    std::vector<Constraint> extra;
    std::optional<Vec> found;
    std::size_t budget = node_budget;
    auto tree = detail::bb(base, t, extra, budget, found);
    if (tree) return IntYes{std::shared_ptr<BranchTree>(std::move(tree))};
    if (found) return IntNo{std::move(*found)};
    return IntUnknown{};
}

/// Rechecks a branch tree for P (tightened as in entails_integer) and target.
inline bool certifies_integer_entailment(const Polyhedron& P, const Constraint& target, const BranchTree& tree) {
    std::vector<Constraint> extra;
    return detail::check_tree(P.integer_tightened(), integer_target(target), tree, extra);
}

/// Integer feasibility through the same search, entailing the false row 0 <= -1.
inline IntEntailResult integer_infeasible(const Polyhedron& P, std::size_t node_budget = 2000) {
    return entails_integer(P, {Vec(P.dim(), Rational(0)), Rational(-1), false}, node_budget);
}

} // namespace lrfkit
