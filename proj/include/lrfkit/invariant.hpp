#pragma once

#include "petri.hpp"
#include "ranking.hpp"

#include <limits>

namespace lrfkit {

inline constexpr std::int64_t kOmega = std::numeric_limits<std::int64_t>::max();

inline std::int64_t omega_add(std::int64_t a, std::int64_t b) { return (a == kOmega || b == kOmega) ? kOmega : a + b; }

/// Downward closure of finitely many generators over N u {omega}.
class DownwardClosedSet {
public:
    DownwardClosedSet() = default;
    DownwardClosedSet(std::size_t dim, std::vector<NatVec> gens) : dim_(dim) {
        for (auto& g : gens) {
            if (g.size() != dim) throw InputError("generator dimension mismatch");
            for (auto v : g)
                if (v < 0) throw InputError("generator entries must be natural numbers or w");
            insert(std::move(g));
        }
        std::sort(gens_.begin(), gens_.end());
    }

    std::size_t dim() const { return dim_; }
    const std::vector<NatVec>& generators() const { return gens_; }

    static bool leq(const NatVec& a, const NatVec& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (b[i] != kOmega && (a[i] == kOmega || a[i] > b[i])) return false;
        return true;
    }

    bool contains(const NatVec& x) const {
        return std::any_of(gens_.begin(), gens_.end(), [&](const NatVec& g) { return leq(x, g); });
    }

    bool is_antichain() const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            for (std::size_t j = 0; j < gens_.size(); ++j)
                if (i != j && leq(gens_[i], gens_[j])) return false;
        return true;
    }

    friend bool operator==(const DownwardClosedSet&, const DownwardClosedSet&) = default;

private:
    void insert(NatVec g) {
        for (const auto& h : gens_)
            if (leq(g, h)) return;
        std::erase_if(gens_, [&](const NatVec& h) { return leq(h, g); });
        gens_.push_back(std::move(g));
    }

    std::size_t dim_ = 0;
    std::vector<NatVec> gens_;
};

// .dcs format: optional "dim n", then one generator per line, entries naturals or w.
inline DownwardClosedSet parse_dcs(std::string_view src) {
    std::optional<std::size_t> dim;
    std::vector<NatVec> gens;
    for (const auto& ln : text::lines_of(src)) {
        auto w = text::words(ln);
        if (w[0].text == "dim") {
            if (w.size() != 2 || dim) throw ParseError(ln.number, 1, "expected a single 'dim n' line");
            dim = text::integer_at(w[1], ln.number).convert_to<std::size_t>();
            continue;
        }
        NatVec g;
        for (const auto& t : w) {
            if (t.text == "w" || t.text == "ω") {
                g.push_back(kOmega);
                continue;
            }
            Integer v = text::integer_at(t, ln.number);
            if (v < 0 || v > Integer(1) << 40) throw ParseError(ln.number, t.column, "entry must be a natural number or w");
            g.push_back(v.convert_to<std::int64_t>());
        }
        if (!dim) dim = g.size();
        if (g.size() != *dim)
            throw ParseError(ln.number, 1, "generator has " + std::to_string(g.size()) + " entries, expected " +
                                               std::to_string(*dim));
        gens.push_back(std::move(g));
    }
    if (!dim) throw ParseError(1, 1, "empty downward-closed set needs a 'dim n' line");
    return DownwardClosedSet(*dim, std::move(gens));
}

inline std::string format_generator(const NatVec& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += " ";
        out += g[i] == kOmega ? "w" : std::to_string(g[i]);
    }
    return out;
}

inline std::string emit_dcs(const DownwardClosedSet& D) {
    std::string out = "dim " + std::to_string(D.dim()) + "\n";
    for (const auto& g : D.generators()) out += format_generator(g) + "\n";
    return out;
}

// .poly format: "vars: ..." then one constraint per line over those (unprimed) names.
struct NamedPolyhedron {
    std::vector<std::string> names;
    Polyhedron poly;
};

inline NamedPolyhedron parse_poly(std::string_view src) {
    auto lines = text::lines_of(src);
    if (lines.empty()) throw ParseError(1, 1, "missing 'vars:' line");
    auto h = text::section_header(lines[0].content, {"vars"});
    if (!h) throw ParseError(lines[0].number, 1, "expected 'vars:' first");
    NamedPolyhedron out;
    out.names = text::parse_names(h->second, lines[0].number, lines[0].content.size() - h->second.size() + 1);
    out.poly = Polyhedron(out.names.size());
    text::ConstraintParser cp(out.names, false);
    for (std::size_t i = 1; i < lines.size(); ++i) cp.parse_into(lines[i].content, lines[i].number, 1, out.poly);
    return out;
}

inline std::string emit_poly(const NamedPolyhedron& p) {
    std::string out = "vars:";
    for (const auto& n : p.names) out += " " + n;
    return out + "\n" + text::format_rows(p.poly, p.names, "");
}

/// Places a polyhedron over named variables into the loop's variable space.
inline Polyhedron poly_for_loop(const SlcpLoop& L, const NamedPolyhedron& p) {
    Polyhedron out(L.n());
    std::vector<std::size_t> idx;
    for (const auto& n : p.names) idx.push_back(L.index_of(n));
    for (const auto& c : p.poly.rows()) {
        Vec v(L.n(), Rational(0));
        for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] += c.coeffs[k];
        out.add({std::move(v), c.bound, c.strict});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariant validity

struct InvariantReport {
    bool initiation = false;
    bool consecution = false;
    bool unknown = false;
    std::optional<State> initiation_witness;
    std::optional<std::pair<State, State>> consecution_witness;
    std::vector<Proof> proofs;
    std::string note;

    bool valid() const { return initiation && consecution && !unknown; }
};

/// Every row of J entailed by the precondition, and by guard, update and J on primed variables.
inline InvariantReport check_polyhedral(const SlcpLoop& L, const Polyhedron& J_in) {
    if (J_in.dim() != L.n()) throw InputError("invariant dimension does not match the loop");
    const Polyhedron J = L.integer() ? J_in.integer_tightened() : J_in;
    InvariantReport rep;
    const std::size_t n = L.n();
    Piece init = whole(L.pre());
    rep.initiation = true;
    if (J.has_strict()) throw InputError("strict invariant rows are only supported for integer loops");
    for (std::size_t r = 0; r < J.size() && rep.initiation; ++r) {
        auto res = entail_piece(init, J[r], L.integer(), "initiation");
        if (auto* y = std::get_if<PieceYes>(&res)) rep.proofs.push_back(std::move(y->proof));
        else if (auto* no = std::get_if<PieceNo>(&res)) {
            rep.initiation = false;
            rep.initiation_witness = no->point;
        } else {
            rep.initiation = false;
            rep.unknown = true;
            rep.note = std::get<PieceUnknown>(res).reason;
        }
    }
    if (!rep.initiation) return rep;
    rep.consecution = true;
    auto pieces = transition_pieces(L, J);
    for (const auto& piece : pieces) {
        for (std::size_t r = 0; r < J.size(); ++r) {
            Constraint primed{Vec(2 * n, Rational(0)), J[r].bound, false};
            for (std::size_t i = 0; i < n; ++i) primed.coeffs[n + i] = J[r].coeffs[i];
            auto res = entail_piece(piece, primed, L.integer(), "consecution");
            if (auto* y = std::get_if<PieceYes>(&res)) {
                bool vac = y->proof.vacuous;
                rep.proofs.push_back(std::move(y->proof));
                if (vac) break;
            } else if (auto* no = std::get_if<PieceNo>(&res)) {
                rep.consecution = false;
                rep.consecution_witness = std::make_pair(State(no->point.begin(), no->point.begin() + static_cast<std::ptrdiff_t>(n)),
                                                         State(no->point.begin() + static_cast<std::ptrdiff_t>(n), no->point.end()));
                return rep;
            } else {
                rep.unknown = true;
                rep.note = std::get<PieceUnknown>(res).reason;
                return rep;
            }
        }
    }
    return rep;
}

/// Box {0 <= x <= g} in the loop space (omega leaves the coordinate unbounded above).
inline Polyhedron generator_box(const NatVec& g) {
    const std::size_t n = g.size();
    Polyhedron p(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.add_le(unit(n, i, -1), 0);
        if (g[i] != kOmega) p.add_le(unit(n, i), Rational(g[i]));
    }
    return p;
}

inline NatVec to_natvec(const State& s) {
    NatVec v;
    for (const auto& x : s) {
        if (!is_integral(x) || x < 0) throw InputError("state is not a natural vector");
        v.push_back(numer(x).convert_to<std::int64_t>());
    }
    return v;
}

/// Initiation and consecution of a downward-closed set over the naturals.
inline InvariantReport check_downward(const SlcpLoop& L, const DownwardClosedSet& D) {
    if (D.dim() != L.n()) throw InputError("downward-closed set dimension does not match the loop");
    if (!L.integer()) throw InputError("downward-closed invariants need the integer interpretation");
    InvariantReport rep;
    auto in = as_partial_input(L);
    auto decoded = decode_petri_loop(L);

    if (in) {
        // some generator must dominate the fixed values and be omega on every free coordinate
        rep.initiation = std::any_of(D.generators().begin(), D.generators().end(), [&](const NatVec& g) {
            for (std::size_t i = 0; i < L.n(); ++i) {
                auto it = in->assignments.find(i);
                if (it == in->assignments.end()) {
                    if (g[i] != kOmega) return false;
                } else if (it->second < 0 || (g[i] != kOmega && it->second > Rational(g[i]))) {
                    return false;
                }
            }
            return true;
        });
        if (!rep.initiation) {
            State w(L.n(), Rational(0));
            for (const auto& [i, v] : in->assignments) w[i] = v;
            // free coordinates: a value above every finite generator entry
            std::int64_t big = 0;
            for (const auto& g : D.generators())
                for (auto v : g)
                    if (v != kOmega) big = std::max(big, v);
            for (std::size_t i = 0; i < L.n(); ++i)
                if (!in->assignments.count(i)) w[i] = Rational(big + 1);
            if (!D.contains(to_natvec(w))) rep.initiation_witness = w;
            else {
                for (std::size_t i = 0; i < L.n(); ++i)
                    if (!in->assignments.count(i)) w[i] = 0;
                rep.initiation_witness = w;
            }
        }
    } else {
        throw InputError("downward-closed initiation needs a precondition that only fixes variables");
    }

    if (decoded) {
        const auto& net = decoded->net;
        const auto& lay = decoded->layout;
        rep.consecution = true;
        for (const auto& g : D.generators()) {
            if (lay.y_gadget && g[lay.y()] == 0) continue; // guard Y > 0 fails below g
            for (std::size_t k = 0; k < net.transitions.size(); ++k) {
                const auto& t = net.transitions[k];
                bool en = true;
                for (std::size_t i = 0; i < lay.n; ++i)
                    if (g[lay.x(i)] != kOmega && g[lay.x(i)] < t.minus[i]) en = false;
                if (!en) continue;
                NatVec top(L.n(), 0);
                for (std::size_t i = 0; i < lay.n; ++i) {
                    auto gi = g[lay.x(i)];
                    top[lay.x(i)] = gi == kOmega ? kOmega : gi - t.minus[i] + t.plus[i];
                }
                top[lay.a(k)] = 1;
                if (lay.y_gadget) {
                    auto gy = g[lay.y()], gn = g[lay.x(lay.n - 1)];
                    if (gy == kOmega || gn == kOmega)
                        top[lay.y()] = kOmega;
                    else {
                        std::int64_t v = gy - 1 + gn;
                        if (v < 0) continue;
                        top[lay.y()] = v;
                    }
                }
                if (!D.contains(top)) {
                    rep.consecution = false;
                    // witness: the generator itself (omega read as a large value) and its maximal successor
                    std::int64_t big = 0;
                    for (auto v : g)
                        if (v != kOmega) big = std::max(big, v);
                    for (auto v : top)
                        if (v != kOmega) big = std::max(big, v);
                    State x(L.n()), xp(L.n());
                    for (std::size_t i = 0; i < L.n(); ++i) x[i] = Rational(g[i] == kOmega ? big + 1 : g[i]);
                    NatVec xn = to_natvec(x);
                    for (std::size_t i = 0; i < lay.n; ++i) xp[lay.x(i)] = Rational(xn[i] - t.minus[i] + t.plus[i]);
                    for (std::size_t q = 0; q < lay.m; ++q) xp[lay.a(q)] = q == k ? 1 : 0;
                    if (lay.y_gadget) xp[lay.y()] = x[lay.y()] - 1 + x[lay.x(lay.n - 1)];
                    rep.consecution_witness = std::make_pair(std::move(x), std::move(xp));
                    return rep;
                }
            }
        }
        return rep;
    }

    // Fallback: every variable bounded by the guard; enumerate guard states inside D.
    Box nat = full_box(L.n());
    for (auto& b : nat) b.lo = 0;
    auto bounds = integer_bounds(L.guard(), nat);
    if (!bounds) {
        rep.consecution = true;
        return rep;
    }
    for (std::size_t i = 0; i < L.n(); ++i)
        if (!(*bounds)[i].hi)
            throw InputError("loop is neither in vector-addition form nor guard-bounded: variable '" + L.names()[i] +
                             "' has no upper bound in the guard");
    rep.consecution = true;
    for (const auto& x : enumerate_integer_points(L.guard(), *bounds)) {
        if (!D.contains(to_natvec(x))) continue;
        Polyhedron succ = successor_polyhedron(L, x);
        Box sb = full_box(L.n());
        for (auto& b : sb) b.lo = 0;
        auto sbounds = integer_bounds(succ, sb);
        if (!sbounds) continue;
        bool bounded = true;
        for (const auto& b : *sbounds)
            if (!b.hi) bounded = false;
        if (!bounded) {
            // an unbounded successor coordinate escapes every finite generator entry
            for (std::size_t i = 0; i < L.n(); ++i)
                if (!(*sbounds)[i].hi &&
                    std::any_of(D.generators().begin(), D.generators().end(), [&](const NatVec& g) { return g[i] != kOmega; }))
                    throw InputError("successors of a guard state are unbounded; cannot enumerate");
            continue;
        }
        for (const auto& xp : enumerate_integer_points(succ, *sbounds)) {
            if (!D.contains(to_natvec(xp))) {
                rep.consecution = false;
                rep.consecution_witness = std::make_pair(x, xp);
                return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Convex hull of finitely many states (double description on the cone of valid inequalities)

struct HullResult {
    Polyhedron poly;                 // over all n coordinates
    std::vector<std::size_t> bounded; // non-free coordinates
    std::vector<State> integer_points; // integer points of the hull on the bounded coordinates, sorted
    bool exact = false;              // integer points equal the input set
};

namespace detail {

// Row-reduces rows in place, returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<Vec>& rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].is_zero()) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            Rational f = rows[i][c];
            for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

struct Ray {
    Vec v;
    std::vector<bool> tight; // per processed constraint
};

// Extreme rays of {z : C z <= 0} for rows C (full column rank assumed), via double description.
inline std::vector<Vec> dd_extreme_rays(const std::vector<Vec>& C, std::size_t dim) {
    // initial basis: dim linearly independent rows
    std::vector<std::size_t> basis;
    {
        std::vector<Vec> acc;
        for (std::size_t i = 0; i < C.size() && basis.size() < dim; ++i) {
            auto trial = acc;
            trial.push_back(C[i]);
            if (rref(trial, dim).size() > acc.size()) {
                acc.push_back(C[i]);
                basis.push_back(i);
            }
        }
        if (basis.size() != dim) throw std::logic_error("hull: constraint system is not of full rank");
    }
    // rays: columns of -B^{-1}
    std::vector<Vec> aug;
    for (std::size_t r = 0; r < dim; ++r) {
        Vec row = C[basis[r]];
        for (std::size_t j = 0; j < dim; ++j) row.push_back(r == j ? Rational(1) : Rational(0));
        aug.push_back(std::move(row));
    }
    rref(aug, dim);
    std::vector<bool> processed(C.size(), false);
    for (auto b : basis) processed[b] = true;
    std::vector<std::size_t> order(basis.begin(), basis.end());
    std::vector<Ray> rays;
    for (std::size_t j = 0; j < dim; ++j) {
        Vec v(dim);
        for (std::size_t r = 0; r < dim; ++r) v[r] = -aug[r][dim + j];
        v = primitive_direction(v);
        Ray ray{std::move(v), {}};
        for (std::size_t q = 0; q < order.size(); ++q) ray.tight.push_back(dot(C[order[q]], ray.v).is_zero());
        rays.push_back(std::move(ray));
    }
    for (std::size_t i = 0; i < C.size(); ++i) {
        if (processed[i]) continue;
        std::vector<Rational> val;
        for (const auto& r : rays) val.push_back(dot(C[i], r.v));
        std::vector<std::size_t> neg, zero, pos;
        for (std::size_t k = 0; k < rays.size(); ++k)
            (val[k] < 0 ? neg : (val[k] > 0 ? pos : zero)).push_back(k);
        if (pos.empty()) {
            order.push_back(i);
            for (std::size_t k = 0; k < rays.size(); ++k) rays[k].tight.push_back(val[k].is_zero());
            continue;
        }
        std::vector<Ray> next;
        for (auto k : neg) {
            next.push_back(rays[k]);
            next.back().tight.push_back(false);
        }
        for (auto k : zero) {
            next.push_back(rays[k]);
            next.back().tight.push_back(true);
        }
        for (auto p : pos) {
            for (auto q : neg) {
                // adjacency: common tight set not contained in another ray's tight set
                std::vector<std::size_t> common;
                for (std::size_t t = 0; t < order.size(); ++t)
                    if (rays[p].tight[t] && rays[q].tight[t]) common.push_back(t);
                if (common.size() + 2 < dim) continue;
                bool adjacent = true;
                for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
                    if (o == p || o == q) continue;
                    bool sup = true;
                    for (auto t : common)
                        if (!rays[o].tight[t]) {
                            sup = false;
                            break;
                        }
                    if (sup) adjacent = false;
                }
                if (!adjacent) continue;
                Vec v(dim);
                for (std::size_t j = 0; j < dim; ++j) v[j] = val[p] * rays[q].v[j] - val[q] * rays[p].v[j];
                v = primitive_direction(v);
                Ray r{std::move(v), {}};
                for (std::size_t t = 0; t < order.size(); ++t) r.tight.push_back(rays[p].tight[t] && rays[q].tight[t]);
                r.tight.push_back(true);
                next.push_back(std::move(r));
            }
        }
        order.push_back(i);
        rays = std::move(next);
    }
    std::vector<Vec> out;
    for (auto& r : rays) out.push_back(std::move(r.v));
    return out;
}

inline bool all_zero_one(const std::vector<State>& S) {
    for (const auto& s : S)
        for (const auto& v : s)
            if (v != 0 && v != 1) return false;
    return true;
}

} // namespace detail

inline constexpr std::size_t kHullDimCap = 16;

/// Convex hull of S with the free coordinates left unconstrained.
inline HullResult hull_of_states(const std::vector<State>& S_in, std::size_t n, const std::vector<std::size_t>& free_vars,
                                 std::size_t dim_cap = kHullDimCap) {
    HullResult out;
    std::vector<bool> is_free(n, false);
    for (auto f : free_vars) {
        if (f >= n) throw InputError("free variable index out of range");
        is_free[f] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!is_free[i]) out.bounded.push_back(i);
    const std::size_t d = out.bounded.size();
    std::vector<State> S;
    for (const auto& s : S_in) {
        if (s.size() != n) throw InputError("state dimension mismatch in hull input");
        State p;
        for (auto i : out.bounded) p.push_back(s[i]);
        S.push_back(std::move(p));
    }
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    if (S.empty()) {
        out.poly = Polyhedron::empty(n);
        out.exact = true;
        return out;
    }
    auto lift = [&](const Vec& a) {
        Vec v(n, Rational(0));
        for (std::size_t k = 0; k < d; ++k) v[out.bounded[k]] = a[k];
        return v;
    };
    // affine hull: differences to the first point
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < S.size(); ++i) {
        Vec v(d);
        for (std::size_t k = 0; k < d; ++k) v[k] = S[i][k] - S[0][k];
        diffs.push_back(std::move(v));
    }
    auto red = diffs;
    auto pivots = detail::rref(red, d);
    const std::size_t r = pivots.size();
    out.poly = Polyhedron(n);
    // equalities: null space of the difference matrix
    std::vector<bool> is_pivot(d, false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t c = 0; c < d; ++c) {
        if (is_pivot[c]) continue;
        Vec nv(d, Rational(0));
        nv[c] = 1;
        for (std::size_t k = 0; k < r; ++k) nv[pivots[k]] = -red[k][c];
        nv = primitive_direction(nv);
        out.poly.add_eq(lift(nv), dot(nv, S[0]));
    }
    if (r > 0) {
        if (r > dim_cap)
            throw InputError("convex hull: affine dimension " + std::to_string(r) + " exceeds the cap of " +
                             std::to_string(dim_cap));
        // project onto pivot coordinates; facets of the projected full-dimensional hull
        std::vector<Vec> C;
        for (const auto& s : S) {
            Vec row;
            for (auto p : pivots) row.push_back(s[p]);
            row.push_back(-1);
            C.push_back(std::move(row));
        }
        auto rays = detail::dd_extreme_rays(C, r + 1);
        std::vector<Constraint> facets;
        for (const auto& ray : rays) {
            Vec a(d, Rational(0));
            bool nonzero = false;
            for (std::size_t k = 0; k < r; ++k) {
                a[pivots[k]] = ray[k];
                if (!ray[k].is_zero()) nonzero = true;
            }
            if (!nonzero) continue;
            facets.push_back({lift(a), ray[r], false});
        }
        std::sort(facets.begin(), facets.end(), [](const Constraint& x, const Constraint& y) {
            return std::tie(x.coeffs, x.bound) < std::tie(y.coeffs, y.bound);
        });
        for (auto& f : facets) out.poly.add(std::move(f));
    }
    // integer points on the bounded coordinates
    if (detail::all_zero_one(S)) {
        out.integer_points = S;
    } else {
        Polyhedron sub(d);
        for (const auto& c : out.poly.rows()) {
            Vec v;
            for (auto i : out.bounded) v.push_back(c.coeffs[i]);
            sub.add({std::move(v), c.bound, c.strict});
        }
        Box b(d);
        for (std::size_t k = 0; k < d; ++k) {
            Rational lo = S[0][k], hi = S[0][k];
            for (const auto& s : S) {
                lo = std::min(lo, s[k]);
                hi = std::max(hi, s[k]);
            }
            b[k].lo = ceil_of(lo);
            b[k].hi = floor_of(hi);
        }
        out.integer_points = enumerate_integer_points(sub, b);
    }
    std::vector<State> integral_input;
    for (const auto& s : S)
        if (all_integral(s)) integral_input.push_back(s);
    out.exact = out.integer_points == integral_input;
    return out;
}

// ---------------------------------------------------------------------------
// Karp-Miller coverability set

struct KarpMillerResult {
    DownwardClosedSet set;
    std::size_t nodes = 0;
};

inline KarpMillerResult karp_miller(const PetriNet& net, const NatVec& s0, std::size_t node_budget = 200000) {
    net.validate();
    if (s0.size() != net.dim) throw InputError("initial state dimension mismatch");
    for (auto v : s0)
        if (v < 0) throw InputError("initial state must be nonnegative");
    struct Node {
        NatVec label;
        std::size_t parent;
    };
    std::vector<Node> nodes{{s0, SIZE_MAX}};
    std::set<NatVec> seen{s0};
    std::vector<std::size_t> work{0};
    while (!work.empty()) {
        std::size_t id = work.back();
        work.pop_back();
        for (const auto& t : net.transitions) {
            const NatVec& M = nodes[id].label;
            bool en = true;
            for (std::size_t i = 0; i < net.dim; ++i)
                if (M[i] != kOmega && M[i] < t.minus[i]) en = false;
            if (!en) continue;
            NatVec Mp(net.dim);
            for (std::size_t i = 0; i < net.dim; ++i)
                Mp[i] = M[i] == kOmega ? kOmega : M[i] - t.minus[i] + t.plus[i];
            for (std::size_t a = id; a != SIZE_MAX; a = nodes[a].parent) {
                const NatVec& Ma = nodes[a].label;
                if (Ma != Mp && DownwardClosedSet::leq(Ma, Mp))
                    for (std::size_t i = 0; i < net.dim; ++i)
                        if (Ma[i] != Mp[i]) Mp[i] = kOmega;
            }
            if (seen.count(Mp)) continue;
            if (nodes.size() >= node_budget) throw InputError("Karp-Miller node budget exhausted");
            seen.insert(Mp);
            nodes.push_back({Mp, id});
            work.push_back(nodes.size() - 1);
        }
    }
    std::vector<NatVec> labels(seen.begin(), seen.end());
    return {DownwardClosedSet(net.dim, std::move(labels)), nodes.size()};
}

// ---------------------------------------------------------------------------
// Reachable states projected away from free coordinates, and their hull

struct ProjectedGraph {
    std::vector<std::size_t> kept;
    std::vector<State> states;                             // full dimension, dropped coordinates 0, sorted
    std::vector<std::pair<std::size_t, std::size_t>> edges; // indices into states, sorted
};

namespace detail {

// Integer points of P on the coordinates `kept` (of P) for which the remaining coordinates have an
// integer completion.
inline std::vector<State> projected_points(const Polyhedron& P, const std::vector<std::size_t>& kept,
                                           std::size_t cap, const std::vector<std::string>& names) {
    auto leaves = split_integer(whole(P), kept, cap);
    if (!leaves) throw InputError("projected values are unbounded or too many");
    std::vector<State> out;
    for (const auto& leaf : *leaves) {
        for (auto c : kept)
            if (!leaf.fixed[c]) throw InputError("value of '" + names[c % names.size()] + "' is not bounded");
        auto feas = integer_infeasible(leaf.residual);
        if (std::holds_alternative<IntYes>(feas)) continue;
        if (std::holds_alternative<IntUnknown>(feas)) throw InputError("integer feasibility undecided within budget");
        State y;
        for (auto c : kept) y.push_back(*leaf.fixed[c]);
        out.push_back(std::move(y));
    }
    return out;
}

} // namespace detail

/// Transition graph of an integer loop on the coordinates `kept`, the others read as arbitrary
/// (existentially projected). Initial points come from the precondition, or from the precondition
/// and guard when the precondition alone leaves kept coordinates unbounded.
inline ProjectedGraph explore_projected(const SlcpLoop& L, const std::vector<std::size_t>& kept,
                                        std::size_t cap = 100000) {
    if (!L.integer()) throw InputError("projected exploration needs the integer interpretation");
    const std::size_t n = L.n();
    ProjectedGraph g{kept, {}, {}};
    auto full = [&](const State& p) {
        State s(n, Rational(0));
        for (std::size_t k = 0; k < kept.size(); ++k) s[kept[k]] = p[k];
        return s;
    };
    std::vector<State> init;
    try {
        init = detail::projected_points(L.pre(), kept, cap, L.names());
    } catch (const InputError&) {
        Polyhedron pg = L.pre();
        pg.append(L.guard());
        init = detail::projected_points(pg, kept, cap, L.names());
    }
    std::map<State, std::size_t> index;
    std::vector<State> proj;
    std::vector<std::size_t> work;
    auto intern = [&](State p) {
        auto [it, fresh] = index.emplace(p, proj.size());
        if (fresh) {
            if (proj.size() >= cap) throw InputError("projected state space exceeds " + std::to_string(cap) + " states");
            proj.push_back(std::move(p));
            work.push_back(it->second);
        }
        return it->second;
    };
    for (auto& p : init) intern(std::move(p));
    std::vector<std::size_t> kept_primed;
    for (auto c : kept) kept_primed.push_back(n + c);
    const Polyhedron T = L.transition_polyhedron();
    std::set<std::pair<std::size_t, std::size_t>> edges;
    while (!work.empty()) {
        std::size_t id = work.back();
        work.pop_back();
        std::vector<std::optional<Rational>> local(2 * n);
        for (std::size_t k = 0; k < kept.size(); ++k) local[kept[k]] = proj[id][k];
        Polyhedron R = T.restricted(local);
        // coordinates of R: the unfixed ones, in order
        std::vector<std::size_t> pos(2 * n, SIZE_MAX);
        std::size_t q = 0;
        for (std::size_t i = 0; i < 2 * n; ++i)
            if (!local[i]) pos[i] = q++;
        std::vector<std::size_t> kp;
        for (auto c : kept_primed) kp.push_back(pos[c]);
        for (auto& succ : detail::projected_points(R, kp, 4096, L.names())) {
            std::size_t to = intern(std::move(succ));
            edges.emplace(id, to);
        }
    }
    // renumber in sorted order
    std::vector<std::size_t> order(proj.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
    std::vector<std::size_t> rank(proj.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    for (auto i : order) g.states.push_back(full(proj[i]));
    for (auto [a, b] : edges) g.edges.emplace_back(rank[a], rank[b]);
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// States reachable from the partial input with the free coordinates projected away (reported as 0).
inline std::vector<State> reachable_projection(const SlcpLoop& L, std::size_t cap = 100000) {
    auto in = as_partial_input(L);
    if (!in) throw InputError("reachable-set projection needs a precondition that only fixes variables");
    std::vector<std::size_t> kept;
    for (const auto& [i, v] : in->assignments) kept.push_back(i);
    return explore_projected(L, kept, cap).states;
}

/// Free coordinates of a loop's partial input.
inline std::vector<std::size_t> free_coordinates(const SlcpLoop& L) {
    auto in = as_partial_input(L);
    if (!in) throw InputError("precondition does not only fix variables");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < L.n(); ++i)
        if (!in->assignments.count(i)) out.push_back(i);
    return out;
}

inline HullResult hull_invariant(const SlcpLoop& L, std::size_t dim_cap = kHullDimCap) {
    return hull_of_states(reachable_projection(L), L.n(), free_coordinates(L), dim_cap);
}

// ---------------------------------------------------------------------------
// Invariant-supported verification

struct SupportedResult {
    Verdict verdict = Verdict::Unknown;
    InvariantReport invariant;
    VerifyResult ranking;
};

inline SupportedResult verify_supported(const SlcpLoop& L, const AffineFunction& f, const Polyhedron& J) {
    SupportedResult out;
    out.invariant = check_polyhedral(L, J);
    if (out.invariant.unknown) {
        out.verdict = Verdict::Unknown;
        return out;
    }
    if (!out.invariant.valid()) {
        out.verdict = Verdict::InvariantInvalid;
        return out;
    }
    out.ranking = verify_pieces(L, f, transition_pieces(L, J.dim() == L.n() && L.integer() ? J.integer_tightened() : J));
    out.verdict = out.ranking.verdict;
    return out;
}

inline SupportedResult verify_supported(const SlcpLoop& L, const AffineFunction& f, const DownwardClosedSet& D) {
    SupportedResult out;
    out.invariant = check_downward(L, D);
    if (!out.invariant.valid()) {
        out.verdict = Verdict::InvariantInvalid;
        return out;
    }
    std::vector<Piece> pieces;
    for (const auto& g : D.generators()) {
        auto ps = transition_pieces(L, generator_box(g));
        pieces.insert(pieces.end(), ps.begin(), ps.end());
    }
    out.ranking = verify_pieces(L, f, pieces);
    out.verdict = out.ranking.verdict;
    return out;
}

} // namespace lrfkit
