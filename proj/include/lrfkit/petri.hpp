#pragma once

#include "loop.hpp"

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <unordered_map>

namespace lrfkit {

using NatVec = std::vector<std::int64_t>;

struct PetriTransition {
    NatVec minus, plus;
    friend bool operator==(const PetriTransition&, const PetriTransition&) = default;
};

/// Petri net over n places; a plain VAS is stored through the canonical split of each displacement.
struct PetriNet {
    std::size_t dim = 0;
    std::vector<PetriTransition> transitions;

    static PetriNet from_displacements(std::size_t dim, const std::vector<std::vector<std::int64_t>>& vs) {
        PetriNet net{dim, {}};
        for (const auto& v : vs) {
            if (v.size() != dim) throw InputError("displacement dimension mismatch");
            PetriTransition t{NatVec(dim, 0), NatVec(dim, 0)};
            for (std::size_t i = 0; i < dim; ++i) (v[i] < 0 ? t.minus[i] : t.plus[i]) = std::llabs(v[i]);
            net.transitions.push_back(std::move(t));
        }
        return net;
    }

    void validate() const {
        for (const auto& t : transitions) {
            if (t.minus.size() != dim || t.plus.size() != dim) throw InputError("transition dimension mismatch");
            for (std::size_t i = 0; i < dim; ++i)
                if (t.minus[i] < 0 || t.plus[i] < 0) throw InputError("transition entries must be nonnegative");
        }
    }

    friend bool operator==(const PetriNet&, const PetriNet&) = default;
};

inline bool enabled(const PetriTransition& t, const NatVec& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < t.minus[i]) return false;
    return true;
}

inline NatVec fire(const PetriTransition& t, const NatVec& x) {
    NatVec y(x);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t.minus[i] + t.plus[i];
    return y;
}

// ---------------------------------------------------------------------------
// .vas format: "dim n", then "minus: a1 .. an plus: b1 .. bn" per transition

inline PetriNet parse_net(std::string_view src) {
    auto lines = text::lines_of(src);
    PetriNet net;
    bool have_dim = false;
    for (const auto& ln : lines) {
        auto w = text::words(ln);
        if (!have_dim) {
            if (w.size() != 2 || w[0].text != "dim") throw ParseError(ln.number, 1, "expected 'dim n'");
            Integer d = text::integer_at(w[1], ln.number);
            if (d < 0 || d > 64) throw ParseError(ln.number, w[1].column, "dimension out of range");
            net.dim = d.convert_to<std::size_t>();
            have_dim = true;
            continue;
        }
        if (w.size() != 2 * net.dim + 2 || w[0].text != "minus:" || w[net.dim + 1].text != "plus:")
            throw ParseError(ln.number, 1,
                             "expected 'minus:' with " + std::to_string(net.dim) + " entries then 'plus:' with " +
                                 std::to_string(net.dim) + " entries");
        PetriTransition t{NatVec(net.dim), NatVec(net.dim)};
        for (std::size_t i = 0; i < net.dim; ++i) {
            for (int side = 0; side < 2; ++side) {
                const auto& tok = w[1 + i + side * (net.dim + 1)];
                Integer v = text::integer_at(tok, ln.number);
                if (v < 0 || v > Integer(1) << 40) throw ParseError(ln.number, tok.column, "entry out of range");
                (side == 0 ? t.minus : t.plus)[i] = v.convert_to<std::int64_t>();
            }
        }
        net.transitions.push_back(std::move(t));
    }
    if (!have_dim) throw ParseError(1, 1, "missing 'dim n'");
    return net;
}

inline std::string emit_net(const PetriNet& net) {
    std::string out = "dim " + std::to_string(net.dim) + "\n";
    for (const auto& t : net.transitions) {
        out += "minus:";
        for (auto v : t.minus) out += " " + std::to_string(v);
        out += " plus:";
        for (auto v : t.plus) out += " " + std::to_string(v);
        out += "\n";
    }
    return out;
}

inline PetriNet load_net(const std::string& path) { return parse_net(text::read_file(path)); }

inline NatVec parse_natvec(const std::string& s, std::size_t dim) {
    NatVec v;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        Rational r = parse_rational(cur);
        if (!is_integral(r) || r < 0) throw InputError("expected a natural number, got '" + cur + "'");
        v.push_back(numer(r).convert_to<std::int64_t>());
        cur.clear();
    };
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            cur += c;
    }
    flush();
    if (v.size() != dim) throw InputError("vector has " + std::to_string(v.size()) + " entries, expected " + std::to_string(dim));
    return v;
}

inline std::string format_natvec(const NatVec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

enum class QueryKind { Cover, Reach, Positive };

struct VasQuery {
    QueryKind kind = QueryKind::Cover;
    NatVec target;        // Cover / Reach
    std::size_t coord = 0; // Positive, 0-based
};

enum class OracleAnswer { Yes, No, Inconclusive };

struct BfsResult {
    OracleAnswer answer = OracleAnswer::No;
    std::vector<std::size_t> path; // transition indices
    std::vector<NatVec> states;    // s0 .. final
    std::size_t explored = 0;
};

inline std::size_t default_state_cap() {
    if (const char* env = std::getenv("LRFKIT_STATE_CAP")) {
        long long v = std::atoll(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1000000;
}

struct NatVecHash {
    std::size_t operator()(const NatVec& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

inline bool satisfies(const VasQuery& q, const NatVec& x) {
    switch (q.kind) {
    case QueryKind::Reach: return x == q.target;
    case QueryKind::Cover:
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < q.target[i]) return false;
        return true;
    case QueryKind::Positive: return x[q.coord] > 0;
    }
    return false;
}

/// Is path a sequence of enabled firings from s0 ending in a state satisfying q?
inline bool check_path(const PetriNet& net, const NatVec& s0, const std::vector<std::size_t>& path, const VasQuery& q) {
    NatVec x = s0;
    for (auto k : path) {
        if (k >= net.transitions.size() || !enabled(net.transitions[k], x)) return false;
        x = fire(net.transitions[k], x);
    }
    return satisfies(q, x);
}

inline BfsResult vas_bfs(const PetriNet& net, const NatVec& s0, const VasQuery& q, std::size_t cap) {
    if (cap == 0) throw InputError("state cap must be positive");
    if (s0.size() != net.dim) throw InputError("initial state dimension mismatch");
    if (q.kind == QueryKind::Positive && q.coord >= net.dim) throw InputError("coordinate out of range");
    if (q.kind != QueryKind::Positive && q.target.size() != net.dim) throw InputError("target dimension mismatch");
    for (auto v : s0)
        if (v < 0) throw InputError("initial state must be nonnegative");
    std::unordered_map<NatVec, std::pair<NatVec, std::size_t>, NatVecHash> parent;
    std::deque<NatVec> frontier{s0};
    parent.emplace(s0, std::make_pair(NatVec{}, SIZE_MAX));
    BfsResult r;
    auto build = [&](NatVec x) {
        while (parent.at(x).second != SIZE_MAX) {
            r.states.push_back(x);
            r.path.push_back(parent.at(x).second);
            x = parent.at(x).first;
        }
        r.states.push_back(x);
        std::reverse(r.path.begin(), r.path.end());
        std::reverse(r.states.begin(), r.states.end());
    };
    while (!frontier.empty()) {
        NatVec x = std::move(frontier.front());
        frontier.pop_front();
        ++r.explored;
        if (satisfies(q, x)) {
            r.answer = OracleAnswer::Yes;
            build(x);
            return r;
        }
        for (std::size_t k = 0; k < net.transitions.size(); ++k) {
            if (!enabled(net.transitions[k], x)) continue;
            NatVec y = fire(net.transitions[k], x);
            if (parent.count(y)) continue;
            if (parent.size() >= cap) {
                r.answer = OracleAnswer::Inconclusive;
                return r;
            }
            parent.emplace(y, std::make_pair(x, k));
            frontier.push_back(std::move(y));
        }
    }
    r.answer = OracleAnswer::No;
    return r;
}

/// All reachable states, or nullopt past cap.
inline std::optional<std::vector<NatVec>> reachable_states(const PetriNet& net, const NatVec& s0, std::size_t cap) {
    std::unordered_map<NatVec, bool, NatVecHash> seen{{s0, true}};
    std::deque<NatVec> frontier{s0};
    while (!frontier.empty()) {
        NatVec x = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& t : net.transitions) {
            if (!enabled(t, x)) continue;
            NatVec y = fire(t, x);
            if (seen.count(y)) continue;
            if (seen.size() >= cap) return std::nullopt;
            seen.emplace(y, true);
            frontier.push_back(std::move(y));
        }
    }
    std::vector<NatVec> out;
    for (auto& [s, _] : seen) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Loop encoding of a net: variables X1..Xn, A1..Am and optionally Y.
// Update rows, in order: -A'_k <= 0; sum A' = 1; Psi_i; Phi_i (pairs); Y' - Y - X_n <= -1.

struct PetriLoopLayout {
    std::size_t n = 0, m = 0;
    bool y_gadget = false;
    std::size_t x(std::size_t i) const { return i; }
    std::size_t a(std::size_t k) const { return n + k; }
    std::size_t y() const { return n + m; }
    std::size_t dim() const { return n + m + (y_gadget ? 1 : 0); }
};

inline SlcpLoop encode_petri_loop(const PetriNet& net, const NatVec& s0, bool y_gadget) {
    net.validate();
    PetriLoopLayout lay{net.dim, net.transitions.size(), y_gadget};
    if (lay.n == 0) throw InputError("net must have at least one place");
    const std::size_t d = lay.dim();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < lay.n; ++i) names.push_back("X" + std::to_string(i + 1));
    for (std::size_t k = 0; k < lay.m; ++k) names.push_back("A" + std::to_string(k + 1));
    if (y_gadget) names.push_back("Y");
    Polyhedron pre(d), guard(d), update(2 * d);
    for (std::size_t i = 0; i < lay.n; ++i) pre.add_eq(unit(d, lay.x(i)), Rational(s0.at(i)));
    for (std::size_t k = 0; k < lay.m; ++k) pre.add_eq(unit(d, lay.a(k)), 0);
    for (std::size_t i = 0; i < lay.n; ++i) guard.add_le(unit(d, lay.x(i), -1), 0);
    if (y_gadget) guard.add_lt(unit(d, lay.y(), -1), 0);
    for (std::size_t k = 0; k < lay.m; ++k) update.add_le(unit(2 * d, d + lay.a(k), -1), 0);
    Vec sum(2 * d, Rational(0));
    for (std::size_t k = 0; k < lay.m; ++k) sum[d + lay.a(k)] = 1;
    update.add_eq(sum, 1);
    for (std::size_t i = 0; i < lay.n; ++i) {
        Vec psi(2 * d, Rational(0));
        psi[lay.x(i)] = -1;
        for (std::size_t k = 0; k < lay.m; ++k) psi[d + lay.a(k)] = Rational(net.transitions[k].minus[i]);
        update.add_le(psi, 0);
    }
    for (std::size_t i = 0; i < lay.n; ++i) {
        Vec phi(2 * d, Rational(0));
        phi[d + lay.x(i)] = 1;
        phi[lay.x(i)] = -1;
        for (std::size_t k = 0; k < lay.m; ++k)
            phi[d + lay.a(k)] = Rational(net.transitions[k].minus[i] - net.transitions[k].plus[i]);
        update.add_eq(phi, 0);
    }
    if (y_gadget) {
        Vec yr(2 * d, Rational(0));
        yr[d + lay.y()] = 1;
        yr[lay.y()] = -1;
        yr[lay.x(lay.n - 1)] = -1;
        update.add_le(yr, -1);
    }
    return SlcpLoop(std::move(names), std::move(pre), std::move(guard), std::move(update), Interpretation::Integer);
}

struct DecodedPetriLoop {
    PetriNet net;
    PetriLoopLayout layout;
};

/// Recognizes loops produced by encode_petri_loop (any precondition). Returns nullopt otherwise.
inline std::optional<DecodedPetriLoop> decode_petri_loop(const SlcpLoop& L) {
    const std::size_t d = L.n();
    const auto& g = L.guard().rows();
    std::size_t n = 0;
    while (n < g.size() && n < d && g[n].coeffs == unit(d, n, -1) && g[n].bound == 0) ++n;
    if (n == 0) return std::nullopt;
    bool y = g.size() == n + 1;
    if (g.size() != n && !y) return std::nullopt;
    if (y && d < n + 1) return std::nullopt;
    std::size_t m = d - n - (y ? 1 : 0);
    const auto& u = L.update().rows();
    if (u.size() != m + 2 + n + 2 * n + (y ? 1 : 0)) return std::nullopt;
    PetriNet net{n, std::vector<PetriTransition>(m, PetriTransition{NatVec(n), NatVec(n)})};
    auto as_nat = [](const Rational& r) -> std::optional<std::int64_t> {
        if (!is_integral(r) || r < 0 || r > Rational(Integer(1) << 40)) return std::nullopt;
        return numer(r).convert_to<std::int64_t>();
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& psi = u[m + 2 + i];
        const auto& phi = u[m + 2 + n + 2 * i];
        for (std::size_t k = 0; k < m; ++k) {
            auto mi = as_nat(psi.coeffs[d + n + k]);
            if (!mi) return std::nullopt;
            Rational p = Rational(*mi) - phi.coeffs[d + n + k];
            auto pl = as_nat(p);
            if (!pl) return std::nullopt;
            net.transitions[k].minus[i] = *mi;
            net.transitions[k].plus[i] = *pl;
        }
    }
    SlcpLoop rebuilt = encode_petri_loop(net, NatVec(n, 0), y);
    if (rebuilt.guard() != L.guard() || rebuilt.update() != L.update()) return std::nullopt;
    return DecodedPetriLoop{std::move(net), PetriLoopLayout{n, m, y}};
}

/// Loop state for net state x after firing transition k (k = SIZE_MAX: no flag set).
inline State embed_petri_state(const PetriLoopLayout& lay, const NatVec& x, std::size_t k, std::optional<Integer> yv) {
    State s(lay.dim(), Rational(0));
    for (std::size_t i = 0; i < lay.n; ++i) s[lay.x(i)] = x[i];
    if (k != SIZE_MAX) s[lay.a(k)] = 1;
    if (lay.y_gadget) s[lay.y()] = yv ? Rational(*yv) : Rational(0);
    return s;
}

} // namespace lrfkit
