#pragma once

#include "pieces.hpp"

#include <deque>

namespace lrfkit {

/// rho(x) = coeffs . x + constant
struct AffineFunction {
    Vec coeffs;
    Rational constant;

    Rational operator()(std::span<const Rational> x) const { return dot(coeffs, x) + constant; }
    friend bool operator==(const AffineFunction&, const AffineFunction&) = default;
};

/// "X:1,Y:-1/2,3": name:coeff pairs, a bare name means coefficient 1, a bare number is the constant.
inline AffineFunction parse_affine(const std::string& spec, const std::vector<std::string>& names) {
    AffineFunction f{Vec(names.size(), Rational(0)), Rational(0)};
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t end = spec.find(',', pos);
        if (end == std::string::npos) end = spec.size();
        std::string item = spec.substr(pos, end - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) throw InputError("empty item in ranking function '" + spec + "'");
        auto colon = item.find(':');
        if (colon == std::string::npos) {
            if (std::isalpha(static_cast<unsigned char>(item[0])) || item[0] == '_') {
                auto it = std::find(names.begin(), names.end(), item);
                if (it == names.end()) throw InputError("unknown variable '" + item + "' in ranking function");
                f.coeffs[static_cast<std::size_t>(it - names.begin())] += 1;
            } else {
                f.constant += parse_rational(item);
            }
        } else {
            std::string name = item.substr(0, colon);
            name.erase(name.find_last_not_of(" \t") + 1);
            std::string val = item.substr(colon + 1);
            val.erase(0, val.find_first_not_of(" \t"));
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw InputError("unknown variable '" + name + "' in ranking function");
            f.coeffs[static_cast<std::size_t>(it - names.begin())] += parse_rational(val);
        }
        pos = end + 1;
    }
    return f;
}

inline std::string format_affine(const AffineFunction& f, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        if (!out.empty()) out += ",";
        out += names[i] + ":" + to_string(f.coeffs[i]);
    }
    if (!f.constant.is_zero() || out.empty()) {
        if (!out.empty()) out += ",";
        out += to_string(f.constant);
    }
    return out;
}

/// f(x) + f0 >= 0 as a row over (x, x').
inline Constraint nonneg_target(const AffineFunction& f) {
    const std::size_t n = f.coeffs.size();
    Vec a(2 * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) a[i] = -f.coeffs[i];
    return {std::move(a), f.constant, false};
}

/// f(x) - f(x') >= 1 as a row over (x, x').
inline Constraint decrease_target(const AffineFunction& f) {
    const std::size_t n = f.coeffs.size();
    Vec a(2 * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = -f.coeffs[i];
        a[n + i] = f.coeffs[i];
    }
    return {std::move(a), Rational(-1), false};
}

inline std::vector<std::size_t> range(std::size_t from, std::size_t to) {
    std::vector<std::size_t> v;
    for (std::size_t i = from; i < to; ++i) v.push_back(i);
    return v;
}

/// Pieces covering { (x, x') in T : x in J }. Integer loops are split by bounded coordinates.
inline std::vector<Piece> transition_pieces(const SlcpLoop& L, const Polyhedron& J, std::size_t cap = 512) {
    Polyhedron base = L.transition_polyhedron();
    base.append(J.embedded(2 * L.n(), 0));
    if (L.integer()) base = base.integer_tightened();
    Piece all = whole(base);
    if (!L.integer()) return {all};
    auto first = split_integer(all, range(0, L.n()), cap);
    if (!first) return {all};
    std::vector<Piece> out;
    for (auto& p : *first) {
        auto second = split_integer(p, range(L.n(), 2 * L.n()), cap);
        if (second)
            for (auto& q : *second) out.push_back(std::move(q));
        else
            out.push_back(std::move(p));
    }
    return out;
}

enum class Verdict { Yes, No, Vacuous, Unknown, InvariantInvalid };

struct Counterexample {
    State x, xp;
    std::string violated; // "nonneg" or "decrease" or an invariant row
};

struct VerifyResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<Proof> proofs;
    std::optional<Counterexample> counterexample;
    std::string note;

    bool recheck() const {
        return std::all_of(proofs.begin(), proofs.end(), [](const Proof& p) { return p.recheck(); });
    }
};

inline std::string evidence_kind(const SlcpLoop& L, const VerifyResult& r) {
    if (!L.integer()) return "farkas";
    bool any_tree = std::any_of(r.proofs.begin(), r.proofs.end(), [](const Proof& p) { return p.tree != nullptr; });
    return any_tree ? "rational-certificate+branch-and-bound" : "rational-certificate";
}

/// Checks both ranking conditions on every piece.
inline VerifyResult verify_pieces(const SlcpLoop& L, const AffineFunction& f, const std::vector<Piece>& pieces) {
    if (f.coeffs.size() != L.n()) throw InputError("ranking function dimension does not match the loop");
    VerifyResult r;
    const Constraint targets[2] = {nonneg_target(f), decrease_target(f)};
    const char* labels[2] = {"nonneg", "decrease"};
    bool all_vacuous = true;
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        for (int k = 0; k < 2; ++k) {
            auto res = entail_piece(pieces[pi], targets[k], L.integer(), labels[k]);
            if (auto* y = std::get_if<PieceYes>(&res)) {
                if (!y->proof.vacuous) all_vacuous = false;
                bool vac = y->proof.vacuous;
                r.proofs.push_back(std::move(y->proof));
                if (vac) break;
            } else if (auto* n = std::get_if<PieceNo>(&res)) {
                r.verdict = Verdict::No;
                r.proofs.clear();
                State x(n->point.begin(), n->point.begin() + static_cast<std::ptrdiff_t>(L.n()));
                State xp(n->point.begin() + static_cast<std::ptrdiff_t>(L.n()), n->point.end());
                r.counterexample = Counterexample{std::move(x), std::move(xp), labels[k]};
                return r;
            } else {
                r.verdict = Verdict::Unknown;
                r.note = std::get<PieceUnknown>(res).reason;
                r.proofs.clear();
                return r;
            }
        }
    }
    r.verdict = all_vacuous ? Verdict::Vacuous : Verdict::Yes;
    return r;
}

/// Is f a ranking function for all guard+update transitions?
inline VerifyResult verify_universal(const SlcpLoop& L, const AffineFunction& f) {
    return verify_pieces(L, f, {whole(L.transition_polyhedron())});
}

enum class SynthKind { Found, NoneExists, VacuouslyAny };

struct SynthResult {
    SynthKind kind = SynthKind::NoneExists;
    std::optional<AffineFunction> f;
    VerifyResult verification; // for Found
};

namespace detail {

// Joint LP in (f, f0, t, lambda_p, mu_p for every piece): minimize sum t with t >= |f_i|, t_0 >= |f0|.
inline std::optional<AffineFunction> synth_lp(std::size_t n, const std::vector<Polyhedron>& pieces) {
    std::size_t nv = 2 * (n + 1);
    std::vector<std::size_t> lam_off, mu_off;
    for (const auto& p : pieces) {
        lam_off.push_back(nv);
        nv += p.size();
        mu_off.push_back(nv);
        nv += p.size();
    }
    std::vector<Vec> M;
    Vec m;
    auto row = [&] { return Vec(nv, Rational(0)); };
    auto eq = [&](Vec r, Rational b) {
        Vec neg = r;
        for (auto& v : neg) v = -v;
        M.push_back(std::move(r));
        m.push_back(b);
        M.push_back(std::move(neg));
        m.push_back(-b);
    };
    const std::size_t f0 = n, t0 = n + 1;
    for (std::size_t i = 0; i <= n; ++i) {
        Vec a = row(); // f_i - t_i <= 0
        a[i] = 1;
        a[t0 + i] = -1;
        M.push_back(a);
        m.push_back(0);
        Vec b = row(); // -f_i - t_i <= 0
        b[i] = -1;
        b[t0 + i] = -1;
        M.push_back(b);
        m.push_back(0);
    }
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        const auto& P = pieces[p];
        for (std::size_t r = 0; r < P.size(); ++r) {
            Vec a = row();
            a[lam_off[p] + r] = -1;
            M.push_back(a);
            m.push_back(0);
            Vec b = row();
            b[mu_off[p] + r] = -1;
            M.push_back(b);
            m.push_back(0);
        }
        // lambda . M = (-f, 0), mu . M = (-f, f)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            Vec a = row(), b = row();
            for (std::size_t r = 0; r < P.size(); ++r) {
                a[lam_off[p] + r] = P[r].coeffs[j];
                b[mu_off[p] + r] = P[r].coeffs[j];
            }
            if (j < n) {
                a[j] += 1;
                b[j] += 1;
            } else {
                b[j - n] -= 1;
            }
            eq(std::move(a), 0);
            eq(std::move(b), 0);
        }
        // lambda . m <= f0, mu . m <= -1
        Vec a = row(), b = row();
        for (std::size_t r = 0; r < P.size(); ++r) {
            a[lam_off[p] + r] = P[r].bound;
            b[mu_off[p] + r] = P[r].bound;
        }
        a[f0] = -1;
        M.push_back(a);
        m.push_back(0);
        M.push_back(b);
        m.push_back(-1);
    }
    Vec obj(nv, Rational(0));
    for (std::size_t i = 0; i <= n; ++i) obj[t0 + i] = -1;
    auto res = simplex::maximize(M, m, obj);
    auto* opt = std::get_if<simplex::Optimal>(&res);
    if (!opt) return std::nullopt;
    AffineFunction f{Vec(opt->x.begin(), opt->x.begin() + static_cast<std::ptrdiff_t>(n)), opt->x[f0]};
    return f;
}

} // namespace detail

/// Minimal-L1 affine function ranking every nonempty piece, found through one Farkas LP.
inline SynthResult synth_over(const SlcpLoop& L, const std::vector<Piece>& pieces) {
    std::vector<Polyhedron> nonempty;
    std::vector<Piece> kept;
    for (const auto& p : pieces) {
        Polyhedron prem = p.full();
        if (is_empty(prem)) continue;
        // entailment of non-strict targets only depends on the closure of a nonempty premise
        Polyhedron closed(2 * L.n());
        for (const auto& c : prem.rows()) closed.add_le(c.coeffs, c.bound);
        nonempty.push_back(std::move(closed));
        kept.push_back(p);
    }
    SynthResult out;
    if (nonempty.empty()) {
        out.kind = SynthKind::VacuouslyAny;
        return out;
    }
    auto f = detail::synth_lp(L.n(), nonempty);
    if (!f) {
        out.kind = SynthKind::NoneExists;
        return out;
    }
    out.kind = SynthKind::Found;
    out.f = *f;
    out.verification = verify_pieces(L, *f, kept);
    if (out.verification.verdict != Verdict::Yes)
        throw std::logic_error("internal error: synthesized function failed verification");
    return out;
}

inline SynthResult synth_universal(const SlcpLoop& L) { return synth_over(L, {whole(L.transition_polyhedron())}); }

// ---------------------------------------------------------------------------
// Refutation by runs

struct RunRefutation {
    bool refuted = false;
    std::optional<Lasso> lasso;
    State initial;
    std::size_t instantiations_tried = 0;
    std::string note;
};

namespace detail {

// Instantiations of the free coordinates within box, in descending lexicographic order.
inline std::vector<State> instantiations(const SlcpLoop& L, const PartialInput& in, const Box& box,
                                         std::size_t cap) {
    std::vector<std::size_t> free;
    State base(L.n(), Rational(0));
    for (std::size_t i = 0; i < L.n(); ++i) {
        auto it = in.assignments.find(i);
        if (it != in.assignments.end())
            base[i] = it->second;
        else
            free.push_back(i);
    }
    std::vector<State> out;
    std::vector<Integer> cur(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        if (!box[free[k]].lo || !box[free[k]].hi) throw InputError("box must bound every free variable");
        cur[k] = *box[free[k]].hi;
    }
    for (;;) {
        State s = base;
        for (std::size_t k = 0; k < free.size(); ++k) s[free[k]] = Rational(cur[k]);
        out.push_back(std::move(s));
        if (out.size() >= cap) return out;
        std::size_t k = free.size();
        bool stepped = false;
        while (k > 0 && !stepped) {
            --k;
            if (cur[k] > *box[free[k]].lo) {
                --cur[k];
                for (std::size_t j = k + 1; j < free.size(); ++j) cur[j] = *box[free[j]].hi;
                stepped = true;
            }
        }
        if (!stepped) return out;
    }
}

} // namespace detail

/// Searches instantiations of the partial input for a reachable cycle (an infinite run).
inline RunRefutation refute_by_run(const SlcpLoop& L, const PartialInput& in, const Box& box, std::size_t budget,
                                   std::size_t max_instantiations = 64) {
    if (!L.integer()) throw InputError("refutation by runs requires the integer interpretation");
    RunRefutation out;
    std::size_t spent = 0;
    for (const auto& s0 : detail::instantiations(L, in, box, max_instantiations)) {
        if (!is_initial(L, s0)) continue;
        ++out.instantiations_tried;
        if (spent >= budget) break;
        ExploreOptions opts{budget - spent, true};
        auto rep = explore(L, s0, box, budget, opts);
        spent += rep.visited.size();
        if (rep.outcome == ExploreOutcome::CycleFound && check_lasso(L, *rep.lasso)) {
            out.refuted = true;
            out.lasso = rep.lasso;
            out.initial = s0;
            return out;
        }
    }
    out.note = "no reachable cycle found within the box and budget";
    return out;
}

struct CandidateRefutation {
    bool refuted = false;
    std::vector<State> path; // initial state ... x, x' where (x, x') violates a ranking condition
    std::string violated;
};

/// Breadth-first simulation looking for a reachable transition on which f fails.
inline CandidateRefutation refute_candidate_by_run(const SlcpLoop& L, const AffineFunction& f, const PartialInput& in,
                                                   const Box& box, std::size_t max_steps,
                                                   std::size_t max_instantiations = 64) {
    CandidateRefutation out;
    for (const auto& s0 : detail::instantiations(L, in, box, max_instantiations)) {
        if (!is_initial(L, s0)) continue;
        std::map<State, State> parent;
        std::map<State, std::size_t> depth;
        std::deque<State> q{s0};
        depth[s0] = 0;
        while (!q.empty()) {
            State x = q.front();
            q.pop_front();
            if (depth[x] >= max_steps) continue;
            for (const auto& xp : successors_bounded(L, x, box)) {
                std::string bad;
                if (f(x) < 0) bad = "nonneg";
                else if (f(x) - f(xp) < 1) bad = "decrease";
                if (!bad.empty()) {
                    std::vector<State> path{xp, x};
                    State cur = x;
                    while (parent.count(cur)) {
                        cur = parent[cur];
                        path.push_back(cur);
                    }
                    std::reverse(path.begin(), path.end());
                    out.refuted = true;
                    out.path = std::move(path);
                    out.violated = bad;
                    return out;
                }
                if (!depth.count(xp)) {
                    depth[xp] = depth[x] + 1;
                    parent[xp] = x;
                    q.push_back(xp);
                }
            }
        }
    }
    return out;
}

} // namespace lrfkit
