#pragma once

#include "invariant.hpp"

namespace lrfkit {

enum class BpOp { Incr, Decr, Branch };

/// One instruction; variable and labels are 1-based.
struct BpInstr {
    BpOp op = BpOp::Incr;
    std::size_t var = 1;
    std::size_t k1 = 0, k2 = 0;

    friend bool operator==(const BpInstr&, const BpInstr&) = default;
};

struct BoolProgram {
    std::size_t n = 0;
    std::vector<BpInstr> instrs;

    std::size_t m() const { return instrs.size(); }

    void validate() const {
        if (instrs.empty()) throw InputError("Boolean program needs at least one instruction");
        for (std::size_t k = 0; k < instrs.size(); ++k) {
            const auto& I = instrs[k];
            if (I.var < 1 || I.var > n)
                throw InputError("instruction " + std::to_string(k + 1) + " uses X" + std::to_string(I.var) +
                                 " outside 1.." + std::to_string(n));
            if (I.op == BpOp::Branch && (I.k1 < 1 || I.k1 > m() + 1 || I.k2 < 1 || I.k2 > m() + 1))
                throw InputError("instruction " + std::to_string(k + 1) + " jumps outside 1.." + std::to_string(m() + 1));
        }
    }

    friend bool operator==(const BoolProgram&, const BoolProgram&) = default;
};

struct BoolState {
    std::size_t pc = 1;
    std::vector<std::uint8_t> vals;

    friend auto operator<=>(const BoolState&, const BoolState&) = default;
};

inline BoolState bp_initial(const BoolProgram& P) { return {1, std::vector<std::uint8_t>(P.n, 0)}; }

// ---------------------------------------------------------------------------
// .bp format: optional "vars n", then "incr Xj" | "decr Xj" | "if Xj goto k1 else k2" per line.

namespace detail {

inline std::size_t bp_var(const text::Token& t, std::size_t line) {
    if (t.text.size() < 2 || t.text[0] != 'X' || !std::all_of(t.text.begin() + 1, t.text.end(), ::isdigit))
        throw ParseError(line, t.column, "expected a variable Xj, got '" + t.text + "'");
    std::size_t j = std::stoul(t.text.substr(1));
    if (j == 0) throw ParseError(line, t.column, "variables are numbered from X1");
    return j;
}

inline std::size_t bp_label(const text::Token& t, std::size_t line) {
    Integer v = text::integer_at(t, line);
    if (v < 1 || v > 1000000) throw ParseError(line, t.column, "label out of range");
    return v.convert_to<std::size_t>();
}

} // namespace detail

inline BoolProgram parse_bp(std::string_view src) {
    BoolProgram P;
    std::optional<std::size_t> declared;
    std::size_t max_var = 0;
    std::vector<std::pair<std::size_t, std::size_t>> label_sites; // (line, column) per branch label use
    for (const auto& ln : text::lines_of(src)) {
        auto w = text::words(ln);
        const std::string& op = w[0].text;
        if (op == "vars") {
            if (w.size() != 2 || declared || !P.instrs.empty())
                throw ParseError(ln.number, 1, "expected a single leading 'vars n' line");
            declared = text::integer_at(w[1], ln.number).convert_to<std::size_t>();
            continue;
        }
        BpInstr I;
        if (op == "incr" || op == "decr") {
            if (w.size() != 2) throw ParseError(ln.number, w[0].column, "expected '" + op + " Xj'");
            I.op = op == "incr" ? BpOp::Incr : BpOp::Decr;
            I.var = detail::bp_var(w[1], ln.number);
        } else if (op == "if") {
            if (w.size() != 6 || w[2].text != "goto" || w[4].text != "else")
                throw ParseError(ln.number, w[0].column, "expected 'if Xj goto k1 else k2'");
            I.op = BpOp::Branch;
            I.var = detail::bp_var(w[1], ln.number);
            I.k1 = detail::bp_label(w[3], ln.number);
            I.k2 = detail::bp_label(w[5], ln.number);
            label_sites.emplace_back(ln.number, w[3].column);
        } else {
            throw ParseError(ln.number, w[0].column, "unknown instruction '" + op + "'");
        }
        max_var = std::max(max_var, I.var);
        P.instrs.push_back(I);
    }
    if (P.instrs.empty()) throw ParseError(1, 1, "Boolean program needs at least one instruction");
    if (declared && *declared < max_var) throw ParseError(1, 1, "'vars' is smaller than the largest variable used");
    P.n = declared ? *declared : max_var;
    std::size_t b = 0;
    for (const auto& I : P.instrs) {
        if (I.op != BpOp::Branch) continue;
        if (I.k1 > P.m() + 1 || I.k2 > P.m() + 1)
            throw ParseError(label_sites[b].first, label_sites[b].second,
                             "jump target outside 1.." + std::to_string(P.m() + 1));
        ++b;
    }
    return P;
}

inline std::string emit_bp(const BoolProgram& P) {
    std::string out = "vars " + std::to_string(P.n) + "\n";
    for (const auto& I : P.instrs) {
        switch (I.op) {
        case BpOp::Incr: out += "incr X" + std::to_string(I.var) + "\n"; break;
        case BpOp::Decr: out += "decr X" + std::to_string(I.var) + "\n"; break;
        case BpOp::Branch:
            out += "if X" + std::to_string(I.var) + " goto " + std::to_string(I.k1) + " else " + std::to_string(I.k2) + "\n";
            break;
        }
    }
    return out;
}

inline BoolProgram load_bp(const std::string& path) { return parse_bp(text::read_file(path)); }

// ---------------------------------------------------------------------------
// Interpreter

enum class StepKind { Next, Halted, Aborted };

struct StepResult {
    StepKind kind;
    BoolState next;
};

inline StepResult bp_step(const BoolProgram& P, const BoolState& s) {
    if (s.pc < 1 || s.pc > P.m() + 1 || s.vals.size() != P.n) throw InputError("invalid Boolean program state");
    for (auto v : s.vals)
        if (v > 1) throw InputError("invalid Boolean program state");
    if (s.pc == P.m() + 1) return {StepKind::Halted, s};
    const auto& I = P.instrs[s.pc - 1];
    BoolState t = s;
    auto& x = t.vals[I.var - 1];
    switch (I.op) {
    case BpOp::Incr:
        if (x == 1) return {StepKind::Aborted, s};
        x = 1;
        ++t.pc;
        break;
    case BpOp::Decr:
        if (x == 0) return {StepKind::Aborted, s};
        x = 0;
        ++t.pc;
        break;
    case BpOp::Branch: t.pc = x ? I.k1 : I.k2; break;
    }
    return {StepKind::Next, t};
}

enum class BpOutcome { Halts, Loops, Aborts };

inline std::string to_string(BpOutcome o) {
    switch (o) {
    case BpOutcome::Halts: return "halts";
    case BpOutcome::Loops: return "loops";
    case BpOutcome::Aborts: return "aborts";
    }
    return "?";
}

struct BpRun {
    BpOutcome outcome;
    std::vector<BoolState> states; // from the initial state; for Loops the last state repeats an earlier one
};

inline constexpr std::size_t kBpMaxVars = 20;

inline BpRun bp_run(const BoolProgram& P) {
    P.validate();
    if (P.n > kBpMaxVars) throw InputError("Boolean program has more than " + std::to_string(kBpMaxVars) + " variables");
    BpRun run{BpOutcome::Loops, {bp_initial(P)}};
    std::set<BoolState> seen{run.states[0]};
    for (;;) {
        auto r = bp_step(P, run.states.back());
        if (r.kind == StepKind::Halted) {
            run.outcome = BpOutcome::Halts;
            return run;
        }
        if (r.kind == StepKind::Aborted) {
            run.outcome = BpOutcome::Aborts;
            return run;
        }
        run.states.push_back(r.next);
        if (!seen.insert(r.next).second) return run;
    }
}

inline BpOutcome bp_halts(const BoolProgram& P) { return bp_run(P).outcome; }

// ---------------------------------------------------------------------------
// Reduction to a loop

enum class Gadget { None, RankY, RankYTerminating };

/// Variable order: X1..Xn, A1..A(m+1), N1..N(m+1), (Tk, Fk) per branch k, Y, R.
struct BoolLayout {
    std::size_t n = 0, m = 0;
    std::vector<std::size_t> branch_slot; // per instruction: slot index or SIZE_MAX
    std::size_t branches = 0;
    Gadget gadget = Gadget::None;

    std::size_t x(std::size_t j) const { return j - 1; }
    std::size_t a(std::size_t k) const { return n + k - 1; }
    std::size_t nv(std::size_t k) const { return n + m + 1 + k - 1; }
    std::size_t t(std::size_t k) const { return n + 2 * (m + 1) + 2 * branch_slot[k - 1]; }
    std::size_t f(std::size_t k) const { return t(k) + 1; }
    std::size_t y() const { return n + 2 * (m + 1) + 2 * branches; }
    std::size_t r() const { return y() + 1; }
    std::size_t dim() const {
        return y() + (gadget == Gadget::None ? 0 : gadget == Gadget::RankY ? 1 : 2);
    }
    std::vector<std::size_t> free_vars() const {
        std::vector<std::size_t> out;
        for (std::size_t i = y(); i < dim(); ++i) out.push_back(i);
        return out;
    }
};

struct BoolReduction {
    SlcpLoop loop;
    PartialInput input;
    std::optional<AffineFunction> suggested;
    BoolLayout layout;
};

inline BoolLayout bool_layout(const BoolProgram& P, Gadget g) {
    BoolLayout lay{P.n, P.m(), std::vector<std::size_t>(P.m(), SIZE_MAX), 0, g};
    for (std::size_t k = 0; k < P.m(); ++k)
        if (P.instrs[k].op == BpOp::Branch) lay.branch_slot[k] = lay.branches++;
    return lay;
}

inline BoolReduction reduce_bool_to_loop(const BoolProgram& P, Gadget g) {
    P.validate();
    const BoolLayout lay = bool_layout(P, g);
    const std::size_t d = lay.dim(), n = P.n, m = P.m();
    std::vector<std::string> names(d);
    for (std::size_t j = 1; j <= n; ++j) names[lay.x(j)] = "X" + std::to_string(j);
    for (std::size_t k = 1; k <= m + 1; ++k) {
        names[lay.a(k)] = "A" + std::to_string(k);
        names[lay.nv(k)] = "N" + std::to_string(k);
    }
    for (std::size_t k = 1; k <= m; ++k)
        if (lay.branch_slot[k - 1] != SIZE_MAX) {
            names[lay.t(k)] = "T" + std::to_string(k);
            names[lay.f(k)] = "F" + std::to_string(k);
        }
    if (g != Gadget::None) names[lay.y()] = "Y";
    if (g == Gadget::RankYTerminating) names[lay.r()] = "R";

    Polyhedron pre(d), guard(d), update(2 * d);
    PartialInput in;
    for (std::size_t i = 0; i < lay.y(); ++i) {
        Rational v = i == lay.a(1) ? 1 : 0;
        pre.add_eq(unit(d, i), v);
        in.assignments[i] = v;
    }
    for (std::size_t k = 1; k <= m; ++k) {
        guard.add_le(unit(d, lay.a(k), -1), 0);
        guard.add_le(unit(d, lay.a(k)), 1);
    }
    for (std::size_t j = 1; j <= n; ++j) {
        guard.add_le(unit(d, lay.x(j), -1), 0);
        guard.add_le(unit(d, lay.x(j)), 1);
    }
    if (g != Gadget::None) guard.add_lt(unit(d, lay.y(), -1), 0);

    auto cur = [&](std::size_t i) { return i; };
    auto nxt = [&](std::size_t i) { return d + i; };
    // X'_j = X_j + sum incr A_k - sum decr A_k
    for (std::size_t j = 1; j <= n; ++j) {
        Vec r(2 * d, Rational(0));
        r[nxt(lay.x(j))] = 1;
        r[cur(lay.x(j))] = -1;
        for (std::size_t k = 1; k <= m; ++k) {
            const auto& I = P.instrs[k - 1];
            if (I.var != j) continue;
            if (I.op == BpOp::Incr) r[cur(lay.a(k))] -= 1;
            if (I.op == BpOp::Decr) r[cur(lay.a(k))] += 1;
        }
        update.add_eq(r, 0);
    }
    // branch gadgets on T'_k, F'_k
    for (std::size_t k = 1; k <= m; ++k) {
        const auto& I = P.instrs[k - 1];
        if (I.op != BpOp::Branch) continue;
        const std::size_t T = nxt(lay.t(k)), F = nxt(lay.f(k)), A = cur(lay.a(k)), X = cur(lay.x(I.var));
        auto row = [&](std::initializer_list<std::pair<std::size_t, int>> terms, int bound) {
            Vec r(2 * d, Rational(0));
            for (auto [i, c] : terms) r[i] += c;
            update.add_le(r, bound);
        };
        row({{T, -1}}, 0);
        row({{T, 1}, {A, -1}}, 0);
        row({{T, 1}, {X, -1}}, 0);
        row({{F, -1}}, 0);
        row({{F, 1}, {A, -1}}, 0);
        row({{F, 1}, {X, 1}}, 1);
        row({{T, -1}, {F, -1}, {A, 1}}, 0);
    }
    // N'_i = base + branch adjustments; A'_i = N'_i
    for (std::size_t i = 1; i <= m + 1; ++i) {
        Vec r(2 * d, Rational(0));
        r[nxt(lay.nv(i))] = 1;
        if (i >= 2) r[cur(lay.a(i - 1))] -= 1;
        if (i == m + 1) r[cur(lay.a(m + 1))] -= 1;
        for (std::size_t k = 1; k <= m; ++k) {
            const auto& I = P.instrs[k - 1];
            if (I.op != BpOp::Branch) continue;
            if (k + 1 == i) r[cur(lay.a(k))] += 1;
            if (I.k1 == i) r[nxt(lay.t(k))] -= 1;
            if (I.k2 == i) r[nxt(lay.f(k))] -= 1;
        }
        update.add_eq(r, 0);
    }
    for (std::size_t i = 1; i <= m + 1; ++i) {
        Vec r(2 * d, Rational(0));
        r[nxt(lay.a(i))] = 1;
        r[nxt(lay.nv(i))] = -1;
        update.add_eq(r, 0);
    }
    if (g != Gadget::None) {
        Vec r(2 * d, Rational(0));
        r[nxt(lay.y())] = 1;
        r[cur(lay.y())] = -1;
        r[cur(lay.nv(m + 1))] = -1;
        update.add_eq(r, -1);
    }
    if (g == Gadget::RankYTerminating) {
        Vec r(2 * d, Rational(0));
        r[nxt(lay.r())] = 1;
        r[cur(lay.r())] = -1;
        update.add_eq(r, -1);
        Vec s(2 * d, Rational(0));
        s[nxt(lay.y())] = 1;
        s[cur(lay.y())] = -1;
        s[cur(lay.r())] = -1;
        update.add_le(s, 0);
    }
    BoolReduction out{SlcpLoop(std::move(names), std::move(pre), std::move(guard), std::move(update),
                               Interpretation::Integer),
                      std::move(in), std::nullopt, lay};
    if (g != Gadget::None) {
        AffineFunction f{Vec(d, Rational(0)), 0};
        f.coeffs[lay.y()] = 1;
        out.suggested = f;
    }
    return out;
}

/// Loop state of `cur`, entered from `prev` (none for the initial state). Aux values are the forced ones.
inline State embed_state(const BoolProgram& P, const BoolLayout& lay, const BoolState& cur, const BoolState* prev,
                         const Integer& y = 0, const Integer& r = 0) {
    State s(lay.dim(), Rational(0));
    for (std::size_t j = 1; j <= P.n; ++j) s[lay.x(j)] = cur.vals[j - 1];
    s[lay.a(cur.pc)] = 1;
    if (prev) {
        s[lay.nv(cur.pc)] = 1;
        if (prev->pc <= P.m() && P.instrs[prev->pc - 1].op == BpOp::Branch) {
            bool v = prev->vals[P.instrs[prev->pc - 1].var - 1] == 1;
            s[v ? lay.t(prev->pc) : lay.f(prev->pc)] = 1;
        }
    }
    if (lay.gadget != Gadget::None) s[lay.y()] = Rational(y);
    if (lay.gadget == Gadget::RankYTerminating) s[lay.r()] = Rational(r);
    return s;
}

// ---------------------------------------------------------------------------
// Lockstep simulation check

struct LockstepReport {
    BpOutcome outcome = BpOutcome::Loops;
    std::size_t steps = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline Box lockstep_box(const BoolLayout& lay, const State& s) {
    Box b = make_box(lay.dim(), -1, 2);
    for (auto i : lay.free_vars()) {
        Integer v = numer(s[i]);
        b[i].lo = v - 2;
        b[i].hi = v + 2;
    }
    return b;
}

} // namespace detail

/// Runs the program, embeds each step and checks the successor sets and the Lemma properties.
inline LockstepReport lockstep_check(const BoolProgram& P, Gadget g) {
    auto red = reduce_bool_to_loop(P, g);
    const auto& L = red.loop;
    const auto& lay = red.layout;
    const std::size_t m = P.m();
    LockstepReport rep;
    auto run = bp_run(P);
    rep.outcome = run.outcome;
    auto fail = [&](std::size_t step, const std::string& what) {
        rep.violations.push_back("step " + std::to_string(step) + ": " + what);
    };

    // Embedded sequence: the run, then two idle steps after a halt.
    std::vector<BoolState> seq = run.states;
    if (run.outcome == BpOutcome::Halts) {
        seq.push_back(seq.back());
        seq.push_back(seq.back());
    }
    const Integer y0 = Integer(m + 1) * (Integer(1) << P.n) + 4;
    std::vector<State> emb;
    Integer y = y0, r = y0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        emb.push_back(embed_state(P, lay, seq[i], i ? &seq[i - 1] : nullptr, y, r));
        y = y - 1 + (emb.back()[lay.nv(m + 1)] == 1 ? 1 : 0);
        r = r - 1;
    }
    rep.steps = emb.size() - 1;
    if (!is_initial(L, emb[0])) fail(0, "initial embedding violates the precondition");

    for (std::size_t i = 0; i < emb.size(); ++i) {
        const State& s = emb[i];
        // (1) 0/1 values
        for (std::size_t c = 0; c < lay.y(); ++c)
            if (s[c] != 0 && s[c] != 1) fail(i, "coordinate " + L.names()[c] + " not in {0,1}");
        // (2), (3) T/F values relative to the predecessor
        for (std::size_t k = 1; k <= m; ++k) {
            const auto& I = P.instrs[k - 1];
            if (I.op != BpOp::Branch) continue;
            bool prev_here = i > 0 && emb[i - 1][lay.a(k)] == 1;
            bool xj = i > 0 && emb[i - 1][lay.x(I.var)] == 1;
            if ((s[lay.t(k)] == 1) != (prev_here && xj)) fail(i, "T" + std::to_string(k) + " inconsistent");
            if ((s[lay.f(k)] == 1) != (prev_here && !xj)) fail(i, "F" + std::to_string(k) + " inconsistent");
        }
        // (4) at most one A
        int ones = 0;
        for (std::size_t k = 1; k <= m + 1; ++k) ones += s[lay.a(k)] == 1;
        if (ones > 1) fail(i, "more than one A flag set");
        // (5) all-A-zero only after the halt transfer; N_{m+1} = 1 only there
        bool a_zero = true;
        for (std::size_t k = 1; k <= m; ++k)
            if (s[lay.a(k)] != 0) a_zero = false;
        bool post_halt = seq[i].pc == m + 1;
        if (a_zero != post_halt) fail(i, "A1..Am all zero does not coincide with the halting label");
        if ((s[lay.nv(m + 1)] == 1) != (post_halt && i > 0)) fail(i, "N" + std::to_string(m + 1) + " flag misplaced");
    }

    // successor sets match the embedding
    for (std::size_t i = 0; i + 1 < emb.size(); ++i) {
        auto succ = successors_bounded(L, emb[i], detail::lockstep_box(lay, emb[i]));
        if (succ.size() != 1 || succ[0] != emb[i + 1])
            fail(i, "loop successors (" + std::to_string(succ.size()) + ") differ from the embedded step");
    }
    // (6) idling: from an N_{m+1} = 1 state only T/F and the gadget variables change, then nothing but Y
    for (std::size_t i = 0; i + 1 < emb.size(); ++i) {
        if (emb[i][lay.nv(m + 1)] != 1) continue;
        for (std::size_t c = 0; c < lay.y(); ++c) {
            bool aux = c >= lay.n + 2 * (m + 1);
            if (!aux && emb[i + 1][c] != emb[i][c]) fail(i, "idle step changes " + L.names()[c]);
            if (aux && emb[i + 1][c] != 0) fail(i, "idle step keeps " + L.names()[c] + " set");
        }
        if (lay.gadget != Gadget::None && emb[i + 1][lay.y()] != emb[i][lay.y()]) fail(i, "idle step changes Y");
    }
    if (run.outcome == BpOutcome::Aborts) {
        // the loop's successor leaves the 0/1 box, after which the guard fails
        const State& last = emb.back();
        auto succ = successors_bounded(L, last, detail::lockstep_box(lay, last));
        if (succ.size() != 1) fail(emb.size() - 1, "aborting step does not have a unique successor");
        for (const auto& s : succ) {
            if (L.guard().contains(s)) fail(emb.size() - 1, "state after an aborting step satisfies the guard");
            if (!successors_bounded(L, s, detail::lockstep_box(lay, s)).empty())
                fail(emb.size() - 1, "state after an aborting step has a successor");
        }
    }
    return rep;
}

} // namespace lrfkit
