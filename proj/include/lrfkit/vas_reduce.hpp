#pragma once

#include "invariant.hpp"

namespace lrfkit {

// ---------------------------------------------------------------------------
// Positivity: is a state with X_n > 0 reachable?

struct VasReduction {
    SlcpLoop loop;
    PartialInput input;
    AffineFunction suggested;
    PetriLoopLayout layout;
    PetriNet net; // the net actually compiled (with the idle transition)
};

/// Adds the idle transition (e_n, e_n) and compiles with the Y gadget.
inline VasReduction reduce_vas_positivity(const PetriNet& net, const NatVec& s0) {
    net.validate();
    if (net.dim == 0) throw InputError("net must have at least one place");
    if (s0.size() != net.dim) throw InputError("initial state dimension mismatch");
    for (auto v : s0)
        if (v < 0) throw InputError("initial state must be nonnegative");
    PetriNet ext = net;
    PetriTransition idle{NatVec(net.dim, 0), NatVec(net.dim, 0)};
    idle.minus[net.dim - 1] = idle.plus[net.dim - 1] = 1;
    ext.transitions.push_back(idle);
    SlcpLoop L = encode_petri_loop(ext, s0, true);
    PetriLoopLayout lay{ext.dim, ext.transitions.size(), true};
    PartialInput in;
    for (std::size_t i = 0; i < lay.n; ++i) in.assignments[lay.x(i)] = s0[i];
    for (std::size_t k = 0; k < lay.m; ++k) in.assignments[lay.a(k)] = 0;
    AffineFunction f{Vec(lay.dim(), Rational(0)), 0};
    f.coeffs[lay.y()] = 1;
    return {std::move(L), std::move(in), std::move(f), lay, std::move(ext)};
}

/// Coverability set of the compiled net, lifted to loop states: flags up to 1, Y unbounded.
inline DownwardClosedSet lift_to_loop(const DownwardClosedSet& D, const PetriLoopLayout& lay) {
    if (D.dim() != lay.n) throw InputError("coverability set dimension mismatch");
    std::vector<NatVec> gens;
    for (const auto& g : D.generators()) {
        NatVec h(lay.dim(), 1);
        for (std::size_t i = 0; i < lay.n; ++i) h[lay.x(i)] = g[i];
        if (lay.y_gadget) h[lay.y()] = kOmega;
        gens.push_back(std::move(h));
    }
    return DownwardClosedSet(lay.dim(), std::move(gens));
}

inline DownwardClosedSet positivity_invariant(const VasReduction& red, const NatVec& s0) {
    return lift_to_loop(karp_miller(red.net, s0).set, red.layout);
}

// ---------------------------------------------------------------------------
// Reachability: is t reachable from s?

struct VasReachReduction {
    SlcpLoop loop;
    PartialInput input;
    AffineFunction suggested;
    std::size_t n = 0, m = 0; // VAS dimension (including any sentinel) and displacement count
    std::vector<std::vector<std::int64_t>> displacements;
    NatVec s, t;
    bool sentinel = false;

    std::size_t x(std::size_t j) const { return j; }
    std::size_t counter() const { return n; }
    std::size_t a(std::size_t i) const { return n + 1 + i; }
    std::size_t dim() const { return n + 1 + m + 2; }
};

/// Sentinel: one extra coordinate holding 1, untouched by every displacement, with t extended by 1,
/// so no run from s meets the zero vector before the target is subtracted.
inline VasReachReduction reduce_vas_reachability(const PetriNet& net, const NatVec& s_in, const NatVec& t_in,
                                                 bool sentinel) {
    net.validate();
    if (s_in.size() != net.dim || t_in.size() != net.dim) throw InputError("s, t and the net disagree on dimension");
    VasReachReduction r;
    r.sentinel = sentinel;
    r.n = net.dim + (sentinel ? 1 : 0);
    r.m = net.transitions.size();
    r.s = s_in;
    r.t = t_in;
    if (sentinel) {
        r.s.push_back(1);
        r.t.push_back(1);
    }
    for (const auto& tr : net.transitions) {
        std::vector<std::int64_t> v(r.n, 0);
        for (std::size_t j = 0; j < net.dim; ++j) v[j] = tr.plus[j] - tr.minus[j];
        r.displacements.push_back(std::move(v));
    }
    const std::size_t d = r.dim(), n = r.n, m = r.m;
    std::vector<std::string> names;
    for (std::size_t j = 0; j <= n; ++j) names.push_back("X" + std::to_string(j + 1));
    for (std::size_t i = 0; i < m + 2; ++i) names.push_back("A" + std::to_string(i + 1));
    Polyhedron pre(d), guard(d), update(2 * d);
    for (std::size_t j = 0; j < n; ++j) {
        pre.add_eq(unit(d, r.x(j)), Rational(r.s[j]));
        r.input.assignments[r.x(j)] = r.s[j];
    }
    for (std::size_t j = 0; j <= n; ++j) guard.add_le(unit(d, j, -1), 0);
    Vec sum(d, Rational(0));
    for (std::size_t i = 0; i < m + 2; ++i) {
        guard.add_le(unit(d, r.a(i), -1), 0);
        sum[r.a(i)] = 1;
    }
    guard.add_eq(sum, 1);
    // X'_j = X_j + sum v_i[j] A_i - t[j] A_{m+1}
    for (std::size_t j = 0; j < n; ++j) {
        Vec row(2 * d, Rational(0));
        row[d + r.x(j)] = 1;
        row[r.x(j)] = -1;
        for (std::size_t i = 0; i < m; ++i) row[r.a(i)] = -r.displacements[i][j];
        row[r.a(m)] = Rational(r.t[j]);
        update.add_eq(row, 0);
    }
    Vec psum(2 * d, Rational(0));
    for (std::size_t i = 0; i < m + 2; ++i) {
        update.add_le(unit(2 * d, d + r.a(i), -1), 0);
        psum[d + r.a(i)] = 1;
    }
    update.add_eq(psum, 1);
    // X'_{n+1} = X_{n+1} - sum X_j
    Vec dec(2 * d, Rational(0));
    dec[d + r.counter()] = 1;
    dec[r.counter()] = -1;
    for (std::size_t j = 0; j < n; ++j) dec[r.x(j)] = 1;
    update.add_eq(dec, 0);
    // A'_{m+2} >= A_{m+1} + A_{m+2}
    Vec stay(2 * d, Rational(0));
    stay[d + r.a(m + 1)] = -1;
    stay[r.a(m)] = 1;
    stay[r.a(m + 1)] = 1;
    update.add_le(stay, 0);
    r.loop = SlcpLoop(std::move(names), std::move(pre), std::move(guard), std::move(update), Interpretation::Integer);
    r.suggested = AffineFunction{Vec(d, Rational(0)), 0};
    r.suggested.coeffs[r.counter()] = 1;
    return r;
}

/// Projected transitions of the reachability loop (the counter X_{n+1} dropped), classified.
struct ReachDichotomy {
    std::size_t transitions = 0;
    std::size_t decreasing = 0; // sum of X_j at the source is positive
    std::optional<std::pair<State, State>> freeze; // locked phase (A_{m+2} = 1) with the counter unchanged
    std::optional<std::pair<State, State>> other_non_decreasing;
};

inline ReachDichotomy reach_dichotomy(const VasReachReduction& r, std::size_t cap = 100000) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < r.dim(); ++i)
        if (i != r.counter()) kept.push_back(i);
    auto g = explore_projected(r.loop, kept, cap);
    ReachDichotomy out;
    for (auto [a, b] : g.edges) {
        const State& x = g.states[a];
        const State& y = g.states[b];
        ++out.transitions;
        Rational sum = 0;
        for (std::size_t j = 0; j < r.n; ++j) sum += x[r.x(j)];
        if (sum >= 1) {
            ++out.decreasing;
            continue;
        }
        if (x[r.a(r.m + 1)] == 1) {
            if (!out.freeze) out.freeze = std::make_pair(x, y);
        } else if (!out.other_non_decreasing) {
            out.other_non_decreasing = std::make_pair(x, y);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear recurrence positivity as ranking-function verification

struct LrsInstance {
    std::size_t dim = 0;
    std::vector<std::vector<Integer>> matrix;
    std::vector<Integer> offset;
    std::vector<Integer> init;
    std::size_t track = 1; // 1-based

    void validate() const {
        if (dim == 0) throw InputError("recurrence dimension must be positive");
        if (matrix.size() != dim) throw InputError("matrix must have " + std::to_string(dim) + " rows");
        for (const auto& row : matrix)
            if (row.size() != dim) throw InputError("matrix rows must have " + std::to_string(dim) + " entries");
        if (offset.size() != dim || init.size() != dim) throw InputError("offset and initial vector need " + std::to_string(dim) + " entries");
        if (track < 1 || track > dim) throw InputError("tracked coordinate out of range");
    }

    std::vector<Integer> step(const std::vector<Integer>& x) const {
        std::vector<Integer> y(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] = offset[i];
            for (std::size_t j = 0; j < dim; ++j) y[i] += matrix[i][j] * x[j];
        }
        return y;
    }

    friend bool operator==(const LrsInstance&, const LrsInstance&) = default;
};

// .lrs format: "dim n", n lines "row: ...", "offset: ...", "init: ...", optional "track: k".
inline LrsInstance parse_lrs(std::string_view src) {
    LrsInstance I;
    bool have_dim = false, have_offset = false, have_init = false, have_track = false;
    auto ints = [](const std::vector<text::Token>& w, std::size_t line) {
        std::vector<Integer> v;
        for (std::size_t i = 1; i < w.size(); ++i) v.push_back(text::integer_at(w[i], line));
        return v;
    };
    for (const auto& ln : text::lines_of(src)) {
        auto w = text::words(ln);
        const std::string& key = w[0].text;
        if (key == "dim") {
            if (have_dim || w.size() != 2) throw ParseError(ln.number, 1, "expected a single 'dim n'");
            Integer d = text::integer_at(w[1], ln.number);
            if (d < 1 || d > 64) throw ParseError(ln.number, w[1].column, "dimension out of range");
            I.dim = d.convert_to<std::size_t>();
            have_dim = true;
            continue;
        }
        if (!have_dim) throw ParseError(ln.number, 1, "expected 'dim n' first");
        auto v = ints(w, ln.number);
        auto need = [&](std::size_t k) {
            if (v.size() != k)
                throw ParseError(ln.number, 1, "'" + key + "' needs " + std::to_string(k) + " entries");
        };
        if (key == "row:") {
            need(I.dim);
            if (I.matrix.size() == I.dim) throw ParseError(ln.number, 1, "too many rows");
            I.matrix.push_back(std::move(v));
        } else if (key == "offset:") {
            need(I.dim);
            if (have_offset) throw ParseError(ln.number, 1, "duplicate 'offset:'");
            I.offset = std::move(v);
            have_offset = true;
        } else if (key == "init:") {
            need(I.dim);
            if (have_init) throw ParseError(ln.number, 1, "duplicate 'init:'");
            I.init = std::move(v);
            have_init = true;
        } else if (key == "track:") {
            need(1);
            if (have_track) throw ParseError(ln.number, 1, "duplicate 'track:'");
            if (v[0] < 1 || v[0] > Integer(I.dim)) throw ParseError(ln.number, w[1].column, "tracked coordinate out of range");
            I.track = v[0].convert_to<std::size_t>();
            have_track = true;
        } else {
            throw ParseError(ln.number, w[0].column, "unknown key '" + key + "'");
        }
    }
    if (!have_dim) throw ParseError(1, 1, "missing 'dim n'");
    if (I.matrix.size() != I.dim) throw ParseError(1, 1, "expected " + std::to_string(I.dim) + " 'row:' lines");
    if (!have_offset) I.offset.assign(I.dim, 0);
    if (!have_init) throw ParseError(1, 1, "missing 'init:'");
    return I;
}

inline std::string emit_lrs(const LrsInstance& I) {
    auto line = [](const std::string& key, const std::vector<Integer>& v) {
        std::string out = key;
        for (const auto& x : v) out += " " + x.str();
        return out + "\n";
    };
    std::string out = "dim " + std::to_string(I.dim) + "\n";
    for (const auto& row : I.matrix) out += line("row:", row);
    out += line("offset:", I.offset);
    out += line("init:", I.init);
    out += "track: " + std::to_string(I.track) + "\n";
    return out;
}

inline LrsInstance load_lrs(const std::string& path) { return parse_lrs(text::read_file(path)); }

struct LrsReduction {
    SlcpLoop loop;
    PartialInput input;
    AffineFunction suggested;
};

/// Loop over x_1..x_n, x_{n+1}: x' = A x + a, x'_{n+1} = x_{n+1} - x_track, guard x_{n+1} >= 0.
inline LrsReduction reduce_lrs_to_verification(const LrsInstance& I) {
    I.validate();
    const std::size_t n = I.dim, d = n + 1;
    std::vector<std::string> names;
    for (std::size_t i = 0; i <= n; ++i) names.push_back("X" + std::to_string(i + 1));
    Polyhedron pre(d), guard(d), update(2 * d);
    PartialInput in;
    for (std::size_t i = 0; i < n; ++i) {
        pre.add_eq(unit(d, i), Rational(I.init[i]));
        in.assignments[i] = Rational(I.init[i]);
    }
    guard.add_le(unit(d, n, -1), 0);
    for (std::size_t i = 0; i < n; ++i) {
        Vec row(2 * d, Rational(0));
        row[d + i] = 1;
        for (std::size_t j = 0; j < n; ++j) row[j] = Rational(-I.matrix[i][j]);
        update.add_eq(row, Rational(I.offset[i]));
    }
    Vec last(2 * d, Rational(0));
    last[d + n] = 1;
    last[n] = -1;
    last[I.track - 1] = 1;
    update.add_eq(last, 0);
    AffineFunction f{Vec(d, Rational(0)), 0};
    f.coeffs[n] = 1;
    return {SlcpLoop(std::move(names), std::move(pre), std::move(guard), std::move(update), Interpretation::Integer),
            std::move(in), std::move(f)};
}

/// Bounded-simulation setup for `horizon` steps: a box holding the first states of the recurrence
/// (from the entry sizes alone) and the input with x_{n+1} large enough to stay in the guard.
struct LrsSimulation {
    Box box;
    PartialInput input;
};

inline LrsSimulation lrs_simulation(const LrsInstance& I, const PartialInput& in, std::size_t horizon) {
    Integer amax = 0, off = 0, start = 0;
    for (const auto& row : I.matrix)
        for (const auto& v : row) amax = std::max(amax, Integer(abs(v)));
    for (const auto& v : I.offset) off = std::max(off, Integer(abs(v)));
    for (const auto& v : I.init) start = std::max(start, Integer(abs(v)));
    // |x_{k+1}| <= n * amax * |x_k| + off
    Integer bound = start, total = 0;
    for (std::size_t k = 0; k <= horizon; ++k) {
        total += bound;
        bound = Integer(I.dim) * amax * bound + off;
    }
    LrsSimulation sim{Box(I.dim + 1), in};
    for (std::size_t i = 0; i < I.dim; ++i) {
        sim.box[i].lo = -bound;
        sim.box[i].hi = bound;
    }
    sim.box[I.dim].lo = 0;
    sim.box[I.dim].hi = 2 * total;
    sim.input.assignments[I.dim] = Rational(total);
    return sim;
}

} // namespace lrfkit
