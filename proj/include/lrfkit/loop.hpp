#pragma once

#include "integer.hpp"
#include "text.hpp"

#include <map>
#include <set>

namespace lrfkit {

enum class Interpretation { Integer, Rational };

using State = Vec;

/// Single-path linear-constraint loop: pre(x); while guard(x) do update(x, x').
class SlcpLoop {
public:
    SlcpLoop() = default;
    SlcpLoop(std::vector<std::string> names, Polyhedron pre, Polyhedron guard, Polyhedron update,
             Interpretation interp)
        : names_(std::move(names)), interp_(interp) {
        const std::size_t n = names_.size();
        std::set<std::string> seen(names_.begin(), names_.end());
        if (seen.size() != n) throw InputError("variable names must be distinct");
        if (pre.dim() != n || guard.dim() != n || update.dim() != 2 * n)
            throw InputError("loop dimensions inconsistent: expected " + std::to_string(n) + ", " + std::to_string(n) +
                             ", " + std::to_string(2 * n));
        if (interp == Interpretation::Integer) {
            pre = pre.integer_tightened();
            guard = guard.integer_tightened();
            update = update.integer_tightened();
        }
        pre_ = std::move(pre);
        guard_ = std::move(guard);
        update_ = std::move(update);
    }

    std::size_t n() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const Polyhedron& pre() const { return pre_; }
    const Polyhedron& guard() const { return guard_; }
    const Polyhedron& update() const { return update_; }
    Interpretation interp() const { return interp_; }
    bool integer() const { return interp_ == Interpretation::Integer; }

    std::size_t index_of(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw InputError("unknown variable '" + name + "'");
        return static_cast<std::size_t>(it - names_.begin());
    }

    /// guard on x together with update on (x, x'), over 2n variables.
    Polyhedron transition_polyhedron() const {
        Polyhedron t = guard_.embedded(2 * n(), 0);
        t.append(update_);
        return t;
    }

    friend bool operator==(const SlcpLoop&, const SlcpLoop&) = default;

private:
    std::vector<std::string> names_;
    Polyhedron pre_, guard_, update_;
    Interpretation interp_ = Interpretation::Integer;
};

/// Some variables fixed to values, the rest free.
struct PartialInput {
    std::map<std::size_t, Rational> assignments;
};

inline void check_dim(const SlcpLoop& L, std::span<const Rational> s) {
    if (s.size() != L.n())
        throw InputError("state has dimension " + std::to_string(s.size()) + ", loop has " + std::to_string(L.n()));
}

inline bool is_initial(const SlcpLoop& L, const State& s) {
    check_dim(L, s);
    if (L.integer() && !all_integral(s)) return false;
    return L.pre().contains(s);
}

inline Vec concat(std::span<const Rational> a, std::span<const Rational> b) {
    Vec v(a.begin(), a.end());
    v.insert(v.end(), b.begin(), b.end());
    return v;
}

inline bool is_transition(const SlcpLoop& L, const State& x, const State& xp) {
    check_dim(L, x);
    check_dim(L, xp);
    if (L.integer() && (!all_integral(x) || !all_integral(xp))) return false;
    return L.guard().contains(x) && L.update().contains(concat(x, xp));
}

/// Update polyhedron with x folded in: constraints over x' only.
inline Polyhedron successor_polyhedron(const SlcpLoop& L, const State& x) {
    std::vector<std::optional<Rational>> fixed(2 * L.n());
    for (std::size_t i = 0; i < L.n(); ++i) fixed[i] = x[i];
    return L.update().restricted(fixed);
}

/// All x' inside box with is_transition(L, x, x'), sorted lexicographically.
inline std::vector<State> successors_bounded(const SlcpLoop& L, const State& x, const Box& box) {
    if (!L.integer()) throw InputError("successors_bounded requires the integer interpretation");
    check_dim(L, x);
    if (box.size() != L.n()) throw InputError("box dimension mismatch");
    for (const auto& b : box)
        if (!b.lo || !b.hi) throw InputError("box must be finite on every coordinate");
    if (!all_integral(x) || !L.guard().contains(x)) return {};
    return enumerate_integer_points(successor_polyhedron(L, x), box);
}

inline bool in_box(const Box& box, std::span<const Rational> s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (box[i].lo && s[i] < Rational(*box[i].lo)) return false;
        if (box[i].hi && s[i] > Rational(*box[i].hi)) return false;
    }
    return true;
}

struct Lasso {
    std::vector<State> stem;  // from the start state up to, excluding, the first cycle state
    std::vector<State> cycle; // s_1 .. s_k with an implied edge s_k -> s_1
};

enum class ExploreOutcome { Halted, CycleFound, BudgetExceeded };

struct ExploreOptions {
    std::size_t state_budget = 100000;
    bool stop_at_first_cycle = true;
};

struct ExplorationReport {
    ExploreOutcome outcome = ExploreOutcome::Halted;
    std::optional<Lasso> lasso;
    std::size_t longest_run = 0; // transitions on the longest explored acyclic run
    bool box_exceeded = false;   // some transition left the box (runs through it were not followed)
    std::vector<State> visited;  // sorted
};

/// Depth-first exploration of all runs from s0 with successors restricted to box.
/// max_steps bounds the run length; longer runs count as BudgetExceeded.
inline ExplorationReport explore(const SlcpLoop& L, const State& s0, const Box& box, std::size_t max_steps,
                                 ExploreOptions opts = {}) {
    if (max_steps == 0 || opts.state_budget == 0) throw InputError("exploration budget must be positive");
    ExplorationReport rep;
    if (!L.integer()) throw InputError("exploration requires the integer interpretation");

    // An unrestricted successor check: does some successor leave the box?
    auto leaves_box = [&](const State& x) {
        auto bounds = integer_bounds(successor_polyhedron(L, x), full_box(L.n()));
        if (!bounds) return false;
        for (std::size_t i = 0; i < L.n(); ++i) {
            const auto& b = (*bounds)[i];
            if (!b.lo || !b.hi) return true;
            if (box[i].lo && *b.lo < *box[i].lo) return true;
            if (box[i].hi && *b.hi > *box[i].hi) return true;
        }
        return false;
    };

    enum Color { Grey, Black };
    std::map<State, Color> color;
    std::map<State, std::size_t> depth_done; // longest run from a finished state
    struct Frame {
        State s;
        std::vector<State> succ;
        std::size_t next = 0;
        std::size_t best = 0;
    };
    std::vector<Frame> stack;
    auto push = [&](const State& s) {
        Frame f{s, {}, 0, 0};
        if (L.guard().contains(s)) {
            if (leaves_box(s)) rep.box_exceeded = true;
            f.succ = successors_bounded(L, s, box);
            std::reverse(f.succ.begin(), f.succ.end());
        }
        color[s] = Grey;
        stack.push_back(std::move(f));
    };
    push(s0);
    bool budget_hit = false;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next == top.succ.size()) {
            color[top.s] = Black;
            depth_done[top.s] = top.best;
            std::size_t d = top.best;
            stack.pop_back();
            if (!stack.empty()) stack.back().best = std::max(stack.back().best, d + 1);
            else rep.longest_run = std::max(rep.longest_run, d);
            continue;
        }
        State nxt = top.succ[top.next++];
        auto it = color.find(nxt);
        if (it != color.end()) {
            if (it->second == Grey) {
                if (!rep.lasso) {
                    Lasso l;
                    std::size_t k = 0;
                    while (stack[k].s != nxt) l.stem.push_back(stack[k++].s);
                    for (; k < stack.size(); ++k) l.cycle.push_back(stack[k].s);
                    rep.lasso = std::move(l);
                }
                if (opts.stop_at_first_cycle) break;
            } else {
                top.best = std::max(top.best, depth_done[nxt] + 1);
            }
            continue;
        }
        if (stack.size() >= max_steps + 1 || color.size() >= opts.state_budget) {
            budget_hit = true;
            if (opts.stop_at_first_cycle) continue;
            continue;
        }
        push(nxt);
    }
    rep.outcome = rep.lasso ? ExploreOutcome::CycleFound
                            : (budget_hit ? ExploreOutcome::BudgetExceeded : ExploreOutcome::Halted);
    for (const auto& [s, c] : color) rep.visited.push_back(s);
    return rep;
}

/// A lasso is genuine when every consecutive pair, including the closing edge, is a transition.
inline bool check_lasso(const SlcpLoop& L, const Lasso& l) {
    if (l.cycle.empty()) return false;
    std::vector<State> seq = l.stem;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    seq.push_back(l.cycle.front());
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!is_transition(L, seq[i], seq[i + 1])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// .slcp format

inline SlcpLoop parse_loop(std::string_view src) {
    auto lines = text::lines_of(src);
    std::optional<std::vector<std::string>> names;
    Interpretation interp = Interpretation::Integer;
    std::string section;
    struct Pending {
        std::string section;
        std::string body;
        std::size_t line, col;
    };
    std::vector<Pending> pending;
    std::size_t vars_line = 0;
    std::set<std::string> seen_sections;
    for (const auto& ln : lines) {
        auto h = text::section_header(ln.content, {"vars", "interp", "pre", "guard", "update"});
        std::string body = ln.content;
        std::size_t col = 1;
        if (h) {
            section = h->first;
            if (!seen_sections.insert(section).second)
                throw ParseError(ln.number, 1, "duplicate section '" + section + "'");
            body = h->second;
            col = ln.content.size() - body.size() + 1;
            if (section == "vars") {
                names = text::parse_names(body, ln.number, col);
                vars_line = ln.number;
                continue;
            }
            if (section == "interp") {
                auto w = text::words({ln.number, body});
                if (w.size() != 1 || (w[0].text != "int" && w[0].text != "rat"))
                    throw ParseError(ln.number, col, "interp must be 'int' or 'rat'");
                interp = w[0].text == "int" ? Interpretation::Integer : Interpretation::Rational;
                continue;
            }
        } else if (section.empty() || section == "vars" || section == "interp") {
            throw ParseError(ln.number, 1, "text outside of a constraint section");
        }
        pending.push_back({section, body, ln.number, col});
    }
    if (!names) throw ParseError(lines.empty() ? 1 : lines.front().number, 1, "missing 'vars:' section");
    if (names->empty()) throw ParseError(vars_line, 1, "a loop needs at least one variable");
    const std::size_t n = names->size();
    Polyhedron pre(n), guard(n), update(2 * n);
    text::ConstraintParser plain(*names, false), primed(*names, true);
    for (const auto& p : pending) {
        if (p.section == "pre") plain.parse_into(p.body, p.line, p.col, pre);
        else if (p.section == "guard") plain.parse_into(p.body, p.line, p.col, guard);
        else primed.parse_into(p.body, p.line, p.col, update);
    }
    return SlcpLoop(*names, std::move(pre), std::move(guard), std::move(update), interp);
}

inline std::string emit_loop(const SlcpLoop& L) {
    std::string out = "vars:";
    for (const auto& n : L.names()) out += " " + n;
    out += "\ninterp: ";
    out += L.integer() ? "int" : "rat";
    out += "\npre:\n" + text::format_rows(L.pre(), L.names());
    out += "guard:\n" + text::format_rows(L.guard(), L.names());
    out += "update:\n" + text::format_rows(L.update(), L.names());
    return out;
}

inline SlcpLoop load_loop(const std::string& path) { return parse_loop(text::read_file(path)); }

/// Reads the precondition as a partial input when it only fixes variables (x = d rows, in pairs).
inline std::optional<PartialInput> as_partial_input(const SlcpLoop& L) {
    PartialInput in;
    const auto& rows = L.pre().rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::size_t nz = 0, idx = 0;
        for (std::size_t j = 0; j < r.coeffs.size(); ++j)
            if (!r.coeffs[j].is_zero()) ++nz, idx = j;
        if (nz != 1) return std::nullopt;
        Rational v = r.bound / r.coeffs[idx];
        // must be paired with the opposite row somewhere
        bool paired = false;
        for (const auto& q : rows) {
            std::size_t qnz = 0, qidx = 0;
            for (std::size_t j = 0; j < q.coeffs.size(); ++j)
                if (!q.coeffs[j].is_zero()) ++qnz, qidx = j;
            if (qnz == 1 && qidx == idx && (q.coeffs[idx] > 0) != (r.coeffs[idx] > 0) && q.bound / q.coeffs[idx] == v)
                paired = true;
        }
        if (!paired) return std::nullopt;
        in.assignments[idx] = v;
    }
    return in;
}

/// Precondition rows for a partial input.
inline Polyhedron partial_input_polyhedron(std::size_t n, const PartialInput& in) {
    Polyhedron p(n);
    for (const auto& [i, v] : in.assignments) {
        if (i >= n) throw InputError("partial input index out of range");
        p.add_eq(unit(n, i), v);
    }
    return p;
}

} // namespace lrfkit
