#include "lrfkit/lrfkit.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>

using namespace lrfkit;

namespace {

enum class Format { Plain, Record };

/// Result of one command: verdict, a one-line summary and key/value payload.
struct Output {
    std::string verdict;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> fields;
    int code = 0;

    void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
};

void print(const Output& out, Format fmt) {
    if (fmt == Format::Record) {
        std::cout << "verdict: " << out.verdict << "\n";
        std::cout << "summary: " << out.summary << "\n";
        for (const auto& [k, v] : out.fields) {
            std::size_t pos = 0;
            do {
                std::size_t end = v.find('\n', pos);
                if (end == std::string::npos) end = v.size();
                std::cout << k << ": " << v.substr(pos, end - pos) << "\n";
                pos = end + 1;
            } while (pos < v.size());
        }
        return;
    }
    std::cout << out.summary << "\n";
    for (const auto& [k, v] : out.fields) {
        if (v.find('\n') == std::string::npos) {
            std::cout << "  " << k << ": " << v << "\n";
            continue;
        }
        std::cout << "  " << k << ":\n";
        std::size_t pos = 0;
        while (pos < v.size()) {
            std::size_t end = v.find('\n', pos);
            if (end == std::string::npos) end = v.size();
            std::cout << "    " << v.substr(pos, end - pos) << "\n";
            pos = end + 1;
        }
    }
}

std::string extension(const std::string& path) { return std::filesystem::path(path).extension().string(); }

std::string format_state(const std::vector<std::string>& names, const State& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + names[i] + "=" + to_string(s[i]);
    return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string format_fixed(const SlcpLoop& L, const Piece& p) {
    const std::size_t n = L.n();
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < p.fixed.size(); ++i)
        if (p.fixed[i]) parts.push_back(L.names()[i % n] + (i >= n ? "'" : "") + "=" + to_string(*p.fixed[i]));
    return parts.empty() ? "-" : join(parts, ",");
}

std::string format_proof(const SlcpLoop& L, const Proof& p) {
    std::string s = p.label + " piece[" + format_fixed(L, p.piece) + "] ";
    if (p.farkas) s += std::string(p.vacuous ? "empty " : "") + "lambda=" + to_string(p.farkas->multipliers, " ");
    else if (p.tree) s += "branch-and-bound leaves=" + std::to_string(p.tree->leaves());
    return s;
}

void add_proofs(Output& out, const SlcpLoop& L, const std::vector<Proof>& proofs) {
    out.add("pieces-checked", std::to_string(proofs.size()));
    for (const auto& p : proofs) out.add("certificate", format_proof(L, p));
}

/// "lo:hi" for every variable, with "X=lo:hi" overrides.
Box parse_box(const std::string& spec, const std::vector<std::string>& names) {
    Box box(names.size());
    std::stringstream ss(spec);
    std::string item;
    auto range = [&](const std::string& r) {
        auto colon = r.find(':');
        if (colon == std::string::npos) throw InputError("box range '" + r + "' must be lo:hi");
        Rational lo = parse_rational(r.substr(0, colon)), hi = parse_rational(r.substr(colon + 1));
        if (!is_integral(lo) || !is_integral(hi) || lo > hi) throw InputError("box range '" + r + "' is not an integer interval");
        return IntBound{numer(lo), numer(hi)};
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            auto b = range(item);
            for (auto& x : box) x = b;
        } else {
            std::string name = item.substr(0, eq);
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw InputError("unknown variable '" + name + "' in box");
            box[static_cast<std::size_t>(it - names.begin())] = range(item.substr(eq + 1));
        }
    }
    for (std::size_t i = 0; i < box.size(); ++i)
        if (!box[i].lo || !box[i].hi) throw InputError("box does not bound variable '" + names[i] + "'");
    return box;
}

/// "X=1,Y=2" on top of the precondition's fixed values.
PartialInput parse_assignment(const std::string& spec, const SlcpLoop& L) {
    auto in = as_partial_input(L);
    if (!in) throw InputError("precondition does not only fix variables; cannot form a partial input");
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("expected name=value in '" + item + "'");
        in->assignments[L.index_of(item.substr(0, eq))] = parse_rational(item.substr(eq + 1));
    }
    return *in;
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Vacuous: return "vacuously-yes";
    case Verdict::Unknown: return "unknown";
    case Verdict::InvariantInvalid: return "invariant-invalid";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Invariants named on the command line

struct NamedInvariant {
    std::optional<Polyhedron> poly;
    std::optional<DownwardClosedSet> dcs;
    std::string description;
};

NamedInvariant load_invariant(const SlcpLoop& L, const std::string& spec, Output& out) {
    NamedInvariant inv;
    if (spec == "hull") {
        auto h = hull_invariant(L);
        inv.poly = h.poly;
        inv.description = "convex hull of " + std::to_string(h.integer_points.size()) + " reachable projected states";
        out.add("hull-facets", std::to_string(h.poly.size()));
        out.add("hull-exact", h.exact ? "yes" : "no");
        out.add("invariant", text::format_rows(h.poly, L.names(), ""));
    } else if (spec == "km") {
        auto dec = decode_petri_loop(L);
        auto in = as_partial_input(L);
        if (!dec || !in) throw InputError("'km' needs a loop in vector-addition form with a fixed initial marking");
        NatVec s0(dec->layout.n);
        for (std::size_t i = 0; i < dec->layout.n; ++i) {
            auto it = in->assignments.find(dec->layout.x(i));
            if (it == in->assignments.end()) throw InputError("initial marking leaves " + L.names()[i] + " free");
            s0[i] = numer(it->second).convert_to<std::int64_t>();
        }
        auto km = karp_miller(dec->net, s0);
        inv.dcs = lift_to_loop(km.set, dec->layout);
        inv.description = "Karp-Miller coverability set (" + std::to_string(km.set.generators().size()) + " generators)";
        out.add("invariant", emit_dcs(*inv.dcs));
    } else if (extension(spec) == ".poly") {
        inv.poly = poly_for_loop(L, parse_poly(text::read_file(spec)));
        inv.description = spec;
    } else if (extension(spec) == ".dcs") {
        inv.dcs = parse_dcs(text::read_file(spec));
        inv.description = spec;
    } else {
        throw InputError("invariant must be 'hull', 'km', a .poly file or a .dcs file");
    }
    return inv;
}

void add_invariant_report(Output& out, const SlcpLoop& L, const InvariantReport& rep) {
    out.add("initiation", rep.initiation ? "pass" : "fail");
    if (rep.initiation_witness) out.add("initiation-witness", format_state(L.names(), *rep.initiation_witness));
    out.add("consecution", rep.initiation ? (rep.consecution ? "pass" : "fail") : "not-checked");
    if (rep.consecution_witness) {
        out.add("consecution-x", format_state(L.names(), rep.consecution_witness->first));
        out.add("consecution-x'", format_state(L.names(), rep.consecution_witness->second));
    }
    if (!rep.note.empty()) out.add("note", rep.note);
}

std::vector<Piece> invariant_pieces(const SlcpLoop& L, const NamedInvariant& inv) {
    if (inv.poly) return transition_pieces(L, L.integer() ? inv.poly->integer_tightened() : *inv.poly);
    std::vector<Piece> pieces;
    for (const auto& g : inv.dcs->generators()) {
        auto ps = transition_pieces(L, generator_box(g));
        pieces.insert(pieces.end(), ps.begin(), ps.end());
    }
    return pieces;
}

InvariantReport check_invariant(const SlcpLoop& L, const NamedInvariant& inv) {
    return inv.poly ? check_polyhedral(L, *inv.poly) : check_downward(L, *inv.dcs);
}

// ---------------------------------------------------------------------------
// Commands

Output cmd_parse(const std::string& path) {
    Output out;
    const std::string ext = extension(path), src = text::read_file(path);
    std::string canon;
    if (ext == ".slcp") canon = emit_loop(parse_loop(src));
    else if (ext == ".bp") canon = emit_bp(parse_bp(src));
    else if (ext == ".vas") canon = emit_net(parse_net(src));
    else if (ext == ".lrs") canon = emit_lrs(parse_lrs(src));
    else if (ext == ".poly") canon = emit_poly(parse_poly(src));
    else if (ext == ".dcs") canon = emit_dcs(parse_dcs(src));
    else throw InputError("unknown file kind '" + ext + "'");
    out.verdict = "ok";
    out.summary = "parsed " + path;
    out.add("canonical", canon.substr(0, canon.size() - 1));
    return out;
}

Output cmd_synth(const std::string& path, const std::string& inv_spec) {
    SlcpLoop L = load_loop(path);
    Output out;
    SynthResult r;
    if (inv_spec.empty()) {
        r = synth_universal(L);
    } else {
        auto inv = load_invariant(L, inv_spec, out);
        auto rep = check_invariant(L, inv);
        add_invariant_report(out, L, rep);
        if (!rep.valid()) {
            out.verdict = rep.unknown ? "unknown" : "invariant-invalid";
            out.summary = "invariant " + inv.description + (rep.unknown ? " could not be checked" : " is not inductive");
            out.code = 2;
            return out;
        }
        r = synth_over(L, invariant_pieces(L, inv));
    }
    switch (r.kind) {
    case SynthKind::Found:
        out.verdict = "found";
        out.summary = "found ranking function " + format_affine(*r.f, L.names());
        out.add("rf", format_affine(*r.f, L.names()));
        out.add("evidence", evidence_kind(L, r.verification));
        add_proofs(out, L, r.verification.proofs);
        break;
    case SynthKind::NoneExists:
        out.verdict = "none-exists";
        out.summary = L.integer() ? "no linear ranking function with a rational certificate"
                                  : "no linear ranking function exists";
        break;
    case SynthKind::VacuouslyAny:
        out.verdict = "vacuously-any";
        out.summary = "transition set is empty; every function ranks it";
        break;
    }
    return out;
}

Output cmd_verify(const std::string& path, const std::string& rf, const std::string& inv_spec) {
    SlcpLoop L = load_loop(path);
    AffineFunction f = parse_affine(rf, L.names());
    Output out;
    VerifyResult r;
    if (inv_spec.empty()) {
        r = verify_universal(L, f);
    } else {
        auto inv = load_invariant(L, inv_spec, out);
        auto rep = check_invariant(L, inv);
        add_invariant_report(out, L, rep);
        if (!rep.valid()) {
            out.verdict = rep.unknown ? "unknown" : "invariant-invalid";
            out.summary = "invariant " + inv.description + (rep.unknown ? " could not be checked" : " is not inductive");
            out.code = 2;
            return out;
        }
        r = verify_pieces(L, f, invariant_pieces(L, inv));
    }
    out.verdict = verdict_name(r.verdict);
    const std::string fs = format_affine(f, L.names());
    switch (r.verdict) {
    case Verdict::Yes:
    case Verdict::Vacuous:
        out.summary = fs + " is a linear ranking function" + (r.verdict == Verdict::Vacuous ? " (vacuously)" : "");
        out.add("evidence", evidence_kind(L, r));
        add_proofs(out, L, r.proofs);
        break;
    case Verdict::No:
        out.summary = fs + " is not a linear ranking function";
        out.add("violated", r.counterexample->violated);
        out.add("x", format_state(L.names(), r.counterexample->x));
        out.add("x'", format_state(L.names(), r.counterexample->xp));
        break;
    default:
        out.summary = "undecided: " + r.note;
        out.code = 2;
    }
    return out;
}

Output cmd_invariant_check(const std::string& path, const std::string& inv_spec) {
    SlcpLoop L = load_loop(path);
    Output out;
    auto inv = load_invariant(L, inv_spec, out);
    auto rep = check_invariant(L, inv);
    add_invariant_report(out, L, rep);
    if (rep.unknown) {
        out.verdict = "unknown";
        out.summary = "invariant check undecided";
        out.code = 2;
    } else {
        out.verdict = rep.valid() ? "valid" : "invalid";
        out.summary = "invariant " + inv.description + (rep.valid() ? " is inductive" : " is not inductive");
    }
    return out;
}

Gadget parse_gadget(const std::string& g) {
    if (g == "none") return Gadget::None;
    if (g == "y") return Gadget::RankY;
    if (g == "y-term") return Gadget::RankYTerminating;
    throw InputError("gadget must be none, y or y-term");
}

void print_reduced(const SlcpLoop& L, const std::optional<AffineFunction>& f) {
    if (f) std::cout << "# suggested ranking function: " << format_affine(*f, L.names()) << "\n";
    std::cout << emit_loop(L);
}

Output cmd_bp_halts(const std::string& path) {
    auto P = load_bp(path);
    auto run = bp_run(P);
    Output out;
    out.verdict = to_string(run.outcome);
    out.summary = "program " + to_string(run.outcome);
    out.add("steps", std::to_string(run.states.size() - 1));
    const auto& last = run.states.back();
    std::string vals;
    for (auto v : last.vals) vals += std::to_string(v);
    out.add("final-state", "pc=" + std::to_string(last.pc) + " X=" + vals);
    return out;
}

Output cmd_vas_oracle(const std::string& path, const std::string& query, const std::string& init,
                      const std::string& target, std::size_t coord, std::size_t cap) {
    auto net = load_net(path);
    net.validate();
    VasQuery q;
    if (query == "cover") q.kind = QueryKind::Cover;
    else if (query == "reach") q.kind = QueryKind::Reach;
    else if (query == "positive") q.kind = QueryKind::Positive;
    else throw InputError("query must be cover, reach or positive");
    NatVec s0 = parse_natvec(init, net.dim);
    if (q.kind == QueryKind::Positive) {
        if (net.dim == 0) throw InputError("net has no places");
        std::size_t c = coord ? coord : net.dim;
        if (c < 1 || c > net.dim) throw InputError("--coord must be in 1.." + std::to_string(net.dim));
        q.coord = c - 1;
    } else {
        if (target.empty()) throw InputError("--target is required for cover and reach");
        q.target = parse_natvec(target, net.dim);
    }
    auto r = vas_bfs(net, s0, q, cap ? cap : default_state_cap());
    Output out;
    out.add("explored", std::to_string(r.explored));
    switch (r.answer) {
    case OracleAnswer::Yes: {
        out.verdict = "yes";
        out.summary = "query holds after " + std::to_string(r.path.size()) + " steps";
        std::vector<std::string> p, s;
        for (auto k : r.path) p.push_back("t" + std::to_string(k + 1));
        for (const auto& x : r.states) s.push_back(format_natvec(x));
        out.add("path", p.empty() ? "-" : join(p, " "));
        out.add("states", join(s, " "));
        break;
    }
    case OracleAnswer::No:
        out.verdict = "no";
        out.summary = "query fails on all reachable states";
        break;
    case OracleAnswer::Inconclusive:
        out.verdict = "inconclusive";
        out.summary = "state cap reached";
        out.code = 2;
        break;
    }
    return out;
}

Output cmd_km(const std::string& path, const std::string& init) {
    auto net = load_net(path);
    net.validate();
    auto km = karp_miller(net, parse_natvec(init, net.dim));
    Output out;
    out.verdict = "ok";
    out.summary = "coverability set with " + std::to_string(km.set.generators().size()) + " generators";
    out.add("nodes", std::to_string(km.nodes));
    std::string g = emit_dcs(km.set);
    out.add("dcs", g.substr(0, g.size() - 1));
    return out;
}

Output cmd_simulate(const std::string& path, const std::string& init, const std::string& box_spec, std::size_t steps,
                    std::size_t samples, std::uint64_t seed) {
    SlcpLoop L = load_loop(path);
    if (box_spec.empty()) throw InputError("--box is required");
    Box box = parse_box(box_spec, L.names());
    PartialInput in = parse_assignment(init, L);
    std::vector<State> starts;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < L.n(); ++i)
        if (!in.assignments.count(i)) free.push_back(i);
    if (!free.empty() && samples == 0)
        throw InputError("variable '" + L.names()[free[0]] + "' has no initial value; give it in --init or use --samples");
    std::mt19937_64 rng(seed);
    const std::size_t count = free.empty() ? 1 : samples;
    for (std::size_t k = 0; k < count; ++k) {
        State s(L.n(), Rational(0));
        for (const auto& [i, v] : in.assignments) s[i] = v;
        for (auto i : free) {
            std::int64_t lo = box[i].lo->convert_to<std::int64_t>(), hi = box[i].hi->convert_to<std::int64_t>();
            s[i] = std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
        }
        starts.push_back(std::move(s));
    }
    Output out;
    bool any_cycle = false, any_budget = false;
    for (const auto& s0 : starts) {
        const std::string head = format_state(L.names(), s0);
        if (!is_initial(L, s0)) {
            out.add("start", head + " not-initial");
            continue;
        }
        auto rep = explore(L, s0, box, steps);
        std::string what = rep.outcome == ExploreOutcome::Halted      ? "halted"
                           : rep.outcome == ExploreOutcome::CycleFound ? "cycle"
                                                                       : "budget-exceeded";
        out.add("start", head + " " + what + " longest-run=" + std::to_string(rep.longest_run) +
                             " visited=" + std::to_string(rep.visited.size()) +
                             (rep.box_exceeded ? " box-exceeded" : ""));
        if (rep.lasso) {
            any_cycle = true;
            std::vector<std::string> st, cy;
            for (const auto& x : rep.lasso->stem) st.push_back(format_state(L.names(), x));
            for (const auto& x : rep.lasso->cycle) cy.push_back(format_state(L.names(), x));
            out.add("stem", st.empty() ? "-" : join(st, " ; "));
            out.add("cycle", join(cy, " ; "));
        }
        if (rep.outcome == ExploreOutcome::BudgetExceeded || rep.box_exceeded) any_budget = true;
    }
    if (any_cycle) {
        out.verdict = "cycle";
        out.summary = "found a reachable cycle (no ranking function of any kind)";
    } else if (any_budget) {
        out.verdict = "unknown";
        out.summary = "exploration incomplete within the box and step bound";
        out.code = 2;
    } else {
        out.verdict = "halted";
        out.summary = "all explored runs halt";
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lrfkit: linear ranking functions for single-path constraint loops"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string fmt = "plain";
    std::uint64_t seed = 0;
    app.add_option("--format", fmt, "Output format")->check(CLI::IsMember({"plain", "record"}));
    app.add_option("--seed", seed, "Seed for sampled instantiations");

    std::string file, rf, inv, gadget = "none", mode, init, target, query, box;
    std::size_t coord = 0, cap = 0, steps = 1000, samples = 0;
    bool sentinel = false;

    auto* parse = app.add_subcommand("parse", "Parse a file and print its canonical form");
    parse->add_option("file", file)->required();

    auto* synth = app.add_subcommand("synth", "Synthesize a linear ranking function");
    synth->add_option("file", file)->required();
    synth->add_option("--invariant", inv, "hull, km, or a .poly/.dcs file");

    auto* verify = app.add_subcommand("verify", "Verify a candidate ranking function");
    verify->add_option("file", file)->required();
    verify->add_option("--rf", rf, "Candidate, e.g. X:1,Y:-1,3")->required();
    verify->add_option("--invariant", inv, "hull, km, or a .poly/.dcs file");

    auto* invcheck = app.add_subcommand("invariant-check", "Check initiation and consecution of an invariant");
    invcheck->add_option("file", file)->required();
    invcheck->add_option("--invariant", inv, "hull, km, or a .poly/.dcs file")->required();

    auto* reduce = app.add_subcommand("reduce", "Compile an instance into a loop");
    reduce->require_subcommand(1);
    auto* bool2loop = reduce->add_subcommand("bool2loop", "Boolean program to loop");
    bool2loop->add_option("file", file)->required();
    bool2loop->add_option("--gadget", gadget, "none, y or y-term")->check(CLI::IsMember({"none", "y", "y-term"}));
    auto* vas2loop = reduce->add_subcommand("vas2loop", "Petri net / VAS to loop");
    vas2loop->add_option("file", file)->required();
    vas2loop->add_option("--mode", mode)->required()->check(CLI::IsMember({"positivity", "reachability"}));
    vas2loop->add_option("--init", init, "Initial vector")->required();
    vas2loop->add_option("--target", target, "Target vector (reachability)");
    vas2loop->add_flag("--sentinel", sentinel, "Append a sentinel coordinate so no run meets the zero vector");
    auto* lrs2verif = reduce->add_subcommand("lrs2verif", "Linear recurrence to ranking-function verification");
    lrs2verif->add_option("file", file)->required();

    auto* oracle = app.add_subcommand("oracle", "Brute-force oracles");
    oracle->require_subcommand(1);
    auto* bphalts = oracle->add_subcommand("bp-halts", "Decide halting of a Boolean program");
    bphalts->add_option("file", file)->required();
    auto* vas = oracle->add_subcommand("vas", "Breadth-first search on a net");
    vas->add_option("file", file)->required();
    vas->add_option("--query", query)->required()->check(CLI::IsMember({"cover", "reach", "positive"}));
    vas->add_option("--init", init)->required();
    vas->add_option("--target", target);
    vas->add_option("--coord", coord, "Coordinate for positive (1-based, default last)");
    vas->add_option("--cap", cap, "State cap (default from LRFKIT_STATE_CAP or 1000000)");

    auto* simulate = app.add_subcommand("simulate", "Bounded exploration of all runs");
    simulate->add_option("file", file)->required();
    simulate->add_option("--init", init, "Values for variables, e.g. X=1,Y=2");
    simulate->add_option("--box", box, "lo:hi for all variables, with X=lo:hi overrides")->required();
    simulate->add_option("--steps", steps, "Maximal run length");
    simulate->add_option("--samples", samples, "Random instantiations of free variables");

    auto* km = app.add_subcommand("km", "Karp-Miller coverability set");
    km->add_option("file", file)->required();
    km->add_option("--init", init)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const Format format = fmt == "record" ? Format::Record : Format::Plain;
    try {
        Output out;
        if (*parse) out = cmd_parse(file);
        else if (*synth) out = cmd_synth(file, inv);
        else if (*verify) out = cmd_verify(file, rf, inv);
        else if (*invcheck) out = cmd_invariant_check(file, inv);
        else if (*bool2loop) {
            auto red = reduce_bool_to_loop(load_bp(file), parse_gadget(gadget));
            print_reduced(red.loop, red.suggested);
            return 0;
        } else if (*vas2loop) {
            auto net = load_net(file);
            net.validate();
            NatVec s0 = parse_natvec(init, net.dim);
            if (mode == "positivity") {
                auto red = reduce_vas_positivity(net, s0);
                print_reduced(red.loop, red.suggested);
            } else {
                if (target.empty()) throw InputError("--target is required for reachability");
                if (!sentinel)
                    std::cerr << "warning: assuming no run from the initial vector reaches the zero vector (use --sentinel)\n";
                auto red = reduce_vas_reachability(net, s0, parse_natvec(target, net.dim), sentinel);
                print_reduced(red.loop, red.suggested);
            }
            return 0;
        } else if (*lrs2verif) {
            auto red = reduce_lrs_to_verification(load_lrs(file));
            print_reduced(red.loop, red.suggested);
            return 0;
        } else if (*bphalts) out = cmd_bp_halts(file);
        else if (*vas) out = cmd_vas_oracle(file, query, init, target, coord, cap);
        else if (*simulate) out = cmd_simulate(file, init, box, steps, samples, seed);
        else if (*km) out = cmd_km(file, init);
        print(out, format);
        return out.code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << file << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << file << ": " << e.what() << "\n";
        return 1;
    }
}
