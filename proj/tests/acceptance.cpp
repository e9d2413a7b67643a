#include "generators.hpp"
#include "lrfkit/lrfkit.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace lrfkit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

bool g_all_pass = true;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::vector<std::string> details;
    double seconds = 0;
    double limit = 0; // 0: no time limit

    void fail(const std::string& why) {
        pass = false;
        if (details.size() < 5) details.push_back(why);
    }
    void check(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

void report(Criterion& c, const std::string& stats) {
    if (c.limit > 0 && c.seconds >= c.limit) c.fail("runtime " + std::to_string(c.seconds) + " s over the limit");
    std::printf("%s criterion %d (%s): %s; %.2f s%s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), stats.c_str(),
                c.seconds, c.limit > 0 ? (" (limit " + std::to_string(int(c.limit)) + " s)").c_str() : "");
    for (const auto& d : c.details) std::printf("    %s\n", d.c_str());
    g_all_pass = g_all_pass && c.pass;
    std::fflush(stdout);
}

const std::string kCorpus = LRFKIT_CORPUS;
const std::string kCli = LRFKIT_CLI;

// ---------------------------------------------------------------------------
// 1. Catalog

enum class Expect { Found, NoneExists, Vacuous };

struct CatalogEntry {
    std::string file;
    Expect synth;
    std::vector<std::pair<std::string, Verdict>> checks;
};

// Verdicts derived by hand from the constraints in each file.
const std::vector<CatalogEntry> kCatalog = {
    {"count_down", Expect::Found, {{"x:1", Verdict::Yes}, {"x:-1", Verdict::No}}},
    {"count_up", Expect::NoneExists, {{"x:1", Verdict::No}, {"x:-1", Verdict::No}}},
    {"stay", Expect::NoneExists, {{"x:1", Verdict::No}}},
    {"sum_shift", Expect::Found, {{"y:1", Verdict::Yes}, {"x:1", Verdict::No}, {"x:1,y:1", Verdict::No}}},
    {"fig1", Expect::NoneExists, {{"X:1", Verdict::No}}},
    {"rat_count_down", Expect::Found, {{"x:1", Verdict::Yes}, {"x:1,-1", Verdict::No}}},
    {"rat_halving", Expect::Found, {{"x:2", Verdict::Yes}, {"x:1", Verdict::No}}},
    {"havoc_y", Expect::Found, {{"x:1", Verdict::Yes}, {"y:1", Verdict::No}}},
    {"swap", Expect::NoneExists, {{"x:1,y:1", Verdict::No}}},
    {"empty_guard", Expect::Vacuous, {{"x:-1", Verdict::Vacuous}}},
    {"nondet_step", Expect::Found, {{"x:1", Verdict::Yes}, {"x:1/2", Verdict::No}}},
    {"gap", Expect::Found, {{"x:-1,y:1", Verdict::Yes}, {"y:1", Verdict::No}}},
    {"flip", Expect::Found, {{"x:1", Verdict::Yes}, {"x:1,-1", Verdict::No}}},
    {"no_floor", Expect::NoneExists, {{"x:-1,10", Verdict::No}}},
    {"half_int", Expect::Found, {{"x:1", Verdict::Yes}, {"x:1,-1", Verdict::Yes}, {"x:1,-2", Verdict::No}}},
};

/// Every transition with both ends in [-3,3]^n satisfies both ranking conditions.
bool boxed_check(const SlcpLoop& L, const AffineFunction& f, std::string& why) {
    const std::size_t n = L.n();
    std::vector<int> v(2 * n, -3);
    while (true) {
        State x(n), xp(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = v[i];
            xp[i] = v[n + i];
        }
        if (is_transition(L, x, xp) && (f(x) < 0 || f(x) - f(xp) < 1)) {
            why = "boxed transition " + to_string(x, ",") + " -> " + to_string(xp, ",") + " violates f";
            return false;
        }
        std::size_t k = 0;
        while (k < v.size() && v[k] == 3) v[k++] = -3;
        if (k == v.size()) return true;
        ++v[k];
    }
}

void criterion1() {
    Criterion c{1, "catalog Farkas soundness"};
    c.limit = 5;
    auto t0 = Clock::now();
    std::size_t found = 0, checks = 0;
    for (const auto& e : kCatalog) {
        auto L = load_loop(kCorpus + "/loops/" + e.file + ".slcp");
        auto s = synth_universal(L);
        Expect got = s.kind == SynthKind::Found ? Expect::Found
                     : s.kind == SynthKind::NoneExists ? Expect::NoneExists
                                                       : Expect::Vacuous;
        c.check(got == e.synth, e.file + ": synth verdict differs");
        if (s.kind == SynthKind::Found) {
            ++found;
            auto v = verify_universal(L, *s.f);
            c.check(v.verdict == Verdict::Yes && v.recheck(), e.file + ": synthesized f does not verify");
            c.check(s.verification.recheck(), e.file + ": certificates fail recheck");
            std::string why;
            c.check(boxed_check(L, *s.f, why), e.file + ": " + why);
            if (e.file == "sum_shift")
                c.check(s.f->coeffs[0] == 0 && s.f->coeffs[1] >= 1, "sum_shift: expected coeff_x = 0, coeff_y >= 1");
        }
        for (const auto& [spec, want] : e.checks) {
            ++checks;
            auto f = parse_affine(spec, L.names());
            auto v = verify_universal(L, f);
            c.check(v.verdict == want, e.file + ": verify " + spec + " gave " + std::to_string(int(v.verdict)));
            if (v.verdict == Verdict::Yes) c.check(v.recheck(), e.file + ": certificate recheck for " + spec);
            if (v.verdict == Verdict::No) {
                const auto& ce = *v.counterexample;
                bool viol = ce.violated == "nonneg" ? f(ce.x) < 0 : f(ce.x) - f(ce.xp) < 1;
                c.check(is_transition(L, ce.x, ce.xp) && viol, e.file + ": counterexample for " + spec + " is not genuine");
            }
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(kCatalog.size()) + " loops, " + std::to_string(found) + " found, " +
                  std::to_string(checks) + " verify checks");
}

// ---------------------------------------------------------------------------
// 2-4. Boolean programs

std::vector<BoolProgram> programs(std::size_t count) {
    testgen::Rng rng(20240501);
    std::vector<BoolProgram> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(testgen::random_program(rng, 3, 6));
    return out;
}

Integer y_bound(const BoolProgram& P) { return Integer(P.m() + 1) * (Integer(1) << P.n); }

void criterion2(const std::vector<BoolProgram>& ps) {
    Criterion c{2, "Boolean program reduction equivalence"};
    c.limit = 60;
    auto t0 = Clock::now();
    std::map<BpOutcome, std::size_t> counts;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& P = ps[i];
        const std::string tag = "program " + std::to_string(i) + " (" + to_string(bp_halts(P)) + ")";
        auto out = bp_halts(P);
        ++counts[out];
        auto red = reduce_bool_to_loop(P, Gadget::RankY);
        const auto& lay = red.layout;
        auto hull = hull_invariant(red.loop);
        auto sup = verify_supported(red.loop, *red.suggested, hull.poly);
        Box box = make_box(red.loop.n(), -1, 2);
        box[lay.y()] = {Integer(1), y_bound(P) + 2};
        auto run = refute_by_run(red.loop, red.input, box, 100000, 1);
        if (out == BpOutcome::Halts) {
            c.check(sup.verdict == Verdict::No, tag + ": supported verification did not reject Y");
            if (sup.verdict == Verdict::No) {
                const auto& ce = *sup.ranking.counterexample;
                c.check(is_transition(red.loop, ce.x, ce.xp) && hull.poly.contains(ce.x),
                        tag + ": counterexample is not a transition inside the invariant");
            }
            c.check(run.refuted && run.lasso && check_lasso(red.loop, *run.lasso), tag + ": no run refutation");
        } else {
            c.check(sup.verdict == Verdict::Yes && sup.invariant.valid() && sup.ranking.recheck(),
                    tag + ": Y not verified with valid certificates");
            c.check(!run.refuted, tag + ": spurious run refutation");
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(ps.size()) + " programs (" + std::to_string(counts[BpOutcome::Halts]) + " halt, " +
                  std::to_string(counts[BpOutcome::Loops]) + " loop, " + std::to_string(counts[BpOutcome::Aborts]) +
                  " abort), 0 mismatches required");
}

void criterion3(const std::vector<BoolProgram>& ps) {
    Criterion c{3, "lockstep embedding properties"};
    auto t0 = Clock::now();
    std::size_t steps = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (Gadget g : {Gadget::None, Gadget::RankY, Gadget::RankYTerminating}) {
            auto rep = lockstep_check(ps[i], g);
            steps += rep.steps;
            for (const auto& v : rep.violations) c.fail("program " + std::to_string(i) + ": " + v);
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(ps.size()) + " programs x 3 gadgets, " + std::to_string(steps) + " embedded steps");
}

void criterion4(const std::vector<BoolProgram>& ps) {
    Criterion c{4, "terminating Y/R variant"};
    auto t0 = Clock::now();
    testgen::Rng rng(77);
    std::size_t explorations = 0, exhibited = 0;
    const std::size_t samples = 20;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& P = ps[i];
        const std::string tag = "program " + std::to_string(i);
        auto red = reduce_bool_to_loop(P, Gadget::RankYTerminating);
        const auto& lay = red.layout;
        const auto& L = red.loop;
        for (std::size_t k = 0; k < samples; ++k) {
            const std::int64_t y = testgen::uniform_i(rng, 1, 8), r = testgen::uniform_i(rng, -2, 8);
            const Integer bound = Integer(y) + std::max<std::int64_t>(r, 0) + y_bound(P) + 2;
            State s0 = embed_state(P, lay, bp_initial(P), nullptr, y, r);
            Box box = make_box(L.n(), -1, 2);
            box[lay.y()] = {Integer(0), Integer(y)};
            box[lay.r()] = {Integer(r) - bound - 1, Integer(r)};
            auto rep = explore(L, s0, box, bound.convert_to<std::size_t>());
            ++explorations;
            c.check(rep.outcome == ExploreOutcome::Halted && !rep.box_exceeded && Integer(rep.longest_run) <= bound,
                    tag + ": run from Y=" + std::to_string(y) + ", R=" + std::to_string(r) + " did not halt within " +
                        bound.str() + " steps");
        }
        if (bp_halts(P) == BpOutcome::Halts) {
            const Integer big = y_bound(P) + 2;
            PartialInput in = red.input;
            in.assignments[lay.y()] = Rational(big);
            in.assignments[lay.r()] = Rational(big);
            Box box = make_box(L.n(), -1, 2);
            box[lay.y()] = {Integer(0), big};
            box[lay.r()] = {-big - 1, big};
            auto cr = refute_candidate_by_run(L, *red.suggested, in, box, (2 * big + 2).convert_to<std::size_t>(), 1);
            bool ok = cr.refuted && cr.path.size() >= 2 && is_initial(L, cr.path.front());
            for (std::size_t s = 0; ok && s + 1 < cr.path.size(); ++s) ok = is_transition(L, cr.path[s], cr.path[s + 1]);
            if (ok) {
                const auto& x = cr.path[cr.path.size() - 2];
                const auto& xp = cr.path.back();
                ok = x[lay.y()] - xp[lay.y()] < 1;
            }
            exhibited += ok;
            c.check(ok, tag + ": no reachable non-decreasing step for Y");
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(explorations) + " sampled explorations, " + std::to_string(exhibited) +
                  " non-decreasing steps exhibited");
}

// ---------------------------------------------------------------------------
// 5-6. Petri nets

struct NetInstance {
    PetriNet net;
    NatVec s0;
    std::vector<NatVec> reachable;
};

std::vector<NetInstance> nets(std::size_t count) {
    testgen::Rng rng(4242);
    std::vector<NetInstance> out;
    while (out.size() < count) {
        auto net = testgen::random_net(rng, 4, 4, 2);
        auto s0 = testgen::random_natvec(rng, net.dim, 2);
        auto R = reachable_states(net, s0, 2000);
        if (!R) continue;
        out.push_back({std::move(net), std::move(s0), std::move(*R)});
    }
    return out;
}

void criterion5(const std::vector<NetInstance>& ns) {
    Criterion c{5, "Petri positivity reduction equivalence"};
    c.limit = 120;
    auto t0 = Clock::now();
    std::size_t positive = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& [net, s0, R] = ns[i];
        const std::string tag = "net " + std::to_string(i);
        auto bfs = vas_bfs(net, s0, {QueryKind::Positive, {}, net.dim - 1}, default_state_cap());
        c.check(bfs.answer != OracleAnswer::Inconclusive, tag + ": oracle inconclusive");
        const bool pos = bfs.answer == OracleAnswer::Yes;
        positive += pos;
        if (pos) c.check(check_path(net, s0, bfs.path, {QueryKind::Positive, {}, net.dim - 1}), tag + ": BFS path fails recheck");
        auto red = reduce_vas_positivity(net, s0);
        const auto& lay = red.layout;
        Box box(lay.dim());
        for (std::size_t j = 0; j < net.dim; ++j) {
            std::int64_t hi = 0;
            for (const auto& x : R) hi = std::max(hi, x[j]);
            box[lay.x(j)] = {Integer(0), Integer(hi)};
        }
        for (std::size_t k = 0; k < lay.m; ++k) box[lay.a(k)] = {Integer(0), Integer(1)};
        box[lay.y()] = {Integer(1), Integer(R.size() + 1)};
        auto run = refute_by_run(red.loop, red.input, box, 20000, 1);
        c.check(pos == run.refuted, tag + ": run refutation " + (run.refuted ? "found" : "missing"));
        if (run.refuted) c.check(run.lasso && check_lasso(red.loop, *run.lasso), tag + ": lasso fails recheck");
        auto sup = verify_supported(red.loop, red.suggested, positivity_invariant(red, s0));
        const bool yes = sup.verdict == Verdict::Yes || sup.verdict == Verdict::Vacuous;
        c.check(sup.invariant.valid(), tag + ": lifted coverability invariant rejected");
        c.check(pos != yes, tag + ": supported verdict disagrees with the oracle");
        if (yes) c.check(sup.ranking.recheck(), tag + ": certificates fail recheck");
    }
    c.seconds = since(t0);
    report(c, std::to_string(ns.size()) + " nets, " + std::to_string(positive) + " positive");
}

void criterion6(const std::vector<NetInstance>& ns) {
    Criterion c{6, "Karp-Miller validity and coverability agreement"};
    auto t0 = Clock::now();
    testgen::Rng rng(99);
    std::size_t queries = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& [net, s0, R] = ns[i];
        const std::string tag = "net " + std::to_string(i);
        auto km = karp_miller(net, s0);
        auto red = reduce_vas_positivity(net, s0);
        auto rep = check_downward(red.loop, lift_to_loop(karp_miller(red.net, s0).set, red.layout));
        c.check(rep.valid(), tag + ": check_downward rejects the lifted coverability set");
        c.check(km.set.is_antichain(), tag + ": generators are not an antichain");
        std::vector<NatVec> targets;
        for (std::size_t k = 0; k < 6; ++k) targets.push_back(testgen::random_natvec(rng, net.dim, 3));
        for (const auto& x : R) {
            auto y = x;
            y[testgen::uniform(rng, 0, net.dim - 1)] += 1;
            targets.push_back(x);
            targets.push_back(y);
            if (targets.size() > 20) break;
        }
        for (const auto& y : targets) {
            auto bfs = vas_bfs(net, s0, {QueryKind::Cover, y, 0}, 100000);
            if (bfs.answer == OracleAnswer::Inconclusive) continue;
            ++queries;
            c.check((bfs.answer == OracleAnswer::Yes) == km.set.contains(y),
                    tag + ": coverability of " + format_natvec(y) + " differs from BFS");
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(ns.size()) + " nets, " + std::to_string(queries) + " coverability queries");
}

// ---------------------------------------------------------------------------
// 7. Reachability reduction

void criterion7() {
    Criterion c{7, "VAS reachability reduction dichotomy"};
    auto t0 = Clock::now();
    testgen::Rng rng(31337);
    std::size_t done = 0, reach = 0, edges = 0;
    while (done < 100) {
        auto net = testgen::random_vas(rng, 3, 3, 2);
        auto s = testgen::random_natvec(rng, net.dim, 2);
        auto R = reachable_states(net, s, 500);
        if (!R) continue;
        NatVec t = done % 2 == 0 ? (*R)[testgen::uniform(rng, 0, R->size() - 1)] : testgen::random_natvec(rng, net.dim, 2);
        auto bfs = vas_bfs(net, s, {QueryKind::Reach, t, 0}, 100000);
        if (bfs.answer == OracleAnswer::Inconclusive) continue;
        const std::string tag = "instance " + std::to_string(done);
        ++done;
        const bool yes = bfs.answer == OracleAnswer::Yes;
        reach += yes;
        auto r = reduce_vas_reachability(net, s, t, true);
        auto d = reach_dichotomy(r);
        edges += d.transitions;
        c.check(!d.other_non_decreasing, tag + ": non-decreasing transition outside the locked phase");
        if (yes) {
            c.check(d.freeze.has_value(), tag + ": reachable target but no frozen transition");
            if (d.freeze) {
                auto [x, y] = *d.freeze;
                x[r.counter()] = y[r.counter()] = 5;
                c.check(is_transition(r.loop, x, y), tag + ": frozen transition fails recheck");
            }
        } else {
            c.check(d.decreasing == d.transitions, tag + ": unreachable target but a transition does not decrease");
        }
    }
    c.seconds = since(t0);
    report(c, std::to_string(done) + " instances (" + std::to_string(reach) + " reachable), " + std::to_string(edges) +
                  " transitions classified");
}

// ---------------------------------------------------------------------------
// 8. Linear recurrences

void criterion8() {
    Criterion c{8, "LRS gadget"};
    auto t0 = Clock::now();
    const std::size_t horizon = 8;
    auto refuted = [&](const LrsInstance& I) {
        auto red = reduce_lrs_to_verification(I);
        auto sim = lrs_simulation(I, red.input, horizon);
        return refute_candidate_by_run(red.loop, red.suggested, sim.input, sim.box, horizon, 1);
    };
    struct Example {
        std::string file;
        bool refuted;
    };
    for (const auto& [file, want] : std::vector<Example>{{"const_one", false}, {"negate", true}, {"const_zero", true}}) {
        auto cr = refuted(load_lrs(kCorpus + "/lrs/" + file + ".lrs"));
        c.check(cr.refuted == want, file + ": refutation " + (cr.refuted ? "found" : "missing"));
        if (cr.refuted) c.check(cr.violated == "decrease", file + ": expected a decrease violation");
    }
    testgen::Rng rng(5);
    std::size_t drops = 0;
    for (int it = 0; it < 50; ++it) {
        LrsInstance I;
        I.dim = 2;
        const std::int64_t lo = it % 2 == 0 ? -2 : 0;
        auto e = [&] { return Integer(testgen::uniform_i(rng, lo, 2)); };
        I.matrix = {{e(), e()}, {e(), e()}};
        I.offset = {e(), e()};
        I.init = {Integer(testgen::uniform_i(rng, lo + 1, 3)), e()};
        auto x = I.init;
        bool drop = false;
        for (std::size_t k = 0; k < horizon; ++k) {
            if (x[0] < 1) drop = true;
            x = I.step(x);
        }
        drops += drop;
        c.check(refuted(I).refuted == drop, "random instance " + std::to_string(it) + ": refutation disagrees with the sequence");
    }
    c.seconds = since(t0);
    report(c, "3 examples, 50 random instances (" + std::to_string(drops) + " drop below 1)");
}

// ---------------------------------------------------------------------------
// 9. Determinism and round trips

std::pair<std::string, int> run_cli(const std::string& args) {
    std::string cmd = "'" + kCli + "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {"", -1};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::vector<std::string> corpus_commands() {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(kCorpus))
        if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::vector<std::string> cmds;
    for (const auto& f : files) {
        const std::string q = "'" + f + "'", ext = fs::path(f).extension().string();
        cmds.push_back("--format record parse " + q);
        if (ext == ".slcp") {
            cmds.push_back("--format record synth " + q);
            if (load_loop(f).integer())
                cmds.push_back("--format record --seed 7 simulate " + q + " --box -3:3 --steps 20 --samples 3");
        } else if (ext == ".bp") {
            cmds.push_back("oracle bp-halts " + q);
            cmds.push_back("reduce bool2loop " + q + " --gadget y");
        } else if (ext == ".vas") {
            std::string init = "2";
            for (std::size_t i = 1; i < load_net(f).dim; ++i) init += ",1";
            cmds.push_back("--format record km " + q + " --init " + init);
        } else if (ext == ".lrs") {
            cmds.push_back("reduce lrs2verif " + q);
        }
    }
    return cmds;
}

template <class Parse, class Emit>
bool stable(const std::string& src, Parse parse, Emit emit) {
    const std::string a = emit(parse(src));
    return emit(parse(a)) == a;
}

void criterion9() {
    Criterion c{9, "determinism and round trips"};
    auto t0 = Clock::now();
    auto cmds = corpus_commands();
    for (const auto& cmd : cmds) {
        auto a = run_cli(cmd), b = run_cli(cmd);
        c.check(a == b, "output differs between runs: " + cmd);
        c.check(a.second == 0 || a.second == 2, "exit " + std::to_string(a.second) + ": " + cmd);
    }
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(kCorpus)) {
        if (!e.is_regular_file()) continue;
        ++files;
        const std::string p = e.path().string(), ext = e.path().extension().string(), src = text::read_file(p);
        bool ok = ext == ".slcp"   ? stable(src, parse_loop, emit_loop)
                  : ext == ".bp"   ? stable(src, parse_bp, emit_bp)
                  : ext == ".vas"  ? stable(src, parse_net, emit_net)
                  : ext == ".lrs"  ? stable(src, parse_lrs, emit_lrs)
                  : ext == ".poly" ? stable(src, parse_poly, emit_poly)
                  : ext == ".dcs"  ? stable(src, parse_dcs, emit_dcs)
                                   : false;
        c.check(ok, "emit/parse unstable: " + p);
    }
    testgen::Rng rng(9);
    std::size_t generated = 0;
    for (int it = 0; it < 50; ++it) {
        auto P = testgen::random_program(rng);
        auto net = testgen::random_net(rng);
        auto s0 = testgen::random_natvec(rng, net.dim);
        auto red = reduce_bool_to_loop(P, Gadget::RankYTerminating);
        auto hull = hull_invariant(reduce_bool_to_loop(P, Gadget::RankY).loop);
        NamedPolyhedron np{reduce_bool_to_loop(P, Gadget::RankY).loop.names(), hull.poly};
        generated += 5;
        c.check(stable(emit_bp(P), parse_bp, emit_bp), "bp round trip");
        c.check(stable(emit_net(net), parse_net, emit_net), "net round trip");
        c.check(stable(emit_loop(red.loop), parse_loop, emit_loop), "reduced loop round trip");
        c.check(stable(emit_poly(np), parse_poly, emit_poly), "hull polyhedron round trip");
        c.check(stable(emit_dcs(karp_miller(net, s0).set), parse_dcs, emit_dcs), "coverability set round trip");
    }
    c.seconds = since(t0);
    report(c, std::to_string(cmds.size()) + " CLI commands run twice, " + std::to_string(files) + " corpus files, " +
                  std::to_string(generated) + " generated artifacts");
}

} // namespace

int main() {
    bool all = true;
    auto guard = [&](auto&& fn, int id) {
        try {
            fn();
        } catch (const std::exception& e) {
            std::printf("FAIL criterion %d: exception: %s\n", id, e.what());
            all = false;
        }
    };
    guard(criterion1, 1);
    std::vector<BoolProgram> ps;
    guard([&] { ps = programs(500); }, 2);
    guard([&] { criterion2(ps); }, 2);
    guard([&] { criterion3(ps); }, 3);
    guard([&] { criterion4(ps); }, 4);
    std::vector<NetInstance> ns;
    guard([&] { ns = nets(300); }, 5);
    guard([&] { criterion5(ns); }, 5);
    guard([&] { criterion6(ns); }, 6);
    guard(criterion7, 7);
    guard(criterion8, 8);
    guard(criterion9, 9);
    return all && g_all_pass ? 0 : 1;
}
