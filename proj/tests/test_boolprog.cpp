#include "generators.hpp"
#include "lrfkit/boolprog.hpp"
#include "lrfkit/invariant.hpp"

#include <gtest/gtest.h>

using namespace lrfkit;

TEST(BoolStep, Semantics) {
    auto P = parse_bp("incr X1\nif X1 goto 1 else 3\ndecr X1\n");
    auto s = bp_initial(P);
    auto a = bp_step(P, s);
    ASSERT_EQ(a.kind, StepKind::Next);
    EXPECT_EQ(a.next.pc, 2u);
    EXPECT_EQ(a.next.vals[0], 1);
    auto b = bp_step(P, a.next);
    EXPECT_EQ(b.next.pc, 1u);
    EXPECT_EQ(bp_step(P, b.next).kind, StepKind::Aborted);
    EXPECT_EQ(bp_step(P, {4, {0}}).kind, StepKind::Halted);
}

TEST(BoolHalts, Examples) {
    EXPECT_EQ(bp_halts(parse_bp("if X1 goto 2 else 2\n")), BpOutcome::Halts);
    EXPECT_EQ(bp_halts(parse_bp("if X1 goto 1 else 1\n")), BpOutcome::Loops);
    EXPECT_EQ(bp_halts(parse_bp("incr X1\nincr X1\n")), BpOutcome::Aborts);
    EXPECT_EQ(bp_halts(parse_bp("decr X1\n")), BpOutcome::Aborts);
}

TEST(BoolFormat, ParseErrorsAndRoundTrip) {
    EXPECT_THROW(parse_bp("incr Y1\n"), ParseError);
    EXPECT_THROW(parse_bp("if X1 goto 9 else 1\n"), ParseError);
    EXPECT_THROW(parse_bp("jump 3\n"), ParseError);
    try {
        parse_bp("incr X1\nif X1 goto 1 else\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    testgen::Rng rng(41);
    for (int it = 0; it < 100; ++it) {
        auto P = testgen::random_program(rng);
        auto text = emit_bp(P);
        EXPECT_EQ(emit_bp(parse_bp(text)), text);
    }
}

TEST(BoolReduce, InitialEmbedding) {
    auto P = parse_bp("incr X1\nif X1 goto 3 else 1\n");
    auto red = reduce_bool_to_loop(P, Gadget::RankY);
    const auto& lay = red.layout;
    State s0 = embed_state(P, lay, bp_initial(P), nullptr, 5);
    EXPECT_TRUE(is_initial(red.loop, s0));
    for (std::size_t i = 0; i < lay.y(); ++i) EXPECT_EQ(s0[i], i == lay.a(1) ? 1 : 0);
    EXPECT_FALSE(red.input.assignments.count(lay.y()));
}

TEST(BoolReduce, SingleIncrementThenIdle) {
    auto P = parse_bp("incr X1\n");
    auto red = reduce_bool_to_loop(P, Gadget::None);
    const auto& lay = red.layout;
    State s0 = embed_state(P, lay, bp_initial(P), nullptr);
    auto succ = successors_bounded(red.loop, s0, make_box(lay.dim(), -1, 2));
    ASSERT_EQ(succ.size(), 1u);
    const auto& s1 = succ[0];
    EXPECT_EQ(s1[lay.a(1)], 0);
    EXPECT_EQ(s1[lay.nv(2)], 1);
    EXPECT_EQ(s1[lay.x(1)], 1);
    EXPECT_EQ(successors_bounded(red.loop, s1, make_box(lay.dim(), -1, 2)), (std::vector<State>{s1}));
}

TEST(BoolReduce, PipelineExamples) {
    auto loops = parse_bp("if X1 goto 1 else 1\n");
    auto r1 = reduce_bool_to_loop(loops, Gadget::RankY);
    auto h1 = hull_invariant(r1.loop);
    EXPECT_EQ(verify_supported(r1.loop, *r1.suggested, h1.poly).verdict, Verdict::Yes);
    auto halts = parse_bp("if X1 goto 2 else 2\n");
    auto r2 = reduce_bool_to_loop(halts, Gadget::RankY);
    auto sup = verify_supported(r2.loop, *r2.suggested, hull_invariant(r2.loop).poly);
    ASSERT_EQ(sup.verdict, Verdict::No);
    EXPECT_EQ(sup.ranking.counterexample->x[r2.layout.nv(2)], 1);
    Box box = make_box(r2.loop.n(), -1, 2);
    box[r2.layout.y()] = {Integer(1), Integer(6)};
    auto run = refute_by_run(r2.loop, r2.input, box, 1000, 1);
    ASSERT_TRUE(run.refuted);
    EXPECT_TRUE(check_lasso(r2.loop, *run.lasso));
}

TEST(BoolLockstep, RandomProgramsAllGadgets) {
    testgen::Rng rng(43);
    for (int it = 0; it < 200; ++it) {
        auto P = testgen::random_program(rng);
        for (Gadget g : {Gadget::None, Gadget::RankY, Gadget::RankYTerminating}) {
            auto rep = lockstep_check(P, g);
            ASSERT_TRUE(rep.ok()) << emit_bp(P) << rep.violations.front();
            ASSERT_EQ(rep.outcome, bp_halts(P));
        }
    }
}

TEST(BoolLockstep, HaltTransferState) {
    auto P = parse_bp("incr X1\ndecr X1\n");
    auto red = reduce_bool_to_loop(P, Gadget::None);
    auto run = bp_run(P);
    ASSERT_EQ(run.outcome, BpOutcome::Halts);
    const auto& last = run.states.back();
    const auto& prev = run.states[run.states.size() - 2];
    State s = embed_state(P, red.layout, last, &prev);
    EXPECT_EQ(s[red.layout.nv(P.m() + 1)], 1);
    for (std::size_t k = 1; k <= P.m(); ++k) EXPECT_EQ(s[red.layout.a(k)], 0);
}
