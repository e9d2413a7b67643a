#include "lrfkit/boolprog.hpp"
#include "lrfkit/loop.hpp"

#include <gtest/gtest.h>

using namespace lrfkit;

namespace {

SlcpLoop loop(const std::string& src) { return parse_loop(src); }

const char* kCountDown = "vars: x\nguard: x >= 0\nupdate: x' = x - 1\n";

} // namespace

TEST(Loop, IsInitial) {
    auto L = loop("vars: A1 X1 Z\npre:\n A1 = 1\n X1 = 0\n");
    EXPECT_TRUE(is_initial(L, {1, 0, 7}));
    EXPECT_FALSE(is_initial(L, {0, 0, 0}));
    EXPECT_FALSE(is_initial(L, {1, 0, Rational(1, 2)}));
}

TEST(Loop, IsTransition) {
    auto L = loop(kCountDown);
    EXPECT_TRUE(is_transition(L, {3}, {2}));
    EXPECT_FALSE(is_transition(L, {3}, {3}));
    EXPECT_FALSE(is_transition(L, {-1}, {-2}));
    EXPECT_THROW(is_transition(L, {1, 2}, {0}), InputError);
}

TEST(Loop, SuccessorsBounded) {
    auto L = loop("vars: x\nguard: x >= 0\nupdate: x - 1 <= x' <= x\n");
    EXPECT_EQ(successors_bounded(L, {1}, make_box(1, -2, 2)), (std::vector<State>{{0}, {1}}));
    EXPECT_TRUE(successors_bounded(L, {-1}, make_box(1, -2, 2)).empty());
    auto R = loop("vars: x\ninterp: rat\nguard: x >= 0\nupdate: x' = x\n");
    EXPECT_THROW(successors_bounded(R, {1}, make_box(1, -2, 2)), InputError);
}

TEST(Loop, SuccessorsBoundedExhaustive) {
    auto L = loop("vars: x y\nguard: x + y >= 0\nupdate:\n x' + y' <= x\n y' >= y - 1\n x' - y' >= -2\n");
    Box box = make_box(2, -3, 3);
    for (int x = -3; x <= 3; ++x)
        for (int y = -3; y <= 3; ++y) {
            State s{x, y};
            auto succ = successors_bounded(L, s, box);
            ASSERT_TRUE(std::is_sorted(succ.begin(), succ.end()));
            for (int a = -3; a <= 3; ++a)
                for (int b = -3; b <= 3; ++b) {
                    State t{a, b};
                    bool listed = std::binary_search(succ.begin(), succ.end(), t);
                    ASSERT_EQ(listed, is_transition(L, s, t));
                }
        }
}

TEST(Loop, ExploreHalts) {
    auto rep = explore(loop(kCountDown), {2}, make_box(1, -5, 5), 10);
    EXPECT_EQ(rep.outcome, ExploreOutcome::Halted);
    EXPECT_EQ(rep.longest_run, 3u);
}

TEST(Loop, ExploreFindsCycle) {
    auto L = loop("vars: x\nguard: x >= 0\nupdate: x' = x\n");
    auto rep = explore(L, {0}, make_box(1, -2, 2), 10);
    ASSERT_EQ(rep.outcome, ExploreOutcome::CycleFound);
    ASSERT_TRUE(rep.lasso);
    EXPECT_EQ(rep.lasso->cycle, (std::vector<State>{{0}}));
    EXPECT_TRUE(check_lasso(L, *rep.lasso));
}

TEST(Loop, ExploreCyclesRecheck) {
    auto L = loop("vars: x y\nguard:\n x >= 0\n y >= 0\nupdate:\n x' = y\n y' = x\n");
    auto rep = explore(L, {2, 0}, make_box(2, -1, 3), 10);
    ASSERT_EQ(rep.outcome, ExploreOutcome::CycleFound);
    EXPECT_EQ(rep.lasso->cycle.size(), 2u);
    EXPECT_TRUE(check_lasso(L, *rep.lasso));
}

TEST(Loop, ExploreReducedHaltingProgramCycles) {
    auto P = parse_bp("if X1 goto 2 else 2\n");
    auto red = reduce_bool_to_loop(P, Gadget::None);
    State s0 = embed_state(P, red.layout, bp_initial(P), nullptr);
    auto rep = explore(red.loop, s0, make_box(red.loop.n(), -1, 2), 10);
    ASSERT_EQ(rep.outcome, ExploreOutcome::CycleFound);
    const auto& idle = rep.lasso->cycle.front();
    EXPECT_EQ(idle[red.layout.nv(P.m() + 1)], 1);
    EXPECT_TRUE(check_lasso(red.loop, *rep.lasso));
}

TEST(Loop, ParseFigureOne) {
    auto L = loop("vars: X Y\npre: Y = 2\nguard: X > 0\nupdate:\n X' = X + Y - 1\n Y' = 2Y - 2\n");
    EXPECT_EQ(L.n(), 2u);
    EXPECT_TRUE(L.integer());
    ASSERT_EQ(L.guard().size(), 1u);
    EXPECT_EQ(L.guard().rows()[0].coeffs, (Vec{-1, 0}));
    EXPECT_EQ(L.guard().rows()[0].bound, -1);
    EXPECT_FALSE(L.guard().rows()[0].strict);
}

TEST(Loop, EmptyUpdateIsFullSpace) {
    auto L = loop("vars: x\nguard: x >= 0\n");
    EXPECT_EQ(L.update().size(), 0u);
    EXPECT_TRUE(is_transition(L, {0}, {100}));
}

TEST(Loop, ParseErrors) {
    try {
        loop("vars: x\nupdate: x'' = 3\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(loop("vars: x\nguard: z >= 0\n"), ParseError);
    EXPECT_THROW(loop("vars: x x\n"), InputError);
    EXPECT_THROW(loop("guard: x >= 0\n"), ParseError);
    EXPECT_THROW(loop("vars: x\nguard: x' >= 0\n"), ParseError);
}

TEST(Loop, RoundTrip) {
    for (const char* src : {kCountDown, "vars: a b\ninterp: rat\npre: a = 1/2\nguard: a < b\nupdate: 2a' - b <= 3\n"}) {
        auto L = loop(src);
        auto text = emit_loop(L);
        auto M = parse_loop(text);
        EXPECT_EQ(emit_loop(M), text);
        EXPECT_EQ(M.names(), L.names());
        EXPECT_EQ(M.interp(), L.interp());
    }
}

TEST(Loop, PartialInput) {
    auto L = loop("vars: a b c\npre:\n a = 1\n c = 0\n");
    auto in = as_partial_input(L);
    ASSERT_TRUE(in);
    EXPECT_EQ(in->assignments.size(), 2u);
    EXPECT_EQ(in->assignments.at(0), 1);
    EXPECT_FALSE(as_partial_input(loop("vars: a\npre: a >= 1\n")));
}
