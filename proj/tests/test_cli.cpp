#include "lrfkit/lrfkit.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>

using namespace lrfkit;

namespace {

const std::string kCorpus = LRFKIT_CORPUS;

struct CliRun {
    std::string out;
    int code;
};

CliRun cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string("'") + LRFKIT_CLI + "' " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::string loop_file(const std::string& name) { return kCorpus + "/loops/" + name + ".slcp"; }

/// Values of every "key: value" record line with the given key.
std::vector<std::string> field(const std::string& record, const std::string& key) {
    std::vector<std::string> out;
    std::istringstream in(record);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + ": ", 0) == 0) out.push_back(line.substr(key.size() + 2));
    return out;
}

State parse_state(const SlcpLoop& L, const std::string& s) {
    State x(L.n());
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        x[L.index_of(item.substr(0, eq))] = parse_rational(item.substr(eq + 1));
    }
    return x;
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = testing::TempDir() + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(Cli, SynthFound) {
    auto r = cli("synth " + loop_file("count_down"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("found ranking function x:1"), std::string::npos);
}

TEST(Cli, SynthNoneExists) {
    auto r = cli("--format record synth " + loop_file("count_up"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"none-exists"}));
}

TEST(Cli, ReduceThenVerifyWithHull) {
    auto red = cli("reduce bool2loop " + kCorpus + "/bp/loops.bp --gadget y");
    ASSERT_EQ(red.code, 0);
    EXPECT_EQ(red.out.rfind("# suggested ranking function: Y:1\n", 0), 0u);
    auto path = temp_file("reduced.slcp", red.out);
    auto r = cli("--format record verify " + path + " --rf Y:1 --invariant hull");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"yes"}));
    EXPECT_FALSE(field(r.out, "certificate").empty());
}

TEST(Cli, ReduceHaltingThenVerifyRejects) {
    auto red = cli("reduce bool2loop " + kCorpus + "/bp/halts.bp --gadget y");
    auto path = temp_file("halting.slcp", red.out);
    auto r = cli("--format record verify " + path + " --rf Y:1 --invariant hull");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"no"}));
    auto L = load_loop(path);
    State x = parse_state(L, field(r.out, "x").at(0)), xp = parse_state(L, field(r.out, "x'").at(0));
    EXPECT_TRUE(is_transition(L, x, xp));
}

TEST(Cli, OracleVasPositive) {
    auto r = cli("--format record oracle vas " + kCorpus + "/vas/one_step.vas --query positive --init 0");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"yes"}));
    EXPECT_EQ(field(r.out, "path"), (std::vector<std::string>{"t1"}));
}

TEST(Cli, OracleVasInconclusive) {
    auto r = cli("oracle vas " + kCorpus + "/vas/one_step.vas --query reach --init 0 --target 50 --cap 5");
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, OracleBpHalts) {
    EXPECT_NE(cli("oracle bp-halts " + kCorpus + "/bp/toggle.bp").out.find("halts"), std::string::npos);
    EXPECT_NE(cli("oracle bp-halts " + kCorpus + "/bp/aborts.bp").out.find("aborts"), std::string::npos);
}

TEST(Cli, ParseErrorsCarryLocation) {
    auto path = temp_file("bad.slcp", "vars: x\nguard: x >= 0\nupdate: x'' = 3\n");
    auto r = cli("parse " + path, true);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find(path + ":3:"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("frobnicate").code, 1);
    EXPECT_EQ(cli("verify " + loop_file("count_down")).code, 1);
    EXPECT_EQ(cli("verify " + loop_file("count_down") + " --rf q:1").code, 1);
    EXPECT_EQ(cli("synth /nonexistent.slcp").code, 1);
}

TEST(Cli, InvalidInvariantExitsTwo) {
    auto L = temp_file("up.slcp", "vars: x\npre: x = 0\nguard: x >= 0\nupdate: x' = x + 1\n");
    auto J = temp_file("neg.poly", "vars: x\nx <= 0\n");
    auto r = cli("--format record invariant-check " + L + " --invariant " + J);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"invalid"}));
    State a = parse_state(load_loop(L), field(r.out, "consecution-x").at(0));
    State b = parse_state(load_loop(L), field(r.out, "consecution-x'").at(0));
    EXPECT_TRUE(is_transition(load_loop(L), a, b));
    EXPECT_EQ(cli("verify " + L + " --rf x:1 --invariant " + J).code, 2);
}

TEST(Cli, KmAndInvariantKm) {
    auto r = cli("--format record km " + kCorpus + "/vas/one_step.vas --init 0");
    EXPECT_EQ(field(r.out, "dcs"), (std::vector<std::string>{"dim 1", "w"}));
    auto red = cli("reduce vas2loop " + kCorpus + "/vas/first_only.vas --mode positivity --init 0,0");
    ASSERT_EQ(red.code, 0);
    auto path = temp_file("pos.slcp", red.out);
    auto v = cli("--format record verify " + path + " --rf Y:1 --invariant km");
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(field(v.out, "verdict"), (std::vector<std::string>{"yes"}));
}

TEST(Cli, ReachabilityWarnsWithoutSentinel) {
    auto r = cli("reduce vas2loop " + kCorpus + "/vas/drain.vas --mode reachability --init 2 --target 0", true);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("warning:"), std::string::npos);
    auto s = cli("reduce vas2loop " + kCorpus + "/vas/drain.vas --mode reachability --init 2 --target 0 --sentinel", true);
    EXPECT_EQ(s.out.find("warning:"), std::string::npos);
}

TEST(Cli, SimulateLassoRechecks) {
    auto L = load_loop(loop_file("swap"));
    auto r = cli("--format record simulate " + loop_file("swap") + " --init x=1,y=0 --box -1:2 --steps 10");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "verdict"), (std::vector<std::string>{"cycle"}));
    auto cycle = field(r.out, "cycle").at(0);
    std::vector<State> states;
    std::size_t pos = 0;
    while (pos <= cycle.size()) {
        auto end = cycle.find(" ; ", pos);
        if (end == std::string::npos) end = cycle.size();
        states.push_back(parse_state(L, cycle.substr(pos, end - pos)));
        pos = end + 3;
    }
    ASSERT_EQ(states.size(), 2u);
    EXPECT_TRUE(is_transition(L, states[0], states[1]));
    EXPECT_TRUE(is_transition(L, states[1], states[0]));
}

TEST(Cli, SimulateSamplesDeterministicUnderSeed) {
    auto cmd = "--seed 5 simulate " + loop_file("count_down") + " --box -3:3 --steps 10 --samples 4";
    auto a = cli(cmd), b = cli(cmd);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, 0);
}

TEST(Cli, SynthesizedFunctionVerifies) {
    for (const char* name : {"sum_shift", "gap", "rat_halving", "nondet_step"}) {
        auto s = cli("--format record synth " + loop_file(name));
        auto rf = field(s.out, "rf").at(0);
        auto v = cli("--format record verify " + loop_file(name) + " --rf " + rf);
        EXPECT_EQ(field(v.out, "verdict"), (std::vector<std::string>{"yes"})) << name;
    }
}

TEST(Cli, ParseEmitsCanonicalForm) {
    auto r = cli("--format record parse " + kCorpus + "/lrs/fib.lrs");
    auto lines = field(r.out, "canonical");
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    EXPECT_EQ(text, emit_lrs(load_lrs(kCorpus + "/lrs/fib.lrs")));
}
