#include "oracles.hpp"
#include "qgroot/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>

#include <sys/wait.h>

using namespace qgroot;
using cli::Json;

namespace {
cli::Result job(const char* text) { return cli::run(std::string(text)); }
}  // namespace

TEST(Cli, DocumentedExamples) {
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"alcove"})").text(), "{\"alcove\":[[0],[1],[2],[3]]}\n");
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"blocks","weights":[[1],[1],[2]]})").text(), "{\"dim\":1}\n");
    auto s = job(R"({"matrix":[[2]],"l":10,"cmd":"simple","weight":[3]})");
    EXPECT_EQ(s.exit_code, 0);
    EXPECT_EQ(s.body.at("dim"), 4);
    EXPECT_EQ(s.body.at("char").size(), 4u);
}

TEST(Cli, KeyOrderIsFixed) {
    auto r = job(R"({"cmd":"ribbon","weight":[1],"l":5,"matrix":[[2]]})");
    EXPECT_EQ(r.text(),
              "{\"n\":\"-7/4\",\"balance_exponent\":13,\"braiding_exponent\":2,\"central_charge_exponent\":6,"
              "\"tangent_exponent\":14,\"modulus\":20}\n");
}

TEST(Cli, RationalWeights) {
    auto r = job(R"({"matrix":[[2]],"l":5,"cmd":"ribbon","weight":["1/2"]})");
    EXPECT_EQ(r.exit_code, 1);  // not in X_ell
    auto ok = job(R"({"matrix":[[2,-1],[-1,2]],"l":6,"cmd":"ribbon","weight":[1,0],"mu":["0","1"]})");
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(ok.body.at("braiding_exponent"), 2);
}

TEST(Cli, MalformedConfigsExitTwo) {
    EXPECT_EQ(job("{not json").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10})").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"nope"})").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"alcove","extra":1})").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"radical"})").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":"ten","cmd":"alcove"})").exit_code, 2);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"monodromy","nu":[1],"flavour":"K"})").exit_code, 2);
    EXPECT_EQ(job("[1,2]").exit_code, 2);
}

TEST(Cli, PreconditionFailuresExitOne) {
    auto r = job(R"({"matrix":[[2]],"l":1,"cmd":"alcove"})");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(r.body.contains("error"));
    EXPECT_EQ(job(R"({"matrix":[[2,1],[1,2]],"l":10,"cmd":"alcove"})").exit_code, 1);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"wzw-compare","kappa":4})").exit_code, 1);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"shuffle-dims","degree_cap":2})").exit_code, 1);
    EXPECT_EQ(job(R"({"matrix":[[2]],"l":10,"cmd":"monodromy","nu":[0]})").exit_code, 1);
}

TEST(Cli, ContextWarningsOnlyWhenPresent) {
    EXPECT_FALSE(job(R"({"matrix":[[2]],"l":10,"cmd":"alcove"})").body.contains("context_warnings"));
    EXPECT_TRUE(job(R"({"matrix":[[2]],"l":6,"cmd":"alcove"})").body.contains("context_warnings"));
}

TEST(Cli, MonodromyModes) {
    auto one = job(R"({"matrix":[[2]],"l":10,"cmd":"monodromy","nu":[2],"mu":[1]})");
    EXPECT_EQ(one.body.at("relations_hold"), true);
    EXPECT_EQ(one.body.at("generators").at("g@0,0"), Json::array({8, 40}));
    auto two = job(R"({"matrix":[[2]],"l":10,"cmd":"monodromy","nu":[1],"mu1":[1],"mu2":[1]})");
    EXPECT_EQ(two.body.at("fusion_degeneration"), true);
    EXPECT_EQ(two.body.at("z_loop"), Json::array({36, 40}));
}

TEST(Cli, RunIsDeterministic) {
    const char* cfg = R"({"matrix":[[2,-1],[-1,2]],"l":10,"cmd":"shuffle-dims"})";
    EXPECT_EQ(job(cfg).text(), job(cfg).text());
}

TEST(Cli, BinaryReadsStdinAndInline) {
    const std::string bin = QGROOT_CLI_PATH;
    auto capture = [](const std::string& cmd, int& code) {
        FILE* p = popen(cmd.c_str(), "r");
        std::string out;
        char buf[512];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
        const int st = pclose(p);
        code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
        return out;
    };
    int code = -1;
    auto a = capture("echo '{\"matrix\":[[2]],\"l\":10,\"cmd\":\"alcove\"}' | \"" + bin + "\" -", code);
    EXPECT_EQ(code, 0);
    EXPECT_EQ(a, "{\"alcove\":[[0],[1],[2],[3]]}\n");
    auto b = capture("\"" + bin + "\" --json '{\"matrix\":[[2]],\"l\":10,\"cmd\":\"alcove\"}'", code);
    EXPECT_EQ(code, 0);
    EXPECT_EQ(a, b);
    capture("\"" + bin + "\" /nonexistent/config.json 2>/dev/null", code);
    EXPECT_EQ(code, 2);
}
