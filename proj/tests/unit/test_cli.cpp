#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pvarlab/cli.hpp"

using namespace pvarlab;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "pvarlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("pvarlab_unit_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, GenThenPvar) {
    const auto path = temp_path("tent.csv");
    ASSERT_EQ(run({"gen", "tent", "--n", "4", "--N", "64", "--out", path}).code, 0);
    const auto r = run({"pvar", "--p", "2", path});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("1.41421356", 0), 0u) << r.out;
    const auto g = run({"pvar", "--p", "2", "--grid", path, "--format", "json"});
    EXPECT_NE(g.out.find("\"value\""), std::string::npos);
    std::remove(path.c_str());
}

TEST(Cli, IntegralsRejectPOne) {
    const auto path = temp_path("sine.csv");
    ASSERT_EQ(run({"gen", "sine-product", "--N", "8", "--out", path}).code, 0);
    const auto r = run({"integrals", "--p", "1", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("p must exceed 1"), std::string::npos);
    const auto ok = run({"integrals", "--p", "2", path});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out.rfind("integral,lo,hi", 0), 0u);
    std::remove(path.c_str());
}

TEST(Cli, OtherSubcommands) {
    const auto path = temp_path("prod.csv");
    ASSERT_EQ(run({"gen", "sine-product", "--n", "1", "--m", "2", "--N", "8", "--out", path}).code, 0);
    EXPECT_EQ(run({"vitali", "--p", "2", path}).code, 0);
    EXPECT_EQ(run({"modulus", "--p", "2", path}).out.rfind("k,l,value", 0), 0u);
    EXPECT_EQ(run({"modulus", "--p", "2", "--kind", "iso", path}).out.rfind("k,delta,value", 0), 0u);
    EXPECT_EQ(run({"wp", "--p", "2", path, "--format", "json"}).code, 0);
    EXPECT_EQ(run({"sweep", "--family", "t1xt1", "--ps", "2"}).out.rfind("family,p,n,key,value", 0), 0u);
    std::remove(path.c_str());
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    const auto r = run({"verify", "--bogus"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
    EXPECT_EQ(run({"pvar", "--p", "2"}).code, 2);
    EXPECT_EQ(run({"gen", "nothing"}).code, 2);
    EXPECT_EQ(run({"pvar", "--p", "0.5", "x.csv"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "pvar", "x.csv"}).code, 2);
    EXPECT_EQ(run({"pvar", "--p", "2", temp_path("missing.csv")}).code, 1);
}

TEST(Cli, VerifyExitCodes) {
    const auto a = temp_path("a.json"), b = temp_path("b.json");
    EXPECT_EQ(run({"verify", "--suite", "sanity,lemmas", "--out", a}).code, 0);
    EXPECT_EQ(run({"verify", "--suite", "sanity,lemmas", "--out", b}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(run({"verify", "--suite", "sanity", "--inject-failure", "--out", a}).code, 1);
    std::remove(a.c_str());
    std::remove(b.c_str());
}
