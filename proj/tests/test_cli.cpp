#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "corpus.hpp"
#include "nlohmann/json.hpp"

using namespace linf;
using namespace linf::cli;
using json = nlohmann::json;

namespace {

std::string fixture_dir() {
    const char* d = std::getenv("LINF_FIXTURES");
    return d ? d : "tests/fixtures";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string& name) { return read_file(fixture_dir() + "/" + name + ".json"); }

Outcome run_command(const std::string& command, const std::string& text, std::optional<int> cap = {}) {
    Options o;
    o.command = command;
    o.spec_path = "spec.json";
    o.cap = cap;
    return run(o, text);
}

struct Shell {
    int code;
    std::string out;
};

Shell shell(const std::string& args) {
    const char* bin = std::getenv("LINF_BIN");
    Shell s{-1, ""};
    if (!bin) return s;
    FILE* p = popen((std::string(bin) + " " + args + " 2>&1").c_str(), "r");
    std::array<char, 4096> buf;
    while (size_t n = fread(buf.data(), 1, buf.size(), p)) s.out.append(buf.data(), n);
    int status = pclose(p);
    s.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return s;
}

DglaSpec spec_of(const DGLA& L) {
    DglaSpec s;
    s.basis = L.space.basis();
    for (int i = 0; i < L.space.dim(); ++i)
        for (const auto& [j, c] : L.d.column(i)) s.d.push_back({L.space.name(i), L.space.name(j), c});
    for (const auto& [key, v] : L.bracket.coeffs())
        for (const auto& [t, c] : v) s.bracket.push_back({L.space.name(key[0]), L.space.name(key[1]), L.space.name(t), c});
    return s;
}

MultiMap component(const json& table, int arity, const GradedSpace& src, const GradedSpace& tgt, int degree) {
    MultiMap m(src, tgt, arity, degree, Flavor::Antisymmetric);
    for (const auto& e : table.at(arity - 1).at("entries")) {
        std::vector<int> args;
        for (const auto& a : e.at("args")) args.push_back(src.index_of(a.get<std::string>()));
        m.add(args, unit(tgt.index_of(e.at("target").get<std::string>())), parse_scalar(e.at("coefficient").get<std::string>()));
    }
    return m;
}

}  // namespace

TEST(SpecParsing, AcceptsMinimalForms) {
    auto r = parse_spec(R"({"basis":[{"name":"x","degree":0}],"d":[],"bracket":[]})");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.spec->cap, 4);
    EXPECT_FALSE(r.spec->given_eta().has_value());
    EXPECT_TRUE(validate_dgla(r.spec->dgla()).valid);
}

TEST(SpecParsing, RejectsWithLocatedDiagnostics) {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        auto r = parse_spec(text);
        ASSERT_FALSE(r.ok()) << text;
        ASSERT_FALSE(r.errors.empty());
        bool found = false;
        for (const auto& e : r.errors) found = found || (e.where + ": " + e.message).find(needle) != std::string::npos;
        EXPECT_TRUE(found) << needle << " in " << r.errors[0].where << ": " << r.errors[0].message;
    };
    expect_error("{\"basis\": [", "json");
    expect_error(R"({"basis":[{"name":"x","degree":0}],"d":[{"from":"x","to":"y","coefficient":"1/1"}],"bracket":[]})",
                 "y");
    expect_error(R"({"basis":[{"name":"x","degree":0},{"name":"y","degree":0}],"d":[{"from":"x","to":"y","coefficient":"1/1"}],"bracket":[]})",
                 "d[0]");
    expect_error(R"({"basis":[{"name":"x","degree":0},{"name":"y","degree":1}],"d":[{"from":"x","to":"y","coefficient":"0.5"}],"bracket":[]})",
                 "coefficient");
    expect_error(R"({"basis":[{"name":"x","degree":0},{"name":"x","degree":1}],"d":[],"bracket":[]})", "duplicate");
    expect_error(fixture("bad_dsquared"), "d squared");
    expect_error(fixture("bad_dsquared"), "witness");
}

TEST(SpecParsing, SerializeRoundTrip) {
    for (const auto& name : {"split4", "abelian", "sl2", "weighted"}) {
        auto r = parse_spec(fixture(name));
        ASSERT_TRUE(r.ok()) << name;
        auto again = parse_spec(serialize_spec(*r.spec));
        ASSERT_TRUE(again.ok()) << name;
        EXPECT_EQ(*again.spec, *r.spec) << name;
        EXPECT_EQ(serialize_spec(*again.spec), serialize_spec(*r.spec));
    }
    for (const auto& s : linf::testing::corpus(12)) {
        DglaSpec spec = spec_of(s.L);
        auto r = parse_spec(serialize_spec(spec));
        ASSERT_TRUE(r.ok()) << s.label;
        EXPECT_EQ(r.spec->dgla().d, s.L.d);
        EXPECT_EQ(r.spec->dgla().bracket, s.L.bracket);
        EXPECT_EQ(*parse_spec(serialize_spec(*r.spec)).spec, *r.spec);
    }
}

TEST(Commands, AbelianTransferIsLinear) {
    auto o = run_command("transfer", fixture("abelian"));
    ASSERT_EQ(o.exit_code, 0) << o.err;
    auto r = json::parse(o.out);
    EXPECT_EQ(r["status"], "PASS");
    EXPECT_EQ(r["normalization"], "raw-corrected");
    for (int n = 2; n <= 4; ++n) EXPECT_TRUE(r["mu"][n - 1]["entries"].empty());
}

TEST(Commands, VanishingDifferentialKeepsTheBracket) {
    auto parsed = parse_spec(fixture("sl2"));
    ASSERT_TRUE(parsed.ok());
    DGLA L = parsed.spec->dgla();
    ASSERT_TRUE(L.d.is_zero());
    auto o = run_command("transfer", fixture("sl2"));
    ASSERT_EQ(o.exit_code, 0) << o.err;
    auto r = json::parse(o.out);
    EXPECT_EQ(r["status"], "PASS");
    size_t bracket_entries = 0;
    for (const auto& [key, v] : L.bracket.coeffs()) bracket_entries += v.size();
    EXPECT_EQ(r["mu"][1]["entries"].size(), bracket_entries);
    for (int n = 3; n <= 4; ++n) EXPECT_TRUE(r["mu"][n - 1]["entries"].empty());
}

TEST(Commands, SplitFixtureMatchesTheRecursionOracle) {
    auto parsed = parse_spec(fixture("split4"));
    ASSERT_TRUE(parsed.ok());
    DGLA L = parsed.spec->dgla();
    Splitting eta = build_splitting(L);
    auto h = hodge(L, eta);
    auto rec = transfer_recursive(L, eta, 4);
    auto o = run_command("transfer", fixture("split4"));
    ASSERT_EQ(o.exit_code, 0) << o.err;
    auto r = json::parse(o.out);
    EXPECT_EQ(r["status"], "PASS");
    std::vector<BasisElement> hb;
    for (int i = 0; i < h.H.dim(); ++i) hb.push_back({"H." + L.space.name(h.H_basis[i].begin()->first), h.H.degree(i)});
    GradedSpace H(hb);
    for (int n = 2; n <= 4; ++n) {
        MultiMap m = component(r["mu"], n, H, H, 2 - n);
        MultiMap expected = rec.mu.at(n);
        EXPECT_EQ(m.coeffs(), expected.coeffs()) << "n=" << n;
    }
    EXPECT_FALSE(r["mu"][2]["entries"].empty());
    for (const char* cmd : {"check", "invert"}) EXPECT_EQ(run_command(cmd, fixture("split4")).exit_code, 0) << cmd;
}

TEST(Commands, ExitCodes) {
    EXPECT_EQ(run_command("check", fixture("bad_dsquared")).exit_code, 2);
    EXPECT_EQ(run_command("transfer", fixture("split4"), 9).exit_code, 2);
    EXPECT_EQ(run_command("kuranishi", fixture("split4")).exit_code, 2);
    EXPECT_EQ(run_command("nonsense", fixture("split4")).exit_code, 2);
    Options k;
    k.command = "kuranishi";
    k.point = "1/2";
    EXPECT_EQ(run(k, fixture("split4")).exit_code, 0);
    k.point = "1/2,1";
    EXPECT_EQ(run(k, fixture("split4")).exit_code, 2);

    // Some corpus model violates a printed bound; the report then fails with exit code 1.
    std::mt19937_64 rng(61);
    int failures = 0, passes = 0;
    for (const auto& s : linf::testing::corpus()) {
        DglaSpec spec = spec_of(s.L);
        spec.eta.emplace();
        for (int i = 0; i < s.L.space.dim(); ++i)
            for (const auto& [j, c] : s.eta.eta.column(i)) spec.eta->push_back({s.L.space.name(i), s.L.space.name(j), c});
        NormSpec n;
        for (int i = 0; i < s.L.space.dim(); ++i)
            n.weights.push_back(Scalar(static_cast<int>(1 + rng() % 4), static_cast<int>(1 + rng() % 3)));
        spec.norm = n;
        auto o = run_command("bounds", serialize_spec(spec));
        ASSERT_NE(o.exit_code, 2) << s.label << o.err;
        auto r = json::parse(o.out);
        EXPECT_EQ(r["status"], o.exit_code == 0 ? "PASS" : "FAILED");
        (o.exit_code == 0 ? passes : failures)++;
    }
    EXPECT_GT(failures, 0);
    EXPECT_GT(passes, 0);
}

TEST(Commands, TextOutputAndTiming) {
    Options o;
    o.command = "check";
    o.output = "text";
    auto t = run(o, fixture("split4"));
    EXPECT_EQ(t.exit_code, 0);
    EXPECT_NE(t.out.find("status: PASS"), std::string::npos);
    EXPECT_EQ(json::parse(run_command("check", fixture("split4")).out).count("timing_ms"), 0u);
    o.output = "json";
    o.timing = true;
    EXPECT_EQ(json::parse(run(o, fixture("split4")).out).count("timing_ms"), 1u);
}

TEST(Binary, RepeatedRunsAreByteIdentical) {
    if (!std::getenv("LINF_BIN")) GTEST_SKIP() << "LINF_BIN not set";
    std::string dir = fixture_dir();
    for (const auto& name : {"split4", "abelian", "sl2", "weighted"})
        for (const auto& cmd : {"check", "transfer", "invert", "bounds"}) {
            std::string args = std::string(cmd) + " " + dir + "/" + name + ".json";
            auto a = shell(args), b = shell(args);
            EXPECT_EQ(a.code, 0) << args << "\n" << a.out;
            EXPECT_EQ(a.out, b.out) << args;
        }
    auto k1 = shell("kuranishi " + dir + "/split4.json --point 1/3"), k2 = shell("kuranishi " + dir + "/split4.json --point 1/3");
    EXPECT_EQ(k1.code, 0);
    EXPECT_EQ(k1.out, k2.out);
}

TEST(Binary, ExitCodesAndDiagnostics) {
    if (!std::getenv("LINF_BIN")) GTEST_SKIP() << "LINF_BIN not set";
    std::string dir = fixture_dir();
    auto bad = shell("check " + dir + "/bad_dsquared.json");
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("d squared"), std::string::npos);
    EXPECT_EQ(shell("check " + dir + "/missing.json").code, 2);
    EXPECT_EQ(shell("transfer").code, 2);
    EXPECT_EQ(shell("frobnicate " + dir + "/split4.json").code, 2);
    EXPECT_EQ(shell("transfer " + dir + "/split4.json --cap x").code, 2);
    EXPECT_EQ(shell("bounds " + dir + "/split4.json --eps 3/2").code, 2);
}
