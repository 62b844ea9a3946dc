#include "bimet/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace bimet;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BIMET_TEST_DATA) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& body) {
    std::string path = std::string(BIMET_TEST_TMP) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST_CASE("norm on the Graev F_1 file") {
    Result r = call({"norm", "--metric", data("graev_f1.fgm"), "--word", "a a a"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "3/1\n");
}

TEST_CASE("key lemma verify prints the bound and verdict") {
    Result r = call({"nonuniv", "verify", "--n", "2", "--bits", "0"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "from_below=6/1 bound=5/1 PASS\n");
}

TEST_CASE("dist between family prefixes differing at k = 1") {
    Result r = call({"dist", "--left", data("family_n2_bit0.fgm"), "--right", data("family_n2_bit1.fgm"), "--depth", "6"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("lo=1/6 hi=", 0) == 0);
}

TEST_CASE("json output parses") {
    Result r = call({"--json", "nonuniv", "separate", "--x", "00", "--y", "01"});
    REQUIRE(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["ratio"] == "1/6");
    CHECK(j["k"] == 2);
    CHECK(j["witness"] == "a a a a b b b b c c c c");
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == kExitUsage);
    CHECK(call({"norm", "--metric", "/nonexistent.fgm", "--word", "a"}).code == kExitUsage);
    CHECK(call({"norm", "--metric", data("graev_f1.fgm"), "--word", "q"}).code == kExitUsage);
    CHECK(call({"frobnicate"}).code == kExitUsage);
    std::string loose = temp_file("loose.fgm", "fgm v1\nrank = 1\nnames = a\na | 1 | 1\na a | 1 | 3\n");
    Result v = call({"validate", "--metric", loose});
    CHECK(v.code == kExitFailure);
    CHECK(v.out.rfind("INVALID pair", 0) == 0);
    std::string cfg = temp_file("tiny.cfg", "max_expansions = 20\n");
    Result b = call({"--config", cfg, "nonuniv", "verify", "--n", "4", "--bits", "0"});
    CHECK(b.code == kExitBudget);
    CHECK(b.err.find("upper bound") != std::string::npos);
    std::string badcfg = temp_file("bad.cfg", "workers = 0\n");
    CHECK(call({"--config", badcfg, "nonuniv", "verify", "--n", "2", "--bits", "0"}).code == kExitUsage);
}

TEST_CASE("format errors carry line numbers") {
    std::string broken = temp_file("broken.fgm", "fgm v1\nrank = 1\nnames = a\na | 1 | x\n");
    Result r = call({"norm", "--metric", broken, "--word", "a"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("chain commands round-trip through files") {
    std::string a = std::string(BIMET_TEST_TMP) + "/a.chain", b = std::string(BIMET_TEST_TMP) + "/b.chain";
    REQUIRE(call({"chain", "build", "--depth", "3", "--seed", "7", "--out", a}).code == kExitOk);
    REQUIRE(call({"chain", "build", "--depth", "3", "--seed", "11", "--out", b}).code == kExitOk);
    Result bnf = call({"chain", "bnf", "--a", a, "--b", b, "--depth", "2"});
    CHECK(bnf.code == kExitOk);
    CHECK(bnf.out.find("PASS") != std::string::npos);
    std::string target = temp_file("t.fgm", "fgm v1\nrank = 1\nnames = g\nbound = 1\ng | 1 | 1/8\n");
    Result e = call({"chain", "embed", "--chain", a, "--target", target, "--depth", "3"});
    CHECK(e.code == kExitOk);
    CHECK(e.out.find("stage 1: eps=1/4 drift=1/4") != std::string::npos);
}

TEST_CASE("approximations, amalgamation, extension, katetov") {
    std::string half = temp_file("half.fgm", "fgm v1\nrank = 1\nnames = a\nbound = 1\na | 1 | 1/2\n");
    Result n = call({"approx-n", "--metric", half, "--depth", "2"});
    CHECK(n.code == kExitOk);
    CHECK(n.out.rfind("fgm v1", 0) == 0);
    Result q = call({"approx-q", "--metric", half, "--epsilon", "1/4", "--denom-cap", "8"});
    CHECK(q.code == kExitOk);
    CHECK(q.out.find("# certificate lo=") != std::string::npos);
    Result j = call({"amalgamate", "--left", half, "--right", half});
    CHECK(j.code == kExitOk);
    CHECK(j.out.find("rank = 2") != std::string::npos);
    Result am = call({"amalgamate", "--base", half, "--left", half, "--right", half});
    CHECK(am.code == kExitOk);
    Result x = call({"extend", "--p1", half, "--p2", half, "--delta", "1/4"});
    CHECK(x.code == kExitOk);
    CHECK(x.out.find("# cross 1/4") != std::string::npos);
    Result k = call({"katetov", "--metric", half, "--point", "a", "--value", "1/2"});
    CHECK(k.code == kExitOk);
    CHECK(k.out.rfind("VERIFIED", 0) == 0);
    Result nk = call({"katetov", "--metric", half, "--point", "a", "--point", "1", "--value", "1", "--value", "1/8"});
    CHECK(nk.code == kExitFailure);
}

TEST_CASE("selftest filter and corrupted golden file") {
    Result ok = call({"selftest", "--only", "keylemma2"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("keylemma2") != std::string::npos);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(ok.out.find("graev") == std::string::npos);
    std::string bad = temp_file("golden.txt", "keylemma.n2.bit0 = 7/1\nkeylemma.n2.bit1 = 6/1\n");
    Result fail = call({"selftest", "--only", "keylemma2", "--golden", bad});
    CHECK(fail.code == kExitFailure);
    CHECK(fail.out.find("keylemma2") != std::string::npos);
    CHECK(fail.out.find("FAIL") != std::string::npos);
    CHECK(call({"selftest", "--only", "nonsense"}).code == kExitUsage);
}

TEST_CASE("verbosity logs elapsed time to stderr") {
    std::string cfg = temp_file("verbose.cfg", "verbosity = 1\n");
    Result r = call({"--config", cfg, "norm", "--metric", data("graev_f1.fgm"), "--word", "a"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "1/1\n");
    CHECK(r.err.rfind("elapsed ", 0) == 0);
}
