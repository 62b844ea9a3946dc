#include "bimet/corpus.hpp"
#include "bimet/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace bimet;

namespace {

int error_line(const std::string& text, FgmFile (*reader)(std::istream&)) {
    std::istringstream in(text);
    try {
        reader(in);
    } catch (const FormatError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("fgm round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        FinGenMetric m = random_bounded_table(seed, 1 + static_cast<int>(seed % 2));
        std::ostringstream out;
        write_fgm(out, m);
        std::istringstream in(out.str());
        FgmFile f = read_fgm(in);
        CHECK(f.names == default_names(m.rank()));
        CHECK(f.metric.bound() == m.bound());
        CHECK(f.metric.genset().defined_pairs().size() == m.genset().defined_pairs().size());
        for (auto [i, j] : m.genset().defined_pairs()) {
            const auto& E = m.genset().entries();
            CHECK(f.metric.genset().get(E[i], E[j]) == m.genset().at(i, j));
        }
        std::ostringstream again;
        write_fgm(again, f.metric, f.names);
        CHECK(again.str() == out.str());
    }
}

TEST_CASE("fgm reader reports line numbers") {
    CHECK(error_line("fgm v2\n", read_fgm) == 1);
    CHECK(error_line("fgm v1\nrank = 1\nnames = a b\n", read_fgm) == 3);
    CHECK(error_line("fgm v1\nrank = 1\nnames = a\na | 1 | 1/0\n", read_fgm) == 4);
    CHECK(error_line("fgm v1\nrank = 1\nnames = a\n# note\n\na | z | 1\n", read_fgm) == 6);
    CHECK(error_line("fgm v1\nrank = 1\nnames = a\na | 1 | 1\na^-1 | 1 | 2\n", read_fgm) == 5);
    CHECK(error_line("fgm v1\nrank = 2\nnames = a b\na | 1 | 1\n", read_fgm) > 0); // b | 1 missing
}

TEST_CASE("fgm accepts comments, powers and the bound") {
    std::istringstream in("# header\nfgm v1\nrank = 2\nnames = x y\nbound = 3/2\nx | 1 | 1 # unit\ny | 1 | 1\n"
                          "x^2 | y | 1/2\n");
    FgmFile f = read_fgm(in);
    CHECK(*f.metric.bound() == Rational(3, 2));
    Alphabet al(f.names);
    CHECK(*f.metric.genset().get(al.parse("x x"), al.parse("y")) == Rational(1, 2));
}

TEST_CASE("space round trip and errors") {
    PointedSpace s = random_space(4);
    std::ostringstream out;
    write_space(out, s);
    std::istringstream in(out.str());
    PointedSpace t = read_space(in);
    REQUIRE(t.size() == s.size());
    for (int i = 0; i <= s.size(); ++i)
        for (int j = 0; j <= s.size(); ++j) CHECK(t.d(i, j) == s.d(i, j));
    std::istringstream missing("space\npoint x\npoint y\nd 1 x 1\nd 1 y 1\n");
    CHECK_THROWS_AS(read_space(missing), FormatError);
    std::istringstream bad("space\npoint x\nd x q 1\n");
    try {
        read_space(bad);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("chain round trip") {
    Chain c = build_chain(Rational(1), 4, 7);
    std::ostringstream out;
    write_chain(out, c);
    std::istringstream in(out.str());
    Chain d = read_chain(in);
    CHECK(d.K == c.K);
    CHECK(d.seed == c.seed);
    REQUIRE(d.stages.size() == c.stages.size());
    REQUIRE(d.links.size() == c.links.size());
    for (std::size_t i = 0; i < c.links.size(); ++i) CHECK(d.links[i].images == c.links[i].images);
    REQUIRE(d.requests.size() == c.requests.size());
    for (std::size_t i = 0; i < c.requests.size(); ++i) {
        CHECK(d.requests[i].kind == c.requests[i].kind);
        CHECK(d.requests[i].detail == c.requests[i].detail);
        CHECK(d.requests[i].certified == c.requests[i].certified);
    }
    for (std::size_t i = 0; i < c.stages.size(); ++i)
        for (const Word& w : enumerate_ball(c.stages[i]->rank(), 2)) CHECK(d.stages[i]->norm(w) == c.stages[i]->norm(w));
    std::ostringstream again;
    write_chain(again, d);
    CHECK(again.str() == out.str());
}

TEST_CASE("chain reader diagnostics") {
    std::istringstream no_end("chain v1\nK = 1\nseed = 0\nfgm v1\nrank = 1\nnames = a\nbound = 1\na | 1 | 1\n");
    CHECK_THROWS_AS(read_chain(no_end), FormatError);
    std::istringstream bad_link("chain v1\nK = 1\nseed = 0\nfgm v1\nrank = 1\nnames = a\nbound = 1\na | 1 | 1\nend\n"
                                "link: a, b\nfgm v1\nrank = 1\nnames = a\nbound = 1\na | 1 | 1\nend\n");
    try {
        read_chain(bad_link);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 10);
    }
}
