#include "bimet/nonuniv.hpp"

#include <doctest.h>

using namespace bimet;

TEST_CASE("family letters and values") {
    CHECK(family_letter(2).letters() == std::vector<Letter>{1, 1, 2, 2, 3, 3});
    CHECK(family_value(4, 0) == 8);
    CHECK(family_value(4, 1) == 10);
    CHECK(BitPrefix::parse("01").bit(2) == 1);
    CHECK(BitPrefix::parse("01").str() == "01");
    CHECK_THROWS_AS(BitPrefix::parse("012"), Error);
}

TEST_CASE("family tables validate for every bit assignment up to n = 4") {
    for (const char* bits : {"00", "01", "10", "11"}) {
        CHECK(family_genset(2, BitPrefix::parse(bits)).validate().valid);
        CHECK(family_genset(4, BitPrefix::parse(bits)).validate().valid);
    }
}

TEST_CASE("literal cross rule gives the same norms but is not tight at bit 1") {
    BitPrefix one = BitPrefix::parse("1");
    FinGenMetric plain = family_genset(2, one), literal = family_genset(2, one, false, true);
    for (const Word& w : enumerate_ball(3, 3)) CHECK(plain.norm(w) == literal.norm(w));
    CHECK(plain.norm(family_letter(2)) == literal.norm(family_letter(2)));
    CHECK_FALSE(literal.validate().valid);
}

TEST_CASE("key lemma at n = 2 and n = 4") {
    KeyLemmaReport r2 = verify_keylemma(2, BitPrefix::parse("0"));
    CHECK(r2.from_below == 6);
    CHECK(r2.bound == 5);
    CHECK(r2.pass);
    KeyLemmaReport r4 = verify_keylemma(4, BitPrefix::parse("0"));
    CHECK(r4.from_below == 10);
    CHECK(r4.pass);
    CHECK(r4.both_values_admissible);
    auto [top, bottom] = endpoints(r4.witness);
    CHECK(top == family_letter(4));
    CHECK(bottom.is_identity());
    CHECK(verify_keylemma(4, BitPrefix::parse("1")).from_below == 11);
}

TEST_CASE("the hand-expanded n = 4 certificate") {
    Decomposition c = keylemma_certificate_n4();
    FinGenMetric below = family_genset(4, BitPrefix::parse("0"), true);
    auto [top, bottom] = endpoints(c);
    CHECK(top == family_letter(4));
    CHECK(bottom.is_identity());
    CHECK(c.pairs.size() == 11);
    CHECK(decomposition_cost(below, c) == 10);
}

TEST_CASE("a starved search overflows with an upper bound") {
    FinGenMetric below = family_genset(4, BitPrefix::parse("0"), true);
    SearchOptions tiny;
    tiny.max_expansions = 50;
    FinGenMetric starved(below.genset(), std::nullopt, tiny);
    try {
        (void)starved.norm(family_letter(4));
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.upper_bound() >= 10);
    }
}

TEST_CASE("separation ratio is 1/6 for adjacent values") {
    for (const auto& [x, y, k] : {std::tuple{"0", "1", 1}, std::tuple{"00", "01", 2}, std::tuple{"10", "11", 2}}) {
        SeparationCertificate s = separation_witness(BitPrefix::parse(x), BitPrefix::parse(y));
        CHECK(s.k == k);
        CHECK(s.ratio == Rational(1, 6));
        CHECK(s.witness == family_letter(1 << k));
    }
    CHECK_THROWS_AS(separation_witness(BitPrefix::parse("0"), BitPrefix::parse("0")), Error);
}

TEST_CASE("family norm is discrete") {
    FinGenMetric m = family_genset(2, BitPrefix::parse("1"));
    Rational least = -1;
    for (const Word& w : enumerate_ball(3, 3))
        if (!w.is_identity()) least = least < 0 ? m.norm(w) : rmin(least, m.norm(w));
    CHECK(least == m.min_positive_value());
}

TEST_CASE("packing check on identical embeddings") {
    auto fam = std::make_shared<const FinGenMetric>(family_genset(2, BitPrefix::parse("0")));
    MetricOracle G = MetricOracle::from_metric(fam);
    std::array<Word, 3> id{Word::generator(1), Word::generator(2), Word::generator(3)};
    PackingReport p = packing_check(G, id, id, 2, &G, &G);
    CHECK(p.S == 0);
    CHECK(p.bound_holds);
    CHECK(p.isometric0.value());
    CHECK_FALSE(p.contradiction);
}
