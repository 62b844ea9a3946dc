#include "bimet/corpus.hpp"
#include "bimet/metspace.hpp"

#include <doctest.h>

using namespace bimet;

namespace {

std::shared_ptr<const FinGenMetric> graev_one(const Rational& v, std::optional<Rational> K = std::nullopt) {
    GenSet gs(1);
    gs.set(Word::generator(1), Word(), v);
    return std::make_shared<const FinGenMetric>(gs, K);
}

// Independent oracle: scan p/q for q <= cap in increasing value order.
std::optional<Rational> scan_fraction(const Rational& lo, const Rational& hi, std::int64_t cap) {
    std::optional<Rational> best;
    for (std::int64_t q = 1; q <= cap; ++q)
        for (std::int64_t p = 0; Rational(p, q) <= hi; ++p)
            if (Rational(p, q) >= lo && (!best || Rational(p, q) < *best)) best = Rational(p, q);
    return best;
}

} // namespace

TEST_CASE("smallest fraction agrees with a scan") {
    for (std::int64_t a = 0; a < 12; ++a)
        for (std::int64_t w = 1; w < 6; ++w) {
            Rational lo(a, 7), hi = lo + Rational(w, 29);
            CHECK(smallest_fraction_in(lo, hi, 9) == scan_fraction(lo, hi, 9));
        }
    CHECK_FALSE(smallest_fraction_in(Rational(1, 97), Rational(1, 96), 8).has_value());
}

TEST_CASE("oracle plumbing: tabulate, restrict, pullback") {
    MetricOracle d = MetricOracle::from_metric(graev_one(Rational(1, 2)));
    MetricOracle t = tabulate(d, 3);
    CHECK(t.norm(power(Word::generator(1), 3)) == Rational(3, 2));
    CHECK_THROWS_AS(t.norm(power(Word::generator(1), 4)), Error);
    MetricOracle pb = pullback(d, {power(Word::generator(1), 2)});
    CHECK(pb.norm(Word::generator(1)) == 1);
    CHECK_THROWS_AS(restrict_rank(d, 2), RankMismatch);
    CHECK(d.norm(Word()) == 0);
}

TEST_CASE("dist of a metric with itself is zero") {
    auto m = std::make_shared<const FinGenMetric>(random_bounded_table(3, 2));
    MetricOracle o = MetricOracle::from_metric(m);
    DistInterval di = dist_interval(o, o, 3);
    CHECK(di.lo == 0);
    CHECK(di.exhaustive);
    REQUIRE(di.hi);
    CHECK(*di.hi == Rational(1, 3));
}

TEST_CASE("dist picks the worst normalized class") {
    MetricOracle x = MetricOracle::from_metric(graev_one(1)), y = MetricOracle::from_metric(graev_one(Rational(1, 2)));
    DistInterval di = dist_interval(x, y, 4);
    CHECK(di.lo == Rational(1, 2));
    CHECK_FALSE(di.hi.has_value());
    CHECK(di.witness == Word::generator(1));
}

TEST_CASE("n-approximation agrees on the ball") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        int rank = 1 + static_cast<int>(seed % 2);
        auto m = std::make_shared<const FinGenMetric>(random_bounded_table(seed, rank));
        MetricOracle d = MetricOracle::from_metric(m);
        FinGenMetric p = n_approximation(d, 2);
        for (const Word& w : enumerate_ball(rank, 2)) CHECK(p.norm(w) == d.norm(w));
        // Outside the ball p can only be larger: its table is d's own values.
        for (const Word& w : enumerate_ball(rank, 3)) CHECK(p.norm(w) >= d.norm(w));
    }
    CHECK_THROWS_AS(n_approximation(MetricOracle::from_metric(graev_one(1)), 2), Error);
}

TEST_CASE("rational approximation dominates and respects the cap") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        FinGenMetric p = random_bounded_table(seed, 1 + static_cast<int>(seed % 2), Rational(1), 31);
        RationalApproximation ra = rational_approximation(p, Rational(1, 3), 200);
        CHECK(ra.metric.validate().valid);
        CHECK(ra.max_denominator <= 200);
        for (const Word& w : enumerate_ball(p.rank(), 3)) CHECK(ra.metric.norm(w) >= p.norm(w));
        REQUIRE(ra.certificate);
        CHECK(*ra.certificate->hi <= Rational(1, 3));
    }
}

TEST_CASE("rational approximation reports the cap it needs") {
    GenSet gs(1);
    gs.set(Word::generator(1), Word(), Rational(1, 97));
    FinGenMetric p(gs, Rational(1));
    try {
        (void)rational_approximation(p, Rational(1, 10000), 50);
        FAIL("expected a cap error");
    } catch (const DenominatorCapError& e) {
        CHECK(e.min_cap() > 50);
        CHECK_NOTHROW((void)rational_approximation(p, Rational(1, 10000), e.min_cap()));
    }
}

TEST_CASE("epsilon schedule") {
    MetricOracle d = MetricOracle::from_metric(graev_one(Rational(1, 8), Rational(1)));
    auto e = epsilon_schedule(d, 4);
    CHECK(e == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 8), Rational(1, 16)});
    MetricOracle big = MetricOracle::from_metric(graev_one(1, Rational(1)));
    CHECK(epsilon_schedule(big, 1)[0] == Rational(1, 2));
}

TEST_CASE("int_dist is the largest generator displacement") {
    auto m = graev_one(1);
    MetricOracle o = MetricOracle::from_metric(m);
    Word a = Word::generator(1);
    CHECK(int_dist(o, {a}, {a}) == 0);
    CHECK(int_dist(o, {a}, {power(a, 3)}) == 2);
    CHECK_THROWS_AS(int_dist(o, {a}, {}), Error);
}
