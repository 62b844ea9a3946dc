#include "bimet/corpus.hpp"
#include "bimet/fingen.hpp"
#include "bimet/graev.hpp"

#include <doctest.h>

#include <functional>

using namespace bimet;

namespace {

// Independent oracle: enumerate all involutions on positions, keep the non-crossing
// ones, and price them with a locally written rho.
Rational oracle_norm(const Word& w, const PointedSpace& s) {
    const auto& L = w.letters();
    const int k = static_cast<int>(L.size());
    auto pt = [](Letter l) { return l > 0 ? l : -l; };
    auto rho = [&](Letter x, Letter y) -> Rational { // letters; 0 = basepoint
        if (x == 0 && y == 0) return 0;
        if (x == 0) return s.d(0, pt(y));
        if (y == 0) return s.d(pt(x), 0);
        if ((x > 0) == (y > 0)) return s.d(pt(x), pt(y));
        return s.d(pt(x), 0) + s.d(0, pt(y));
    };
    std::vector<int> theta(k, -1);
    Rational best = -1;
    std::function<void(int)> rec = [&](int i) {
        if (i == k) {
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    int c = theta[a], d = theta[b];
                    if (a < c && b < d && a < b && b < c && c < d) return; // crossing
                }
            Rational cost = 0;
            for (int a = 0; a < k; ++a) {
                if (theta[a] == a) cost += rho(L[a], 0);
                else if (a < theta[a]) cost += rho(L[a], -L[theta[a]]);
            }
            if (best < 0 || cost < best) best = cost;
            return;
        }
        if (theta[i] != -1) return rec(i + 1);
        theta[i] = i;
        rec(i + 1);
        for (int j = i + 1; j < k; ++j)
            if (theta[j] == -1) {
                theta[i] = j;
                theta[j] = i;
                rec(i + 1);
                theta[j] = -1;
            }
        theta[i] = -1;
    };
    rec(0);
    return best < 0 ? Rational(0) : best;
}

PointedSpace two_points() {
    // 1 -- x: 1, 1 -- y: 2, x -- y: 2
    return PointedSpace({"x", "y"}, {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}});
}

} // namespace

TEST_CASE("pointed space rejects non-metrics") {
    CHECK_THROWS_AS(PointedSpace({"x"}, {{0, 0}, {0, 0}}), Error);
    CHECK_THROWS_AS(PointedSpace({"x", "y"}, {{0, 1, 1}, {1, 0, 3}, {1, 3, 0}}), Error);
    CHECK_THROWS_AS(PointedSpace({"x"}, {{0, 1}, {2, 0}}), Error);
}

TEST_CASE("non-crossing match counts are Motzkin numbers") {
    const std::size_t motzkin[] = {1, 1, 2, 4, 9, 21, 51, 127};
    for (int k = 0; k < 8; ++k) CHECK(enumerate_matches(k).size() == motzkin[k]);
    CHECK_THROWS_AS(enumerate_matches(kMatchCap + 1), Error);
}

TEST_CASE("graev norm on a single point is length times distance") {
    PointedSpace s({"x"}, {{0, Rational(1, 3)}, {Rational(1, 3), 0}});
    Word x = Word::generator(1);
    for (int k = -5; k <= 5; ++k) CHECK(graev_norm(power(x, k), s) == Rational(std::abs(k), 3));
}

TEST_CASE("graev metric extends the space metric") {
    PointedSpace s = two_points();
    Word x = Word::generator(1), y = Word::generator(2);
    CHECK(graev_dist(x, y, s) == 2);
    CHECK(graev_norm(x, s) == 1);
    CHECK(graev_norm(y, s) == 2);
    // x y^-1 pairs x with y at cost 2, cheaper than 1 + 2.
    CHECK(graev_norm(multiply(x, inverse(y)), s) == 2);
    // Conjugates cancel: x y x^-1 costs as much as y.
    CHECK(graev_norm(multiply({x, y, inverse(x)}), s) == 2);
}

TEST_CASE("interval DP agrees with the independent match oracle") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        PointedSpace s = random_space(seed);
        for (const Word& w : enumerate_ball(s.size(), 5)) REQUIRE(graev_norm(w, s) == oracle_norm(w, s));
    }
}

TEST_CASE("graev norm is a finitely generated metric with A = points and 1") {
    // The Graev metric is generated by rho on generators, inverses and 1.
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        PointedSpace s = random_space(seed);
        GenSet gs(s.size());
        for (int i = 1; i <= s.size(); ++i) {
            gs.set(Word::generator(i), Word(), s.d(i, 0));
            for (int j = i + 1; j <= s.size(); ++j) {
                gs.set(Word::generator(i), Word::generator(j), s.d(i, j));
                gs.set(Word::generator(i), inverse(Word::generator(j)), s.d(i, 0) + s.d(0, j));
            }
            gs.set(Word::generator(i), inverse(Word::generator(i)), 2 * s.d(i, 0));
        }
        FinGenMetric m(gs);
        for (const Word& w : enumerate_ball(s.size(), 4)) REQUIRE(m.norm(w) == graev_norm(w, s));
    }
}

TEST_CASE("graev norm is bi-invariant on random spaces") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PointedSpace s = random_space(seed);
        auto ball = enumerate_ball(s.size(), 3);
        for (const Word& g : ball) {
            CHECK(graev_norm(inverse(g), s) == graev_norm(g, s));
            for (int i = 1; i <= s.size(); ++i) {
                Word h = Word::generator(i);
                CHECK(graev_norm(multiply({h, g, inverse(h)}), s) == graev_norm(g, s));
            }
        }
        for (const Word& g : enumerate_ball(s.size(), 2))
            for (const Word& h : enumerate_ball(s.size(), 2))
                CHECK(graev_norm(multiply(g, h), s) <= graev_norm(g, s) + graev_norm(h, s));
    }
}
