#include "bimet/corpus.hpp"
#include "bimet/fraisse.hpp"

#include <doctest.h>

using namespace bimet;

namespace {

ClassObject graev_one(const Rational& v, const Rational& K = Rational(1)) {
    GenSet gs(1);
    gs.set(Word::generator(1), Word(), v);
    return make_object(FinGenMetric(gs, K));
}

bool exact_on_ball(const Morphism& m, int depth) {
    for (const Word& w : enumerate_ball(m.source->rank(), depth))
        if (m.target->norm(m.apply(w)) != m.source->norm(w)) return false;
    return true;
}

} // namespace

TEST_CASE("joint embedding of two unit copies of Z has cross distance 1") {
    ClassObject z = graev_one(1);
    Amalgam am = joint_embedding(z, z);
    CHECK(am.object->rank() == 2);
    CHECK(am.object->dist(Word::generator(1), Word::generator(2)) == 1);
    CHECK(am.certified_depth == 3);
    CHECK(exact_on_ball(am.from_left, 4));
    CHECK(exact_on_ball(am.from_right, 4));
}

TEST_CASE("amalgamation over the whole factor returns the base") {
    ClassObject b = make_object(random_bounded_table(5, 2));
    Amalgam am = amalgamate(identity_prefix(b, b), identity_prefix(b, b));
    CHECK(am.object->rank() == 2);
    for (const Word& w : enumerate_ball(2, 3)) CHECK(am.object->norm(w) == b->norm(w));
}

TEST_CASE("amalgamation square commutes and factors stay exact") {
    for (std::uint64_t seed = 100; seed < 112; ++seed) {
        ClassObject base = make_object(random_bounded_table(seed, 1));
        ClassObject g1 = realize_katetov(base, random_katetov(*base, seed)).extended;
        ClassObject g2 = realize_katetov(base, random_katetov(*base, seed + 50)).extended;
        Morphism l = identity_prefix(base, g1), r = identity_prefix(base, g2);
        Amalgam am = amalgamate(l, r, 0);
        CHECK(compose(l, am.from_left).images == compose(r, am.from_right).images);
        CHECK(exact_on_ball(am.from_left, 3));
        CHECK(exact_on_ball(am.from_right, 3));
    }
}

TEST_CASE("amalgamation rejects mismatched bounds and bases") {
    ClassObject a = graev_one(Rational(1, 2)), b = graev_one(Rational(1, 2), Rational(2));
    CHECK_THROWS_AS(joint_embedding(a, b), Error);
    ClassObject c = graev_one(Rational(1, 3));
    CHECK_THROWS_AS(amalgamate(identity_prefix(a, a), identity_prefix(c, c)), Error);
}

TEST_CASE("extend_pair puts delta between matching generators") {
    ClassObject p = graev_one(Rational(1, 2));
    ExtendedPair ep = extend_pair(p, p, Rational(1, 4));
    REQUIRE(ep.cross.size() == 1);
    CHECK(ep.cross[0] == Rational(1, 4));
    CHECK(exact_on_ball(ep.from_p1, 4));
    CHECK(exact_on_ball(ep.from_p2, 4));
}

TEST_CASE("extend_pair clamps delta by metric consistency") {
    ClassObject p = graev_one(Rational(1, 8));
    ExtendedPair ep = extend_pair(p, p, Rational(1));
    CHECK(ep.cross[0] == Rational(1, 4));
    CHECK(ep.object->validate().valid);
}

TEST_CASE("extend_pair checks its preconditions") {
    ClassObject small = graev_one(Rational(1, 4)), large = graev_one(Rational(3, 4));
    CHECK_THROWS_AS(extend_pair(small, large, Rational(1)), Error);           // p1 < p2
    CHECK_THROWS_AS(extend_pair(large, small, Rational(1, 4)), Error);        // dist 1/2 > delta
    CHECK_NOTHROW(extend_pair(large, small, Rational(1, 2)));
}

TEST_CASE("class enumeration order and determinism") {
    auto objs = enumerate_class(Rational(1), {1, 1, 2, 3});
    REQUIRE(objs.size() == 2);
    CHECK(objs[0]->norm(Word::generator(1)) == 1);
    CHECK(objs[1]->norm(Word::generator(1)) == Rational(1, 2));
    auto wider = enumerate_class(Rational(1), {2, 2, 2, 7});
    auto again = enumerate_class(Rational(1), {2, 2, 2, 7});
    REQUIRE(wider.size() == again.size());
    for (std::size_t i = 0; i < wider.size(); ++i) {
        CHECK(wider[i]->validate().valid);
        for (const Word& w : enumerate_ball(wider[i]->rank(), 2)) CHECK(wider[i]->norm(w) == again[i]->norm(w));
        if (i) CHECK(wider[i - 1]->rank() <= wider[i]->rank());
    }
}

TEST_CASE("cantor unpairing enumerates the plane") {
    CHECK(cantor_unpair(0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
    CHECK(cantor_unpair(1) == std::pair<std::uint64_t, std::uint64_t>{1, 0});
    CHECK(cantor_unpair(2) == std::pair<std::uint64_t, std::uint64_t>{0, 1});
    CHECK(cantor_unpair(5) == std::pair<std::uint64_t, std::uint64_t>{0, 2});
}

TEST_CASE("chains keep old generators fixed") {
    Chain one = build_chain(Rational(1), 1, 0);
    REQUIRE(one.stages.size() == 1);
    CHECK(one.stages[0]->norm(Word::generator(1)) == 1);
    Chain a = build_chain(Rational(1), 4, 7), b = build_chain(Rational(1), 4, 12);
    for (const Chain* c : {&a, &b}) {
        REQUIRE(c->stages.size() == 4);
        for (const auto& r : c->requests) CHECK(r.certified);
        for (std::size_t i = 0; i < c->links.size(); ++i) {
            CHECK(is_isometric_to_depth(c->links[i], 2));
            for (std::size_t g = 0; g < c->links[i].images.size(); ++g)
                CHECK(c->links[i].images[g] == Word::generator(static_cast<int>(g) + 1));
        }
        CHECK(is_isometric_to_depth(chain_embedding(*c, 0), 2));
    }
    bool differ = a.requests.size() != b.requests.size();
    for (std::size_t i = 0; !differ && i < a.requests.size(); ++i)
        differ = a.requests[i].kind != b.requests[i].kind || a.requests[i].detail != b.requests[i].detail;
    CHECK(differ);
}

TEST_CASE("embedding a target drifts by exactly eps_n") {
    Chain c = build_chain(Rational(1), 2, 3);
    EmbedResult er = embed_target(graev_one(Rational(1, 8)), c, 4);
    REQUIRE(er.stages.size() == 4);
    CHECK(er.schedule[0] == Rational(1, 4));
    CHECK(er.restriction_checked);
    for (const auto& st : er.stages) {
        if (st.has_drift) CHECK(st.drift == st.epsilon);
        CHECK(st.closeness.lo == 0);
        // Stage image norm is within eps_1 of the target value.
        CHECK(rabs(c.stages[st.chain_stage]->norm(st.images[0]) - Rational(1, 8)) <= er.schedule[0]);
    }
    Chain wrong = build_chain(Rational(1), 1, 0);
    CHECK_THROWS_AS(embed_target(graev_one(Rational(1, 2), Rational(2)), wrong, 2), Error);
}

TEST_CASE("back and forth between a chain and itself has zero drift") {
    Chain a = build_chain(Rational(1), 3, 5);
    BackAndForthTrace tr = back_and_forth(a, a, 3);
    CHECK(tr.ok);
    for (const auto& st : tr.steps) {
        CHECK(st.drift == 0);
        CHECK(st.roundtrip_max_ratio == 0);
        CHECK(st.isometry.lo == 0);
    }
}

TEST_CASE("katetov realization") {
    ClassObject full = graev_one(1);
    KatetovReport r = realize_katetov(full, {{Word::generator(1)}, {Rational(1)}});
    CHECK(r.verified());
    CHECK(r.extended->dist(Word::generator(r.z), Word::generator(1)) == 1);
    CHECK_THROWS_AS(realize_katetov(full, {{Word::generator(1)}, {Rational(0)}}), Error);
    // |f(a) - f(1)| = 1 > d(a, 1) = 1/2 is not Katetov.
    ClassObject half = graev_one(Rational(1, 2));
    KatetovMap bad{{Word::generator(1), Word()}, {Rational(1), Rational(0) + Rational(1, 4) - Rational(1, 4) + Rational(1, 8)}};
    CHECK_FALSE(is_katetov(*half, bad));
    CHECK_THROWS_AS(realize_katetov(half, bad), Error);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ClassObject st = make_object(random_bounded_table(seed, 2));
        KatetovMap f = random_katetov(*st, seed);
        CHECK(realize_katetov(st, f, 3).verified());
    }
}
