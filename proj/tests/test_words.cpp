#include "bimet/words.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace bimet;

namespace {

// Independent oracle: every letter string of length <= n, kept when no letter is next to
// its inverse.
std::vector<std::vector<Letter>> naive_ball(int rank, int n) {
    std::vector<std::vector<Letter>> out{{}}, layer{{}};
    for (int len = 1; len <= n; ++len) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : layer)
            for (int g = 1; g <= rank; ++g)
                for (Letter l : {g, -g}) {
                    if (!w.empty() && w.back() == -l) continue;
                    auto v = w;
                    v.push_back(l);
                    next.push_back(v);
                }
        out.insert(out.end(), next.begin(), next.end());
        layer = next;
    }
    return out;
}

Word random_word(std::mt19937_64& rng, int rank, int max_len) {
    std::vector<Letter> raw;
    int len = static_cast<int>(rng() % (max_len + 1));
    for (int i = 0; i < len; ++i) {
        Letter g = 1 + static_cast<int>(rng() % rank);
        raw.push_back(rng() % 2 ? g : -g);
    }
    return Word::reduce(raw);
}

} // namespace

TEST_CASE("reduce cancels adjacent inverse pairs") {
    CHECK(Word::reduce({1, -1}).is_identity());
    CHECK(Word::reduce({1, 2, -2, -1, 3}).letters() == std::vector<Letter>{3});
    CHECK(Word::reduce({2, 1, -1, 1}).letters() == std::vector<Letter>{2, 1});
    CHECK_THROWS_AS(Word::reduce({0}), Error);
}

TEST_CASE("group laws on random words") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Word u = random_word(rng, 3, 6), v = random_word(rng, 3, 6), w = random_word(rng, 3, 6);
        CHECK(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)));
        CHECK(multiply(u, inverse(u)).is_identity());
        CHECK(inverse(multiply(u, v)) == multiply(inverse(v), inverse(u)));
        CHECK(power(u, 3) == multiply({u, u, u}));
        CHECK(power(u, -2) == inverse(multiply(u, u)));
    }
}

TEST_CASE("ball enumeration matches the naive oracle and the size formula") {
    for (int rank = 1; rank <= 3; ++rank)
        for (int n = 0; n <= 4; ++n) {
            auto ball = enumerate_ball(rank, n);
            auto naive = naive_ball(rank, n);
            CHECK(ball.size() == naive.size());
            CHECK(ball.size() == ball_size(rank, n));
            std::set<std::vector<Letter>> a, b(naive.begin(), naive.end());
            for (const Word& w : ball) a.insert(w.letters());
            CHECK(a == b);
            CHECK(std::is_sorted(ball.begin(), ball.end(), shortlex_less));
        }
    CHECK(ball_size(2, 3) == 53);
}

TEST_CASE("shortlex puts a before a^-1 before b") {
    Word a = Word::generator(1), b = Word::generator(2);
    CHECK(shortlex_less(a, inverse(a)));
    CHECK(shortlex_less(inverse(a), b));
    CHECK(shortlex_less(b, multiply(a, a)));
    CHECK_FALSE(shortlex_less(a, a));
}

TEST_CASE("canonical class decomposes and is a class invariant") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        Word w = random_word(rng, 2, 7);
        ClassForm cf = canonical_class(w);
        CHECK(multiply({cf.conj, power(cf.rep, cf.sign), inverse(cf.conj)}) == w);
        Word h = random_word(rng, 2, 3);
        Word key = class_key(w);
        CHECK(class_key(multiply({h, w, inverse(h)})) == key);
        CHECK(class_key(inverse(w)) == key);
        if (!w.is_identity()) {
            Word core = cyclic_core(w);
            CHECK(key.length() == core.length());
        }
    }
}

TEST_CASE("cyclic classes cover every class of the ball exactly once") {
    auto classes = enumerate_cyclic_classes(2, 4);
    std::set<std::vector<Letter>> keys;
    for (const Word& w : enumerate_ball(2, 4))
        if (!w.is_identity()) keys.insert(class_key(w).letters());
    std::set<std::vector<Letter>> listed;
    for (const Word& c : classes) listed.insert(c.letters());
    CHECK(listed == keys);
    CHECK(listed.size() == classes.size());
}

TEST_CASE("substitute is a homomorphism") {
    std::mt19937_64 rng(3);
    std::vector<Word> images{Word::reduce({1, 2}), Word::reduce({-2})};
    for (int i = 0; i < 200; ++i) {
        Word u = random_word(rng, 2, 5), v = random_word(rng, 2, 5);
        CHECK(substitute(images, multiply(u, v)) == multiply(substitute(images, u), substitute(images, v)));
    }
}

TEST_CASE("alphabet parses and formats") {
    Alphabet al(3);
    CHECK(al.format(al.parse("a b^-1 c^3")) == "a b^-1 c c c");
    CHECK(al.parse("1").is_identity());
    CHECK(al.format(Word()) == "1");
    CHECK(al.parse("a^-2").letters() == std::vector<Letter>{-1, -1});
    CHECK(al.parse("a a^-1 b") == Word::generator(2));
    CHECK_THROWS_AS(al.parse("d"), Error);
    CHECK_THROWS_AS(al.parse("a^x"), Error);
    Alphabet named({"x", "y"});
    CHECK(named.format(named.parse("y x^-1")) == "y x^-1");
    CHECK(default_names(2) == std::vector<std::string>{"a", "b"});
    CHECK(default_names(27)[26] == "g27");
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        Word w = random_word(rng, 3, 6);
        CHECK(al.parse(al.format(w)) == w);
    }
}

TEST_CASE("check_rank rejects high generators") {
    CHECK_NOTHROW(check_rank(Word::generator(2), 2));
    CHECK_THROWS_AS(check_rank(Word::generator(3), 2), RankMismatch);
}
