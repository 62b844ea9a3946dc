#include "bimet/corpus.hpp"

#include <algorithm>
#include <random>

namespace bimet {

namespace {

Rational draw(std::mt19937_64& rng, std::int64_t max_num_per_den, std::int64_t max_den = 4) {
    std::int64_t q = 1 + static_cast<std::int64_t>(rng() % max_den);
    std::int64_t p = 1 + static_cast<std::int64_t>(rng() % (max_num_per_den * q));
    return Rational(p, q);
}

} // namespace

PointedSpace random_space(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<Rational>> d(k + 1, std::vector<Rational>(k + 1, Rational(0)));
    for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) d[i][j] = d[j][i] = draw(rng, 2);
    for (int m = 0; m <= k; ++m)
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) d[i][j] = rmin(d[i][j], d[i][m] + d[m][j]);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(std::string(1, static_cast<char>('x' + i)));
    return PointedSpace(names, d);
}

FinGenMetric random_table(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int rank = 1 + static_cast<int>(rng() % 2);
    GenSet gs(rank);
    std::vector<Word> base{Word(), Word::generator(1)};
    if (rank == 2)
        base.push_back(Word::generator(2));
    else
        base.push_back(power(Word::generator(1), 2 + static_cast<int>(rng() % 2)));
    std::vector<Word> all;
    for (const Word& w : base) {
        all.push_back(w);
        if (!w.is_identity()) all.push_back(inverse(w));
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (!gs.get(all[i], all[j])) gs.set(all[i], all[j], draw(rng, 2));
    return FinGenMetric(std::move(gs)).tightened();
}

FinGenMetric random_bounded_table(std::uint64_t seed, int rank, const Rational& K, std::int64_t max_den) {
    std::mt19937_64 rng(seed);
    GenSet gs(rank);
    std::vector<Word> E{Word()};
    for (int g = 1; g <= rank; ++g) E.push_back(Word::generator(g));
    if (seed % 2 == 1) {
        Letter x = 1 + static_cast<int>(rng() % rank), y = 1 + static_cast<int>(rng() % rank);
        if (rng() % 2) y = -y;
        Word w = Word::reduce({x, y});
        if (w.length() == 2) E.push_back(w);
    }
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = i + 1; j < E.size(); ++j) {
            if (gs.get(E[i], E[j])) continue;
            gs.set(E[i], E[j], rmin(K, draw(rng, 1, max_den) * K));
        }
    return FinGenMetric(std::move(gs), K).tightened();
}

KatetovMap random_katetov(const FinGenMetric& m, std::uint64_t seed, std::size_t max_support) {
    std::mt19937_64 rng(seed);
    std::vector<Word> pool = enumerate_ball(m.rank(), 2);
    pool.erase(pool.begin()); // identity
    for (int attempt = 0; attempt < 10000; ++attempt) {
        KatetovMap f;
        std::size_t s = 1 + rng() % max_support;
        while (f.support.size() < s) {
            const Word& w = pool[rng() % pool.size()];
            if (std::find(f.support.begin(), f.support.end(), w) != f.support.end()) continue;
            f.support.push_back(w);
            std::int64_t q = 4;
            f.values.push_back(Rational(1 + static_cast<std::int64_t>(rng() % 4), q));
        }
        if (is_katetov(m, f)) return f;
    }
    throw Error("no Katetov map found for this seed");
}

} // namespace bimet
