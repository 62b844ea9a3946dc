#include "bimet/graev.hpp"

#include <functional>
#include <map>
#include <mutex>

namespace bimet {

PointedSpace::PointedSpace(std::vector<std::string> names, std::vector<std::vector<Rational>> dist)
    : names_(std::move(names)), dist_(std::move(dist)) {
    std::size_t n = names_.size() + 1;
    if (dist_.size() != n) throw Error("distance table must have one row per point");
    for (const auto& row : dist_)
        if (row.size() != n) throw Error("distance table must be square");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i][i] != 0) throw Error("nonzero self-distance");
        for (std::size_t j = 0; j < n; ++j) {
            if (dist_[i][j] != dist_[j][i]) throw Error("asymmetric distance table");
            if (i != j && dist_[i][j] <= 0) throw Error("nonpositive distance between distinct points");
            for (std::size_t k = 0; k < n; ++k)
                if (dist_[i][k] > dist_[i][j] + dist_[j][k]) throw Error("triangle inequality fails");
        }
    }
    Alphabet check(names_);
    (void)check;
}

Rational RhoTable::operator()(Letter x, Letter y) const {
    const PointedSpace& s = *space_;
    if (x == 0 && y == 0) return 0;
    if (y == 0) return s.d(generator_of(x), 0);
    if (x == 0) return s.d(generator_of(y), 0);
    if ((x > 0) == (y > 0)) return s.d(generator_of(x), generator_of(y));
    return s.d(generator_of(x), 0) + s.d(0, generator_of(y));
}

RhoTable rho_extend(const PointedSpace& space) { return RhoTable(space); }

namespace {

void extend_matches(int k, int i, Match& cur, std::vector<Match>& out) {
    // Builds matches on [i, k) recursively: i is fixed, or paired with some j whose
    // inside and outside are matched independently (non-crossing).
    if (i == k) {
        out.push_back(cur);
        return;
    }
    if (cur[i] != -1) {
        extend_matches(k, i + 1, cur, out);
        return;
    }
    cur[i] = i;
    extend_matches(k, i + 1, cur, out);
    cur[i] = -1;
    // Pairing i with j is non-crossing iff no open pair spans j from before i.
    int limit = k;
    for (int t = 0; t < i; ++t)
        if (cur[t] > i) limit = std::min(limit, cur[t]);
    for (int j = i + 1; j < limit; ++j) {
        if (cur[j] != -1) continue;
        cur[i] = j;
        cur[j] = i;
        extend_matches(k, i + 1, cur, out);
        cur[i] = -1;
        cur[j] = -1;
    }
}

} // namespace

std::vector<Match> enumerate_matches(int k, int cap) {
    if (k < 0) throw Error("negative match size");
    if (k > cap) throw Error("match enumeration capped at length " + std::to_string(cap));
    static std::mutex mu;
    static std::map<int, std::vector<Match>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    std::vector<Match> out;
    Match cur(k, -1);
    extend_matches(k, 0, cur, out);
    cache[k] = out;
    return out;
}

Rational match_cost(const std::vector<Letter>& w, const Match& theta, const RhoTable& rho) {
    if (w.size() != theta.size()) throw Error("match size differs from word length");
    Rational total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::size_t j = static_cast<std::size_t>(theta[i]);
        if (j == i)
            total += rho(w[i], 0);
        else if (i < j)
            total += rho(w[i], -w[j]);
    }
    return total;
}

namespace {
void check_letters(const Word& w, const PointedSpace& space) {
    if (w.max_generator() > space.size()) throw Error("word uses a letter outside the space");
}
} // namespace

Rational graev_norm(const Word& w, const PointedSpace& space) {
    check_letters(w, space);
    RhoTable rho(space);
    const int n = static_cast<int>(w.length());
    // D[i][j] is the optimum on w[i..j); D[i][i] = 0.
    std::vector<std::vector<Rational>> D(n + 1, std::vector<Rational>(n + 1, 0));
    for (int len = 1; len <= n; ++len) {
        for (int i = 0; i + len <= n; ++i) {
            int j = i + len;
            Rational best = rho(w[i], 0) + D[i + 1][j];
            for (int k = i + 1; k < j; ++k) {
                Rational c = rho(w[i], -w[k]) + D[i + 1][k] + D[k + 1][j];
                if (c < best) best = c;
            }
            D[i][j] = best;
        }
    }
    return D[0][n];
}

Rational graev_norm_bruteforce(const Word& w, const PointedSpace& space) {
    check_letters(w, space);
    RhoTable rho(space);
    Rational best = -1;
    for (const Match& m : enumerate_matches(static_cast<int>(w.length()))) {
        Rational c = match_cost(w.letters(), m, rho);
        if (best < 0 || c < best) best = c;
    }
    return best;
}

Rational graev_dist(const Word& u, const Word& v, const PointedSpace& space) {
    return graev_norm(multiply(u, inverse(v)), space);
}

} // namespace bimet
