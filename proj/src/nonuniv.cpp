#include "bimet/nonuniv.hpp"

namespace bimet {

BitPrefix::BitPrefix(std::vector<int> bits) : bits_(std::move(bits)) {
    for (int b : bits_)
        if (b != 0 && b != 1) throw Error("bits must be 0 or 1");
}

BitPrefix BitPrefix::parse(const std::string& text) {
    std::vector<int> bits;
    for (char ch : text) {
        if (ch != '0' && ch != '1') throw Error("bit string may only contain 0 and 1");
        bits.push_back(ch - '0');
    }
    return BitPrefix(std::move(bits));
}

int BitPrefix::bit(int k) const {
    if (k < 1 || k > size()) throw Error("bit " + std::to_string(k) + " is not defined");
    return bits_[k - 1];
}

std::string BitPrefix::str() const {
    std::string s;
    for (int b : bits_) s += static_cast<char>('0' + b);
    return s;
}

Word family_letter(int i) {
    std::vector<Letter> raw;
    for (Letter l : {1, 2, 3})
        for (int t = 0; t < i; ++t) raw.push_back(l);
    return Word::reduce(raw);
}

Rational family_value(int i, int bit) { return bit == 0 ? Rational(2 * i) : Rational(3 * i) - Rational(i, 2); }

namespace {
bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }
} // namespace

FinGenMetric family_genset(int n, const BitPrefix& bits, bool below_n, bool literal_cross) {
    if (!power_of_two(n)) throw Error("n must be a power of two >= 2");
    std::vector<std::pair<Word, Rational>> letters;
    for (int g = 1; g <= 3; ++g) letters.emplace_back(Word::generator(g), 1);
    int k = 1;
    for (int i = 2; below_n ? i < n : i <= n; i *= 2, ++k) letters.emplace_back(family_letter(i), family_value(i, bits.bit(k)));
    std::vector<std::pair<Word, Rational>> all;
    for (const auto& [w, v] : letters) {
        all.emplace_back(w, v);
        all.emplace_back(inverse(w), v);
    }
    GenSet gs(3);
    for (std::size_t i = 0; i < all.size(); ++i) {
        gs.set(all[i].first, Word(), all[i].second);
        if (!literal_cross) continue;
        for (std::size_t j = i + 1; j < all.size(); ++j) gs.set(all[i].first, all[j].first, all[i].second + all[j].second);
    }
    return FinGenMetric(std::move(gs));
}

KeyLemmaReport verify_keylemma(int n, const BitPrefix& bits, SearchOptions options) {
    FinGenMetric below = family_genset(n, bits, true);
    FinGenMetric m(below.genset(), std::nullopt, options);
    KeyLemmaReport r;
    r.n = n;
    Word g = family_letter(n);
    r.from_below = m.norm(g);
    r.expansions = m.last_expansions();
    r.bound = Rational(3 * n) - Rational(n, 2);
    r.pass = r.from_below >= r.bound;
    r.both_values_admissible = family_value(n, 0) <= r.from_below && family_value(n, 1) <= r.from_below;
    r.witness = m.witness(g);
    return r;
}

Decomposition keylemma_certificate_n4() {
    Word a = Word::generator(1), b = Word::generator(2), c = Word::generator(3), one;
    Word ci = inverse(c);
    Decomposition d;
    d.pairs = {{a, one}, {a, one}, {family_letter(2), one}, {ci, ci}, {ci, ci}, {b, one},
               {b, one}, {c, c},     {c, c},               {c, one}, {c, one}};
    d.cost = 10;
    return d;
}

SeparationCertificate separation_witness(const BitPrefix& x, const BitPrefix& y) {
    int k = 1;
    int top = std::min(x.size(), y.size());
    while (k <= top && x.bit(k) == y.bit(k)) ++k;
    if (k > top) throw Error("prefixes do not differ");
    int n = 1 << k;
    SeparationCertificate s;
    s.k = k;
    s.witness = family_letter(n);
    s.value_x = family_genset(n, x).norm(s.witness);
    s.value_y = family_genset(n, y).norm(s.witness);
    s.ratio = rabs(s.value_x - s.value_y) / Rational(3 * n);
    return s;
}

PackingReport packing_check(const MetricOracle& G, const std::array<Word, 3>& emb0, const std::array<Word, 3>& emb1,
                            int N, const MetricOracle* ref0, const MetricOracle* ref1) {
    PackingReport r;
    std::vector<Word> i0(emb0.begin(), emb0.end()), i1(emb1.begin(), emb1.end());
    for (int v = 0; v < 3; ++v) r.S += G.dist(emb0[v], emb1[v]);
    if (ref0) r.isometric0 = true;
    if (ref1) r.isometric1 = true;
    for (const Word& w : enumerate_ball(3, N)) {
        if (w.is_identity()) continue;
        Rational n0 = G.norm(substitute(i0, w)), n1 = G.norm(substitute(i1, w));
        Rational len(static_cast<std::int64_t>(w.length()));
        Rational ratio = rabs(n0 - n1) / len;
        r.max_ratio = rmax(r.max_ratio, ratio);
        if (ratio > r.S) r.bound_holds = false;
        if (ref0 && *r.isometric0 && ref0->norm(w) != n0) r.isometric0 = false;
        if (ref1 && *r.isometric1 && ref1->norm(w) != n1) r.isometric1 = false;
        if (ref0 && ref1) r.separation = rmax(r.separation, rabs(ref0->norm(w) - ref1->norm(w)) / len);
    }
    r.contradiction = r.isometric0.value_or(false) && r.isometric1.value_or(false) && r.S < r.separation;
    return r;
}

} // namespace bimet
