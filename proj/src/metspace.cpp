#include "bimet/metspace.hpp"

#include <algorithm>
#include <unordered_map>

namespace bimet {

namespace {
constexpr std::int64_t kCertificateDepthCap = 24;
}

MetricOracle::MetricOracle(int rank, NormFn norm, std::optional<Rational> bound)
    : rank_(rank), norm_(std::move(norm)), bound_(bound) {
    if (rank < 1) throw Error("oracle rank must be >= 1");
}

MetricOracle MetricOracle::from_metric(std::shared_ptr<const FinGenMetric> m) {
    const FinGenMetric* raw = m.get();
    MetricOracle o(m->rank(), [raw](const Word& g) { return raw->norm(g); }, m->bound());
    o.metric_ = std::move(m);
    return o;
}

MetricOracle MetricOracle::from_metric(const FinGenMetric& m) {
    return from_metric(std::make_shared<const FinGenMetric>(m));
}

Rational MetricOracle::norm(const Word& g) const {
    check_rank(g, rank_);
    if (g.is_identity()) return 0;
    return norm_(g);
}

MetricOracle tabulate(const MetricOracle& d, int max_len) {
    auto table = std::make_shared<std::unordered_map<Word, Rational, WordHash>>();
    for (const Word& w : enumerate_cyclic_classes(d.rank(), max_len)) table->emplace(w, d.norm(w));
    return MetricOracle(
        d.rank(),
        [table, max_len](const Word& g) {
            Word key = class_key(g);
            auto it = table->find(key);
            if (it == table->end())
                throw Error("tabulated oracle has no value beyond cyclic length " + std::to_string(max_len));
            return it->second;
        },
        d.bound());
}

MetricOracle restrict_rank(const MetricOracle& d, int n) {
    if (n > d.rank()) throw RankMismatch("restriction above the oracle's rank");
    return MetricOracle(n, [d](const Word& g) { return d.norm(g); }, d.bound());
}

MetricOracle pullback(const MetricOracle& d, std::vector<Word> images) {
    for (const Word& w : images) check_rank(w, d.rank());
    int rank = static_cast<int>(images.size());
    return MetricOracle(
        rank, [d, images = std::move(images)](const Word& g) { return d.norm(substitute(images, g)); }, d.bound());
}

DistInterval dist_interval(const MetricOracle& d, const MetricOracle& p, int N, const DistOptions& opt) {
    if (d.rank() != p.rank()) throw RankMismatch("dist between oracles of different rank");
    if (N < 1) throw Error("depth must be >= 1");
    DistInterval out;
    out.requested_depth = N;
    int depth = N;
    while (depth > 0 && ball_size(d.rank(), depth) > opt.ball_cap) --depth;
    out.exhaustive = depth == N;
    out.depth = depth;

    // The norm is constant on a conjugacy class and under inversion, and the shortest
    // member is the cyclic core, so classes cover all of W_N.
    auto consider = [&](const Word& w) {
        Word core = cyclic_core(w);
        if (core.is_identity()) return;
        Rational r = rabs(d.norm(core) - p.norm(core)) / Rational(static_cast<std::int64_t>(core.length()));
        ++out.examined;
        if (out.witness.is_identity() || r > out.lo) {
            out.witness = core;
            out.lo = r;
        }
    };
    for (const Word& w : enumerate_cyclic_classes(d.rank(), depth)) consider(w);
    if (!out.exhaustive)
        for (const Word& w : opt.candidates)
            if (cyclic_core(w).length() <= static_cast<std::size_t>(N)) consider(w);
    if (d.bound() && p.bound()) {
        Rational B = rmax(*d.bound(), *p.bound());
        out.hi = rmax(out.lo, B / Rational(depth));
    }
    return out;
}

FinGenMetric n_approximation(const MetricOracle& d, int N, std::optional<Rational> clamp) {
    std::optional<Rational> K = clamp ? clamp : d.bound();
    if (!K) throw Error("n_approximation needs a bounded oracle or an explicit clamp");
    std::vector<Word> ball = enumerate_ball(d.rank(), N);
    GenSet gs(d.rank());
    for (const Word& w : ball) gs.add(w);
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = i + 1; j < ball.size(); ++j) {
            if (gs.get(ball[i], ball[j])) continue;
            gs.set(ball[i], ball[j], rmin(*K, d.dist(ball[i], ball[j])));
        }
    return FinGenMetric(std::move(gs), K);
}

std::optional<Rational> smallest_fraction_in(const Rational& lo, const Rational& hi, std::int64_t cap) {
    std::optional<Rational> best;
    for (std::int64_t q = 1; q <= cap; ++q) {
        Rational c(bimet::ceil(lo * Rational(q)), q);
        if (c <= hi && (!best || c < *best)) best = c;
    }
    return best;
}

RationalApproximation rational_approximation(const FinGenMetric& p, const Rational& eps, std::int64_t denom_cap) {
    if (eps < 0) throw Error("epsilon must be >= 0");
    if (denom_cap < 1) throw Error("denominator cap must be >= 1");
    auto max_den = [](const FinGenMetric& m) {
        std::int64_t q = 1;
        for (auto [i, j] : m.genset().defined_pairs()) q = std::max(q, m.genset().at(i, j)->denominator());
        return q;
    };
    if (eps == 0) return {p, std::nullopt, max_den(p)};

    Rational L = p.max_generator_value(), l = p.min_positive_value();
    Rational width = eps * l / L;
    const GenSet& src = p.genset();
    const auto& E = src.entries();

    // Entries that are not tight carry no information; drop them, except the mandatory
    // generator entries, which take their generated values.
    auto tighten = [&](const GenSet& gs) {
        FinGenMetric raw(gs, p.bound());
        GenSet tight(p.rank());
        for (const Word& w : E) tight.add(w);
        for (auto [i, j] : gs.defined_pairs()) {
            Rational v = *raw.genset().at(i, j);
            Rational gen = raw.dist(E[i], E[j]);
            bool generator_entry =
                (E[i].is_identity() && E[j].length() == 1) || (E[j].is_identity() && E[i].length() == 1);
            if (gen == v)
                tight.set(E[i], E[j], v);
            else if (generator_entry)
                tight.set(E[i], E[j], gen);
        }
        return tight;
    };

    GenSet gs(p.rank());
    for (const Word& w : E) gs.add(w);
    for (auto [i, j] : src.defined_pairs()) {
        Rational lo = p.dist(E[i], E[j]);
        auto v = smallest_fraction_in(lo, lo + width, denom_cap);
        if (!v) {
            std::int64_t q = denom_cap + 1;
            while (!smallest_fraction_in(lo, lo + width, q)) ++q;
            throw DenominatorCapError("no fraction with denominator <= " + std::to_string(denom_cap) + " within " +
                                          to_string(width) + " above " + to_string(lo),
                                      q);
        }
        gs.set(E[i], E[j], *v);
    }
    GenSet tight = tighten(gs);
    if (max_den(FinGenMetric(tight, p.bound())) > denom_cap) {
        // A generated generator value summed entries with unrelated denominators. Round
        // every entry up to one grid 1/q instead; sums stay on the grid.
        std::int64_t q = bimet::ceil(Rational(1) / width);
        if (q > denom_cap)
            throw DenominatorCapError("a common grid needs denominator " + std::to_string(q), q);
        GenSet grid(p.rank());
        for (const Word& w : E) grid.add(w);
        for (auto [i, j] : src.defined_pairs())
            grid.set(E[i], E[j], Rational(bimet::ceil(p.dist(E[i], E[j]) * Rational(q)), q));
        tight = tighten(grid);
    }
    RationalApproximation out{FinGenMetric(std::move(tight), p.bound()), std::nullopt, 1};
    out.max_denominator = max_den(out.metric);
    if (p.bound() && *p.bound() <= 1) {
        MetricOracle a = MetricOracle::from_metric(p), b = MetricOracle::from_metric(out.metric);
        // The certificate is a lower bound plus a bound-based upper bound; deep balls
        // add little to either, so the depth is capped.
        std::int64_t depth = std::min<std::int64_t>(bimet::ceil(Rational(1) / eps), kCertificateDepthCap);
        out.certificate = dist_interval(a, b, static_cast<int>(depth));
    }
    return out;
}

std::vector<Rational> epsilon_schedule(const MetricOracle& d, int count) {
    if (count < 1) throw Error("schedule length must be >= 1");
    std::vector<Rational> out;
    Rational pow2 = 1;
    for (int n = 1; n <= count; ++n) {
        pow2 *= 2;
        Rational e = Rational(1) / pow2;
        if (n <= d.rank()) e = rmin(e, 2 * d.norm(Word::generator(n)));
        if (!out.empty()) e = rmin(e, out.back());
        out.push_back(e);
    }
    return out;
}

Rational int_dist(const MetricOracle& h, const std::vector<Word>& images, const std::vector<Word>& images2) {
    if (images.size() != images2.size()) throw Error("image lists differ in length");
    Rational m = 0;
    for (std::size_t i = 0; i < images.size(); ++i) m = rmax(m, h.dist(images[i], images2[i]));
    return m;
}

} // namespace bimet
