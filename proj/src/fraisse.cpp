#include "bimet/fraisse.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <optional>
#include <set>
#include <unordered_set>

namespace bimet {

namespace {

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

const Rational& bound_of(const ClassObject& o) {
    if (!o || !o->bound()) throw Error("class objects must carry a bound K");
    return *o->bound();
}

// Index of a single positive generator letter, or throws.
int generator_index(const Word& w) {
    if (w.length() != 1 || w[0] < 0) throw Error("morphism images must be generators");
    return w[0];
}

std::vector<Word> generator_images(int rank, int offset = 0) {
    std::vector<Word> out;
    for (int i = 1; i <= rank; ++i) out.push_back(Word::generator(i + offset));
    return out;
}

// Classes of cyclic length <= depth, shortest first.
const std::vector<Word>& classes(int rank, int depth) {
    static std::map<std::pair<int, int>, std::vector<Word>> cache;
    auto key = std::make_pair(rank, depth);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate_cyclic_classes(rank, depth)).first;
    return it->second;
}

// Cap on class enumeration for certification; deeper requests use the deepest full ball.
int affordable_depth(int rank, int depth) {
    while (depth > 1 && ball_size(rank, depth) > 60000) --depth;
    return depth;
}

} // namespace

ClassObject make_object(FinGenMetric m) {
    if (!m.bound()) throw Error("class objects must be bounded");
    auto v = m.validate();
    if (!v.valid) throw Error("table fails validation at a pair (" + v.violation->reason + ")");
    return std::make_shared<const FinGenMetric>(std::move(m));
}

Morphism identity_prefix(ClassObject source, ClassObject target) {
    if (source->rank() > target->rank()) throw RankMismatch("source rank exceeds target rank");
    Morphism m{source, target, generator_images(source->rank()), -1};
    return m;
}

Morphism compose(const Morphism& first, const Morphism& second) {
    if (first.target != second.source) throw Error("morphisms do not compose");
    Morphism m{first.source, second.target, {}, std::min(first.certified_depth, second.certified_depth)};
    for (const Word& w : first.images) m.images.push_back(second.apply(w));
    return m;
}

bool is_isometric_to_depth(const Morphism& m, int depth) {
    if (!m.source) return true;
    for (const Word& w : classes(m.source->rank(), depth))
        if (m.source->norm(w) != m.target->norm(m.apply(w))) return false;
    return true;
}

Morphism certify(Morphism m, int depth) {
    depth = affordable_depth(m.source ? m.source->rank() : 1, depth);
    if (!is_isometric_to_depth(m, depth)) throw Error("morphism is not isometric on W_" + std::to_string(depth));
    m.certified_depth = depth;
    return m;
}

// ---------------------------------------------------------------- amalgamation

Amalgam amalgamate(const Morphism& left, const Morphism& right, int certify_depth) {
    if (left.source != right.source) throw Error("amalgamation needs a common base");
    if (left.images.size() != right.images.size()) throw Error("base images differ in length");
    const ClassObject& G1 = left.target;
    const ClassObject& G2 = right.target;
    const Rational K = bound_of(G1);
    if (bound_of(G2) != K) throw Error("amalgamation needs a common bound K");
    if (left.source && bound_of(left.source) != K) throw Error("base has a different bound");

    const int n1 = G1->rank(), n2 = G2->rank();
    // G2 generator -> G3 generator.
    std::vector<int> map2(n2 + 1, 0);
    for (std::size_t i = 0; i < right.images.size(); ++i) {
        int g2 = generator_index(right.images[i]);
        if (map2[g2]) throw Error("base map into the right factor is not injective");
        map2[g2] = generator_index(left.images[i]);
    }
    int next = n1;
    for (int g = 1; g <= n2; ++g)
        if (!map2[g]) map2[g] = ++next;
    std::vector<Word> rho2;
    for (int g = 1; g <= n2; ++g) rho2.push_back(Word::generator(map2[g]));
    const int n3 = next;

    // Entries of each side. The base set is A_1 cap A_2: the base's own entries plus every
    // factor entry lying in the image of the base, placed on both sides.
    std::vector<Word> E1 = G1->genset().entries(), E2 = G2->genset().entries();
    std::vector<std::pair<Word, Word>> X; // (G1 coordinates, G2 coordinates)
    if (left.source) {
        std::vector<Word> base = left.source->genset().entries();
        auto pull_back = [&](const Morphism& m, int rank, const std::vector<Word>& entries) {
            std::vector<Word> inv(rank);
            std::vector<bool> hit(rank + 1, false);
            for (std::size_t i = 0; i < m.images.size(); ++i) {
                int g = m.images[i][0];
                hit[g] = true;
                inv[g - 1] = Word::generator(static_cast<int>(i) + 1);
            }
            for (const Word& w : entries) {
                bool inside = true;
                for (Letter l : w.letters()) inside = inside && hit[generator_of(l)];
                if (inside) base.push_back(substitute(inv, w));
            }
        };
        pull_back(left, n1, E1);
        pull_back(right, n2, E2);
        std::unordered_set<Word, WordHash> seen;
        for (const Word& w : base) {
            if (!seen.insert(w).second) continue;
            Word x1 = left.apply(w), x2 = right.apply(w);
            X.emplace_back(x1, x2);
            if (std::find(E1.begin(), E1.end(), x1) == E1.end()) E1.push_back(x1);
            if (std::find(E2.begin(), E2.end(), x2) == E2.end()) E2.push_back(x2);
        }
    } else {
        X.emplace_back(Word(), Word());
    }

    GenSet gs(n3);
    for (std::size_t i = 0; i < E1.size(); ++i)
        for (std::size_t j = i + 1; j < E1.size(); ++j)
            if (!gs.get(E1[i], E1[j])) gs.set(E1[i], E1[j], G1->dist(E1[i], E1[j]));
    std::vector<Word> E2in3;
    for (const Word& w : E2) E2in3.push_back(substitute(rho2, w));
    for (std::size_t i = 0; i < E2.size(); ++i)
        for (std::size_t j = i + 1; j < E2.size(); ++j)
            if (!gs.get(E2in3[i], E2in3[j])) gs.set(E2in3[i], E2in3[j], G2->dist(E2[i], E2[j]));
    for (const Word& a : E1) {
        std::vector<Rational> to_x;
        for (const auto& x : X) to_x.push_back(G1->dist(a, x.first));
        for (std::size_t j = 0; j < E2.size(); ++j) {
            if (gs.get(a, E2in3[j])) continue;
            Rational best = K;
            for (std::size_t t = 0; t < X.size(); ++t) best = rmin(best, to_x[t] + G2->dist(X[t].second, E2[j]));
            gs.set(a, E2in3[j], best);
        }
    }

    // Block values are factor distances and stay tight. A cross value is a minimum over
    // the finite base set only, so it can exceed the infimum over the whole base group;
    // lowering it to its generated value leaves the generated metric unchanged.
    FinGenMetric m3(gs, K, G1->options());
    if (!m3.validate().valid) {
        m3 = m3.tightened();
        const GenSet& t = m3.genset();
        for (std::size_t i = 0; i < E1.size(); ++i)
            for (std::size_t j = i + 1; j < E1.size(); ++j)
                if (*t.get(E1[i], E1[j]) != *gs.get(E1[i], E1[j]))
                    throw Error("amalgam undercuts a left factor distance");
        for (std::size_t i = 0; i < E2in3.size(); ++i)
            for (std::size_t j = i + 1; j < E2in3.size(); ++j)
                if (*t.get(E2in3[i], E2in3[j]) != *gs.get(E2in3[i], E2in3[j]))
                    throw Error("amalgam undercuts a right factor distance");
    }
    Amalgam out;
    out.object = std::make_shared<const FinGenMetric>(std::move(m3));
    out.from_left = Morphism{G1, out.object, generator_images(n1), -1};
    out.from_right = Morphism{G2, out.object, rho2, -1};
    if (certify_depth > 0) {
        out.from_left = certify(out.from_left, certify_depth);
        out.from_right = certify(out.from_right, certify_depth);
        out.certified_depth = std::min(out.from_left.certified_depth, out.from_right.certified_depth);
    }
    return out;
}

Amalgam joint_embedding(ClassObject g1, ClassObject g2, int certify_depth) {
    Morphism l{nullptr, std::move(g1), {}, -1}, r{nullptr, std::move(g2), {}, -1};
    return amalgamate(l, r, certify_depth);
}

// ---------------------------------------------------------------- pair extension

ExtendedPair extend_pair(ClassObject p1, ClassObject p2, const Rational& delta, int check_depth, int certify_depth) {
    const int n = p1->rank(), m = p2->rank();
    if (n > m) throw RankMismatch("extend_pair needs rank(p1) <= rank(p2)");
    const Rational K = bound_of(p2);
    if (bound_of(p1) != K) throw Error("extend_pair needs a common bound K");
    if (delta <= 0) throw Error("delta must be positive");
    for (const Word& w : classes(n, affordable_depth(n, check_depth))) {
        Rational a = p1->norm(w), b = p2->norm(w);
        if (a < b) throw Error("precondition p1 >= p2 fails on a class of length " + std::to_string(w.length()));
        if ((a - b) / Rational(as_int(w.length())) > delta)
            throw Error("precondition dist(p1, p2) <= delta fails on a class of length " + std::to_string(w.length()));
    }
    std::vector<Word> shift = generator_images(m, n);
    const auto& E1 = p1->genset().entries();
    const auto& E2 = p2->genset().entries();
    auto build = [&](const std::vector<Rational>& cross) {
        GenSet gs(n + m);
        for (std::size_t i = 0; i < E1.size(); ++i)
            for (std::size_t j = i + 1; j < E1.size(); ++j) gs.set(E1[i], E1[j], p1->dist(E1[i], E1[j]));
        for (std::size_t i = 0; i < E2.size(); ++i)
            for (std::size_t j = i + 1; j < E2.size(); ++j)
                gs.set(substitute(shift, E2[i]), substitute(shift, E2[j]), p2->dist(E2[i], E2[j]));
        for (int j = 1; j <= n; ++j) gs.set(Word::generator(j), Word::generator(n + j), cross[j - 1]);
        return FinGenMetric(std::move(gs), K, p2->options());
    };
    std::vector<Rational> cross(n, delta);
    FinGenMetric raw = build(cross);
    bool clamped = false;
    for (int j = 1; j <= n; ++j) {
        Rational c = raw.dist(Word::generator(j), Word::generator(n + j));
        if (c < cross[j - 1]) cross[j - 1] = c, clamped = true;
    }
    ExtendedPair out;
    FinGenMetric fin = clamped ? build(cross) : raw;
    auto v = fin.validate();
    if (!v.valid) throw Error("pair extension failed validation (" + v.violation->reason + ")");
    out.object = std::make_shared<const FinGenMetric>(std::move(fin));
    out.from_p1 = Morphism{p1, out.object, generator_images(n), -1};
    out.from_p2 = Morphism{p2, out.object, shift, -1};
    if (certify_depth > 0) {
        out.from_p1 = certify(out.from_p1, certify_depth);
        out.from_p2 = certify(out.from_p2, certify_depth);
    }
    for (int j = 1; j <= n; ++j) out.cross.push_back(out.object->dist(Word::generator(j), Word::generator(n + j)));
    return out;
}

// ---------------------------------------------------------------- enumeration

std::vector<ClassObject> enumerate_class(const Rational& K, const ClassCaps& caps) {
    std::vector<Rational> values;
    for (std::int64_t q = 1; q <= caps.max_denom; ++q)
        for (std::int64_t p = 1; Rational(p, q) <= K; ++p) {
            Rational v(p, q);
            if (v.denominator() == q) values.push_back(v);
        }
    std::sort(values.begin(), values.end());

    struct Candidate {
        int rank;
        std::size_t size;
        std::size_t maxlen;
        std::int64_t maxden;
        std::vector<Rational> vals;
        std::vector<Word> entries;
        ClassObject object;
    };
    std::vector<Candidate> found;
    std::size_t budget = 200000;

    for (int r = 1; r <= caps.max_rank; ++r) {
        if (static_cast<std::size_t>(1 + 2 * r) > caps.max_entries) break;
        std::vector<Word> extras;
        for (const Word& w : enumerate_ball(r, caps.max_entry_len))
            if (w.length() >= 2 && !shortlex_less(inverse(w), w)) extras.push_back(w);
        std::size_t max_extra = (caps.max_entries - 1 - 2 * r) / 2;
        // Subsets of extras by increasing size.
        std::vector<std::vector<Word>> subsets{{}};
        for (std::size_t e = 1; e <= max_extra; ++e) {
            std::vector<std::size_t> idx(e);
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
                if (pos == e) {
                    std::vector<Word> s;
                    for (std::size_t i : idx) s.push_back(extras[i]);
                    subsets.push_back(s);
                    return;
                }
                for (std::size_t i = from; i < extras.size(); ++i) {
                    idx[pos] = i;
                    rec(pos + 1, i + 1);
                }
            };
            rec(0, 0);
        }
        for (const auto& subset : subsets) {
            std::vector<Word> entries = generator_images(r);
            entries.insert(entries.end(), subset.begin(), subset.end());
            std::vector<std::size_t> pick(entries.size(), 0);
            while (true) {
                if (budget-- == 0) throw Error("class enumeration exceeds its work cap");
                GenSet gs(r);
                std::vector<Rational> vals;
                for (std::size_t i = 0; i < entries.size(); ++i) {
                    gs.set(entries[i], Word(), values[pick[i]]);
                    vals.push_back(values[pick[i]]);
                }
                FinGenMetric m(std::move(gs), K);
                if (m.validate().valid) {
                    std::size_t maxlen = 0;
                    std::int64_t maxden = 1;
                    for (const Word& w : entries) maxlen = std::max(maxlen, w.length());
                    for (const Rational& v : vals) maxden = std::max(maxden, v.denominator());
                    found.push_back({r, 1 + 2 * entries.size(), maxlen, maxden, vals, entries,
                                     std::make_shared<const FinGenMetric>(std::move(m))});
                }
                std::size_t k = 0;
                while (k < pick.size() && ++pick[k] == values.size()) pick[k++] = 0;
                if (k == pick.size()) break;
            }
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        if (a.size != b.size) return a.size < b.size;
        if (a.maxlen != b.maxlen) return a.maxlen < b.maxlen;
        if (a.maxden != b.maxden) return a.maxden < b.maxden;
        if (a.entries != b.entries)
            return std::lexicographical_compare(a.entries.begin(), a.entries.end(), b.entries.begin(), b.entries.end(),
                                                shortlex_less);
        return a.vals < b.vals;
    });
    std::vector<ClassObject> out;
    for (auto& c : found) out.push_back(c.object);
    return out;
}

// ---------------------------------------------------------------- chains

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t t) {
    std::uint64_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= t) ++w;
    std::uint64_t y = t - w * (w + 1) / 2;
    return {w - y, y};
}

Morphism chain_embedding(const Chain& c, std::size_t i) {
    if (i >= c.stages.size()) throw Error("no such chain stage");
    Morphism m{c.stages[i], c.stages[i], generator_images(c.stages[i]->rank()), -1};
    for (std::size_t k = i; k + 1 < c.stages.size(); ++k) m = compose(m, c.links[k]);
    return m;
}

namespace {

std::string describe_rational(const Rational& r) { return to_string(r); }

// Services one request: the base is stage i embedded in the last stage, extended by H.
void service(Chain& chain, ChainRequest req, const Morphism& into_last, const Morphism& into_H) {
    Amalgam am = amalgamate(into_last, into_H, 0);
    Morphism link = am.from_left;
    bool ok = is_isometric_to_depth(link, 2) && is_isometric_to_depth(am.from_right, 2);
    for (std::size_t g = 0; g < link.images.size(); ++g)
        ok = ok && link.images[g] == Word::generator(static_cast<int>(g) + 1);
    link.certified_depth = ok ? 2 : -1;
    req.certified = ok;
    chain.stages.push_back(am.object);
    chain.links.push_back(link);
    chain.requests.push_back(std::move(req));
}

} // namespace

Chain build_chain(const Rational& K, int depth, std::uint64_t seed, const ClassCaps& caps) {
    if (depth < 1) throw Error("chain depth must be >= 1");
    std::vector<ClassObject> objects = enumerate_class(K, caps);
    if (objects.empty()) throw Error("class enumeration is empty under these caps");
    Chain chain;
    chain.K = K;
    chain.seed = seed;
    chain.stages.push_back(objects.front());
    for (std::uint64_t t = 1; chain.stages.size() < static_cast<std::size_t>(depth); ++t) {
        auto [x, y] = cantor_unpair(t + seed);
        std::size_t i = x % chain.stages.size();
        ChainRequest req;
        req.t = t;
        req.stage = i + 1;
        req.item = y;
        ClassObject F = chain.stages[i];
        Morphism into_last = chain_embedding(chain, i);
        if (y % 2 == 0) {
            std::size_t j = (y / 2) % objects.size();
            Amalgam H = joint_embedding(F, objects[j], 0);
            req.kind = "join";
            req.detail = "object " + std::to_string(j + 1);
            service(chain, req, into_last, H.from_left);
        } else {
            Rational delta = K / Rational(as_int(2 + (y / 2) % 3));
            ExtendedPair H = extend_pair(F, F, delta, 3, 0);
            req.kind = "delta";
            req.detail = "delta " + describe_rational(delta);
            service(chain, req, into_last, H.from_p2);
        }
    }
    return chain;
}

// ---------------------------------------------------------------- embedding targets

namespace {

// The table entries of m over the first k generators.
FinGenMetric prefix_table(const FinGenMetric& m, int k) {
    GenSet gs(k);
    const auto& E = m.genset().entries();
    for (auto [i, j] : m.genset().defined_pairs())
        if (E[i].max_generator() <= k && E[j].max_generator() <= k) gs.set(E[i], E[j], *m.genset().at(i, j));
    return FinGenMetric(std::move(gs), m.bound(), m.options());
}

} // namespace

EmbedResult embed_target(ClassObject target, Chain& chain, int depth, int check_depth) {
    if (depth < 1) throw Error("embedding depth must be >= 1");
    if (bound_of(target) != chain.K) throw Error("target bound differs from the chain's K");
    if (*target->bound() > 1) throw Error("targets must be 1-bounded");
    if (chain.stages.empty()) throw Error("chain has no stages");
    const int m = target->rank();
    MetricOracle tor = MetricOracle::from_metric(target);
    EmbedResult out;
    out.schedule = epsilon_schedule(tor, depth);
    out.restriction_checked = true;

    std::vector<ClassObject> prefix(m + 1);
    for (int k = 1; k <= m; ++k) {
        FinGenMetric p = prefix_table(*target, k);
        bool exact = true;
        for (const Word& w : classes(k, affordable_depth(k, check_depth)))
            if (p.norm(w) != target->norm(w)) exact = false;
        if (!exact) {
            out.restriction_checked = false;
            p = n_approximation(restrict_rank(tor, k), std::min(check_depth, 2), chain.K);
        }
        prefix[k] = make_object(std::move(p));
    }
    auto p_at = [&](std::size_t n) { return prefix[std::min<std::size_t>(n, m)]; };
    auto closeness = [&](std::size_t n, const ClassObject& stage, const std::vector<Word>& images) {
        int k = static_cast<int>(images.size());
        MetricOracle so = pullback(MetricOracle::from_metric(stage), images);
        return dist_interval(restrict_rank(tor, k), so, check_depth);
        (void)n;
    };

    Amalgam first = joint_embedding(chain.stages.back(), p_at(1), check_depth);
    chain.stages.push_back(first.object);
    chain.links.push_back(first.from_left);
    std::vector<Word> images = first.from_right.images;
    for (std::size_t n = 1; n <= static_cast<std::size_t>(depth); ++n) {
        EmbedStage st;
        st.n = n;
        st.chain_stage = chain.stages.size() - 1;
        st.images = images;
        st.epsilon = out.schedule[n - 1];
        st.closeness = closeness(n, chain.stages.back(), images);
        if (n < static_cast<std::size_t>(depth)) {
            ClassObject pn = p_at(n), pn1 = p_at(n + 1);
            ExtendedPair H = extend_pair(pn, pn1, st.epsilon, check_depth, check_depth);
            Morphism left{pn, chain.stages.back(), images, -1};
            Amalgam am = amalgamate(left, H.from_p1, check_depth);
            chain.stages.push_back(am.object);
            chain.links.push_back(am.from_left);
            std::vector<Word> next;
            for (const Word& w : H.from_p2.images) next.push_back(am.from_right.apply(w));
            std::vector<Word> old_in_new, next_prefix;
            for (const Word& w : images) old_in_new.push_back(am.from_left.apply(w));
            for (std::size_t i = 0; i < old_in_new.size(); ++i) next_prefix.push_back(next[i]);
            st.drift = int_dist(MetricOracle::from_metric(am.object), old_in_new, next_prefix);
            st.has_drift = true;
            images = next;
        }
        out.stages.push_back(std::move(st));
    }
    return out;
}

// ---------------------------------------------------------------- back and forth

namespace {

struct Side {
    const Chain* chain;
    ClassObject current;
    Morphism stage_in_current; // chain stage `folded` -> current
    std::size_t folded = 0;    // index of the last chain stage folded in
};

// Folds the side's next chain stage into its current object; returns current -> new.
Morphism fold_next(Side& s) {
    Morphism id{s.current, s.current, generator_images(s.current->rank()), -1};
    if (s.folded + 1 >= s.chain->stages.size()) return id;
    const Morphism& link = s.chain->links[s.folded];
    Amalgam am = amalgamate(link, s.stage_in_current, 0);
    s.stage_in_current = am.from_left;
    s.current = am.object;
    ++s.folded;
    return am.from_right;
}

std::vector<Word> sample_words(int rank, int max_len, std::size_t limit) {
    std::vector<Word> ball = enumerate_ball(rank, max_len);
    std::vector<Word> out;
    std::size_t stride = std::max<std::size_t>(1, ball.size() / limit);
    for (std::size_t i = 1; i < ball.size(); i += stride) out.push_back(ball[i]);
    return out;
}

Rational max_displacement(const ClassObject& space, const Morphism& incl, const Morphism& roundtrip,
                          const std::vector<Word>& xs) {
    Rational worst = 0;
    for (const Word& x : xs) {
        Rational d = space->dist(incl.apply(x), roundtrip.apply(x)) / Rational(as_int(x.length()));
        worst = rmax(worst, d);
    }
    return worst;
}

} // namespace

BackAndForthTrace back_and_forth(const Chain& a, const Chain& b, int depth, int sample_len) {
    if (a.K != b.K) throw Error("chains have different bounds");
    if (a.stages.empty() || b.stages.empty()) throw Error("chains must be nonempty");
    if (depth < 1) throw Error("back-and-forth depth must be >= 1");
    BackAndForthTrace trace;
    trace.ok = true;
    Side sides[2] = {{&a, a.stages[0], identity_prefix(a.stages[0], a.stages[0]), 0},
                     {&b, b.stages[0], identity_prefix(b.stages[0], b.stages[0]), 0}};
    // acc[s]: side s's object at the end of the other side's last step -> its current object.
    Morphism acc[2] = {identity_prefix(sides[0].current, sides[0].current),
                       identity_prefix(sides[1].current, sides[1].current)};
    // Last composite map from each side: chain stage -> other side, with the stage index.
    std::optional<Morphism> last[2];
    std::size_t last_stage[2] = {0, 0};
    std::optional<Morphism> prev; // previous step's map, other side -> this side
    Rational pow2 = 1;

    auto advance = [&](int s, const Morphism& m) {
        sides[s].current = m.target;
        sides[s].stage_in_current = compose(sides[s].stage_in_current, m);
        acc[s] = compose(acc[s], m);
    };

    for (int step = 0; step < 2 * depth + 1; ++step) {
        const int S = step % 2, T = 1 - S;
        if (S == 0) pow2 *= 2;
        BackAndForthStep st;
        st.n = static_cast<std::size_t>(step / 2 + 1);
        st.side = S == 0 ? 'A' : 'B';
        st.bound = Rational(1) / pow2;

        Morphism fold = fold_next(sides[S]);
        acc[S] = compose(acc[S], fold);
        Morphism g;
        if (!prev) {
            Amalgam am = joint_embedding(sides[T].current, sides[S].current, 0);
            advance(T, am.from_left);
            g = am.from_right;
            st.roundtrip_max_ratio = 0;
        } else {
            // prev: T_cur -> S_old; fold: S_old -> S_cur. Amalgamate over T_cur.
            Morphism over = compose(*prev, fold);
            ClassObject Tcur = sides[T].current;
            Morphism stage_before = sides[T].stage_in_current;
            Amalgam am = amalgamate(over, identity_prefix(Tcur, Tcur), 0);
            g = am.from_left;
            advance(T, am.from_right);
            // Round trip: x against g(fold(prev(x))) for x in T's chain stage.
            Morphism round = compose(compose(stage_before, over), g);
            Morphism direct = compose(stage_before, am.from_right);
            st.roundtrip_max_ratio = max_displacement(
                sides[T].current, direct, round,
                sample_words(stage_before.source->rank(), sample_len, 200));
        }
        // Composite from S's chain stage into T.
        Morphism phi = compose(sides[S].stage_in_current, g);
        st.images = phi.images;
        ClassObject stage_obj = sides[S].chain->stages[sides[S].folded];
        st.isometry = dist_interval(MetricOracle::from_metric(stage_obj),
                                    pullback(MetricOracle::from_metric(sides[T].current), phi.images), 3);
        if (last[S]) {
            Morphism fwd = compose(*last[S], acc[T]);
            std::vector<Word> now;
            Morphism link = identity_prefix(fwd.source, fwd.source);
            for (std::size_t k = last_stage[S]; k < sides[S].folded; ++k) link = compose(link, sides[S].chain->links[k]);
            for (const Word& w : link.images) now.push_back(phi.apply(w));
            st.drift = int_dist(MetricOracle::from_metric(sides[T].current), fwd.images, now);
        }
        last[S] = phi;
        last_stage[S] = sides[S].folded;
        acc[T] = identity_prefix(sides[T].current, sides[T].current);
        st.ok = st.isometry.lo == 0 && st.drift == 0 && st.roundtrip_max_ratio <= st.bound;
        trace.ok = trace.ok && st.ok;
        trace.steps.push_back(std::move(st));
        prev = g;
    }
    return trace;
}

// ---------------------------------------------------------------- Katetov

bool is_katetov(const FinGenMetric& m, const KatetovMap& f) {
    if (f.support.size() != f.values.size()) return false;
    for (std::size_t i = 0; i < f.support.size(); ++i)
        for (std::size_t j = 0; j < f.support.size(); ++j) {
            Rational d = m.dist(f.support[i], f.support[j]);
            if (rabs(f.values[i] - f.values[j]) > d || d > f.values[i] + f.values[j]) return false;
        }
    return true;
}

KatetovReport realize_katetov(ClassObject stage, const KatetovMap& f, int depth) {
    const Rational K = bound_of(stage);
    if (f.support.empty()) throw Error("Katetov map needs a nonempty support");
    for (const Rational& v : f.values) {
        if (v <= 0) throw Error("Katetov values must be positive");
        if (v > K) throw Error("Katetov values must not exceed K");
    }
    if (!is_katetov(*stage, f)) throw Error("map violates the Katetov inequalities");
    const int r = stage->rank();
    const Word z = Word::generator(r + 1);
    GenSet gs(r + 1);
    const GenSet& old = stage->genset();
    const auto& E = old.entries();
    for (const Word& w : E) gs.add(w);
    for (auto [i, j] : old.defined_pairs()) gs.set(E[i], E[j], *old.at(i, j));
    std::vector<Word> A = E;
    for (const Word& s : f.support) {
        if (old.index_of(s)) continue;
        for (const Word& b : E) gs.set(s, b, stage->dist(s, b));
        A.push_back(s);
        A.push_back(inverse(s));
    }
    for (const Word& b : A) {
        Rational v = K;
        for (std::size_t t = 0; t < f.support.size(); ++t) v = rmin(v, f.values[t] + stage->dist(f.support[t], b));
        if (!gs.get(z, b)) gs.set(z, b, v);
    }
    FinGenMetric ext(std::move(gs), K, stage->options());
    if (!ext.validate().valid) ext = ext.tightened();
    KatetovReport rep;
    rep.z = r + 1;
    rep.depth = depth;
    rep.extended = std::make_shared<const FinGenMetric>(std::move(ext));
    rep.old_unchanged = is_isometric_to_depth(identity_prefix(stage, rep.extended), affordable_depth(r, depth));
    rep.support_realized = true;
    for (std::size_t t = 0; t < f.support.size(); ++t)
        if (rep.extended->dist(z, f.support[t]) != f.values[t]) rep.support_realized = false;
    return rep;
}

} // namespace bimet
