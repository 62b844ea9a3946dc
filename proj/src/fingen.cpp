#include "bimet/fingen.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>

namespace bimet {

// ---------------------------------------------------------------- GenSet

GenSet::GenSet(int rank) : rank_(rank) {
    if (rank < 1) throw Error("rank must be >= 1");
    add(Word());
    for (int i = 1; i <= rank; ++i) add(Word::generator(i));
}

void GenSet::grow() {
    std::size_t ncap = std::max<std::size_t>(16, cap_ * 2);
    std::vector<std::optional<Rational>> nt(ncap * ncap);
    for (std::size_t i = 0; i < cap_; ++i)
        for (std::size_t j = 0; j < cap_; ++j) nt[i * ncap + j] = std::move(table_[i * cap_ + j]);
    table_ = std::move(nt);
    cap_ = ncap;
}

std::size_t GenSet::add(const Word& w) {
    if (auto it = index_.find(w); it != index_.end()) return it->second;
    check_rank(w, rank_);
    std::size_t i = entries_.size();
    entries_.push_back(w);
    index_.emplace(w, i);
    if (!w.is_identity()) {
        entries_.push_back(inverse(w));
        index_.emplace(entries_.back(), i + 1);
    }
    while (entries_.size() > cap_) grow();
    for (std::size_t k = i; k < entries_.size(); ++k) table_[k * cap_ + k] = Rational(0);
    return i;
}

std::optional<std::size_t> GenSet::index_of(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void GenSet::put(std::size_t i, std::size_t j, const Rational& v) {
    auto& slot = table_[i * cap_ + j];
    if (slot && *slot != v)
        throw Error("conflicting values for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    slot = v;
}

void GenSet::set(const Word& a, const Word& b, const Rational& value) {
    if (value < 0) throw Error("negative table value");
    if (a == b && value != 0) throw Error("nonzero diagonal value");
    std::size_t i = add(a), j = add(b);
    std::size_t ii = index_.at(inverse(a)), ij = index_.at(inverse(b));
    put(i, j, value);
    put(j, i, value);
    put(ii, ij, value);
    put(ij, ii, value);
}

std::optional<Rational> GenSet::get(const Word& a, const Word& b) const {
    auto i = index_of(a), j = index_of(b);
    if (!i || !j) return std::nullopt;
    return at(*i, *j);
}

std::vector<std::pair<std::size_t, std::size_t>> GenSet::defined_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<std::size_t> inv(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) inv[i] = index_.at(inverse(entries_[i]));
    for (std::size_t i = 0; i < entries_.size(); ++i)
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            if (i == j || !at(i, j)) continue;
            std::pair<std::size_t, std::size_t> me{i, j};
            auto rep = std::min({me, std::pair{j, i}, std::pair{inv[i], inv[j]}, std::pair{inv[j], inv[i]}});
            if (rep == me) out.push_back(me);
        }
    return out;
}

// ---------------------------------------------------------------- engine
//
// The norm N(g) is the least total weight of a product of conjugates
// c s c^-1 = g, where s ranges over a*b^-1 for defined pairs and weighs d'(a,b).
// Nodes are conjugacy classes (up to inversion) keyed by their canonical cyclic word;
// an edge multiplies a rotation of the node by a rotation of a relator core so that
// the junction cancels. The heuristic is a multiple of the abelianized l1 length,
// which is admissible and consistent because an edge changes that length by at most
// the relator's own.

namespace detail {

struct RelClass {
    Word s;
    Rational weight;
    std::size_t a = 0, b = 0;
    bool active = true;
    std::vector<int> ab;
};

struct Relator {
    std::vector<Letter> r;
    Rational weight;
    std::size_t a = 0, b = 0; // r = z^-1 (A[a] A[b]^-1) z
    Word z;
    int cls = 0;
};

struct Step {
    Word rep;
    std::size_t rot = 0;
    int rel = -1;
};

struct SearchResult {
    bool found = false;
    Rational cost;
    std::vector<Step> path; // start..goal, last entry is the identity
};

class NormEngine {
public:
    NormEngine(const GenSet& gs, std::optional<Rational> bound, SearchOptions opt)
        : gs_(gs), bound_(bound), opt_(opt) {
        build();
    }

    Rational norm(const Word& g, std::optional<Rational> cap) {
        std::lock_guard lock(mu_);
        Word rep = canonical_class(g).rep;
        if (rep.is_identity()) return 0;
        Rational limit = plain_bound(rep);
        bool limit_exact = true;
        if (bound_ && *bound_ < limit) limit = *bound_, limit_exact = true;
        auto cached = cache_.find(rep);
        if (cached != cache_.end()) {
            Rational v = rmin(cached->second, limit);
            return cap ? rmin(v, *cap) : v;
        }
        if (cap && *cap < limit) limit = *cap, limit_exact = false;
        SearchResult res = search(rep, limit, false, true, false);
        if (res.found) return res.cost;
        if (limit_exact) cache_[rep] = limit;
        return limit;
    }

    Decomposition witness(const Word& g) {
        std::lock_guard lock(mu_);
        Decomposition out;
        if (g.is_identity()) return out;
        ClassForm cf = canonical_class(g);
        Rational plain = plain_bound(cf.rep);
        SearchResult res = search(cf.rep, plain, true, false, true);
        if (res.found) {
            out = reconstruct(cf, res);
        } else {
            // Only reachable when relators at or above K were dropped.
            std::vector<std::pair<Word, Word>> pairs;
            Word body = cf.sign > 0 ? cf.rep : inverse(cf.rep);
            for (Letter l : cf.conj.letters()) pairs.emplace_back(Word::reduce({l}), Word::reduce({l}));
            for (Letter l : body.letters()) pairs.emplace_back(Word::reduce({l}), Word());
            Word ci = inverse(cf.conj);
            for (Letter l : ci.letters()) pairs.emplace_back(Word::reduce({l}), Word::reduce({l}));
            out.pairs = std::move(pairs);
            out.cost = plain;
        }
        out.clamped = bound_ && out.cost > *bound_;
        return out;
    }

    std::size_t last_expansions() const { return last_expansions_; }

private:
    struct Node {
        Word rep;
        Rational g;
        int parent = -1;
        std::size_t rot = 0;
        int rel = -1;
        bool closed = false;
        bool terminal = false;
    };
    struct Item {
        Rational f, g;
        int id;
        bool operator<(const Item& o) const {
            if (f != o.f) return f > o.f;
            if (g != o.g) return g < o.g;
            return id > o.id;
        }
    };

    void build();
    void minimize();
    void index_relators();
    Rational heuristic(const Word& w) const;
    Rational plain_bound(const Word& w) const;
    SearchResult search(const Word& start, const Rational& limit, bool inclusive, bool use_cache,
                        bool record_path, std::size_t budget = 0);
    Decomposition reconstruct(const ClassForm& start, const SearchResult& res) const;

    const GenSet gs_;
    std::optional<Rational> bound_;
    SearchOptions opt_;
    std::vector<RelClass> classes_;
    std::vector<Relator> relators_;
    std::vector<std::vector<int>> by_first_;
    std::vector<Rational> letter_value_;
    Rational rho_ab_ = 0;
    std::unordered_map<Word, Rational, WordHash> cache_;
    std::size_t last_expansions_ = 0;
    std::mutex mu_;
};

namespace {
std::vector<int> abelianize(const Word& w, int rank) {
    std::vector<int> v(rank, 0);
    for (Letter l : w.letters()) v[generator_of(l) - 1] += l > 0 ? 1 : -1;
    return v;
}
int l1(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x < 0 ? -x : x;
    return s;
}
} // namespace

void NormEngine::build() {
    const auto& E = gs_.entries();
    std::unordered_map<Word, std::size_t, WordHash> by_key;
    for (auto [i, j] : gs_.defined_pairs()) {
        Rational w = *gs_.at(i, j);
        if (bound_ && w >= *bound_) continue; // cannot beat the clamp
        Word s = multiply(E[i], inverse(E[j]));
        Word key = class_key(s);
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            by_key.emplace(key, classes_.size());
            classes_.push_back({s, w, i, j, true, abelianize(s, gs_.rank())});
        } else if (w < classes_[it->second].weight) {
            classes_[it->second] = {s, w, i, j, true, abelianize(s, gs_.rank())};
        }
    }
    std::stable_sort(classes_.begin(), classes_.end(),
                     [](const RelClass& x, const RelClass& y) { return shortlex_less(class_key(x.s), class_key(y.s)); });
    letter_value_.assign(gs_.rank() + 1, Rational(0));
    for (int f = 1; f <= gs_.rank(); ++f) {
        auto v = gs_.get(Word::generator(f), Word());
        if (!v) throw Error("generator entry (f,1) missing");
        letter_value_[f] = *v;
    }
    index_relators();
    if (classes_.size() > 12) minimize();
}

void NormEngine::index_relators() {
    const auto& E = gs_.entries();
    relators_.clear();
    by_first_.assign(2 * gs_.rank(), {});
    std::map<std::vector<Letter>, int> seen;
    auto add_rotations = [&](const Word& s, std::size_t a, std::size_t b, const Rational& w, int cls) {
        Word v;
        Word core = cyclic_core(s, &v);
        for (std::size_t k = 0; k < core.length(); ++k) {
            std::vector<Letter> r = rotate(core.letters(), k);
            Word z = multiply(v, Word::reduce(std::vector<Letter>(core.letters().begin(), core.letters().begin() + k)));
            auto it = seen.find(r);
            if (it != seen.end()) {
                if (!(w < relators_[it->second].weight)) continue;
                relators_[it->second] = {r, w, a, b, z, cls};
                continue;
            }
            seen.emplace(r, static_cast<int>(relators_.size()));
            by_first_[letter_key(r.front())].push_back(static_cast<int>(relators_.size()));
            relators_.push_back({r, w, a, b, z, cls});
        }
    };
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const RelClass& rc = classes_[c];
        if (!rc.active) continue;
        add_rotations(rc.s, rc.a, rc.b, rc.weight, static_cast<int>(c));
        add_rotations(inverse(rc.s), rc.b, rc.a, rc.weight, static_cast<int>(c));
    }
    (void)E;
    rho_ab_ = -1;
    for (const RelClass& rc : classes_) {
        if (!rc.active) continue;
        int n = l1(rc.ab);
        if (n == 0) continue;
        Rational q = rc.weight / Rational(n);
        if (rho_ab_ < 0 || q < rho_ab_) rho_ab_ = q;
    }
    if (rho_ab_ < 0) rho_ab_ = 0;
}

// Drops relator classes whose weight is already achieved by the others. Each removal
// leaves the generated metric unchanged, so the order of removals is immaterial.
void NormEngine::minimize() {
    std::vector<std::size_t> order(classes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (classes_[x].weight != classes_[y].weight) return classes_[x].weight > classes_[y].weight;
        return classes_[x].s.length() > classes_[y].s.length();
    });
    for (std::size_t c : order) {
        classes_[c].active = false;
        index_relators();
        bool redundant = false;
        try {
            SearchResult r = search(class_key(classes_[c].s), classes_[c].weight, true, false, false, 20000);
            redundant = r.found;
        } catch (const BudgetExceeded&) {
            redundant = false;
        }
        if (!redundant) classes_[c].active = true;
    }
    index_relators();
}

Rational NormEngine::heuristic(const Word& w) const {
    if (rho_ab_ == 0) return 0;
    return rho_ab_ * Rational(l1(abelianize(w, gs_.rank())));
}

Rational NormEngine::plain_bound(const Word& w) const {
    Rational total = 0;
    for (Letter l : w.letters()) total += letter_value_[generator_of(l)];
    return total;
}

SearchResult NormEngine::search(const Word& start, const Rational& limit, bool inclusive, bool use_cache,
                                bool record_path, std::size_t budget) {
    SearchResult out;
    if (budget == 0) budget = opt_.max_expansions;
    auto within = [&](const Rational& f) { return inclusive ? f <= limit : f < limit; };
    std::vector<Node> nodes;
    std::unordered_map<Word, int, WordHash> ids;
    std::priority_queue<Item> open;
    Rational best_seen = limit;

    nodes.push_back({start, 0});
    ids.emplace(start, 0);
    Rational h0 = heuristic(start);
    if (!within(h0)) return out;
    open.push({h0, 0, 0});
    std::size_t expansions = 0;

    while (!open.empty()) {
        Item it = open.top();
        open.pop();
        Node& nd = nodes[it.id];
        if (nd.closed || it.g != nd.g) continue;
        if (nd.terminal || nd.rep.is_identity()) {
            out.found = true;
            out.cost = it.f;
            std::vector<int> chain;
            for (int k = it.id; k != -1; k = nodes[k].parent) chain.push_back(k);
            std::reverse(chain.begin(), chain.end());
            for (int k : chain) {
                if (use_cache && !nodes[k].terminal && !nodes[k].rep.is_identity())
                    cache_[nodes[k].rep] = out.cost - nodes[k].g;
                if (record_path) out.path.push_back({nodes[k].rep, nodes[k].rot, nodes[k].rel});
            }
            last_expansions_ = expansions;
            return out;
        }
        nd.closed = true;
        if (++expansions > budget) {
            last_expansions_ = expansions;
            throw BudgetExceeded("norm search exceeded " + std::to_string(budget) + " expansions", best_seen);
        }
        const Word x = nd.rep;
        const Rational g = nd.g;
        const std::size_t L = x.length();
        std::vector<Letter> y;
        for (std::size_t k = 0; k < L; ++k) {
            Letter last = x[(k + L - 1) % L];
            for (int ri : by_first_[letter_key(-last)]) {
                const Relator& rel = relators_[ri];
                const Rational ng = g + rel.weight;
                if (!within(ng)) continue;
                // y = rotate(x, k) * r, cancelled at the junction.
                y.clear();
                for (std::size_t t = 0; t < L; ++t) y.push_back(x[(k + t) % L]);
                std::size_t t = 0;
                while (t < rel.r.size() && !y.empty() && y.back() == -rel.r[t]) {
                    y.pop_back();
                    ++t;
                }
                y.insert(y.end(), rel.r.begin() + t, rel.r.end());
                Word key = class_key(Word::reduce(y));
                if (use_cache && !key.is_identity()) {
                    auto c = cache_.find(key);
                    if (c != cache_.end()) {
                        Rational f = ng + c->second;
                        if (within(f)) {
                            if (f < best_seen) best_seen = f;
                            nodes.push_back({key, ng, it.id, k, ri, false, true});
                            open.push({f, ng, static_cast<int>(nodes.size() - 1)});
                        }
                        continue;
                    }
                }
                Rational f = ng + heuristic(key);
                if (!within(f)) continue;
                auto found = ids.find(key);
                int id;
                if (found != ids.end()) {
                    Node& old = nodes[found->second];
                    if (old.closed || !(ng < old.g)) continue;
                    id = found->second;
                    old.g = ng;
                    old.parent = it.id;
                    old.rot = k;
                    old.rel = ri;
                } else {
                    id = static_cast<int>(nodes.size());
                    ids.emplace(key, id);
                    nodes.push_back({key, ng, it.id, k, ri});
                }
                if (key.is_identity() && ng < best_seen) best_seen = ng;
                open.push({f, ng, id});
            }
        }
    }
    last_expansions_ = expansions;
    return out;
}

namespace {
void push_conjugated(std::vector<std::pair<Word, Word>>& out, const Word& W, const Word& a, const Word& b) {
    for (Letter l : W.letters()) out.emplace_back(Word::reduce({l}), Word::reduce({l}));
    out.emplace_back(a, b);
    Word bi = inverse(b);
    out.emplace_back(bi, bi);
    for (auto it = W.letters().rbegin(); it != W.letters().rend(); ++it)
        out.emplace_back(Word::reduce({-*it}), Word::reduce({-*it}));
}

// Drops (1,1) pairs and replaces each run of zero pairs (x,x) by the letters of the
// run's reduced product.
std::vector<std::pair<Word, Word>> simplify(const std::vector<std::pair<Word, Word>>& in) {
    std::vector<std::pair<Word, Word>> out;
    std::vector<Letter> run;
    auto flush = [&]() {
        Word prod = Word::reduce(run);
        for (Letter l : prod.letters()) out.emplace_back(Word::reduce({l}), Word::reduce({l}));
        run.clear();
    };
    for (const auto& p : in) {
        if (p.first == p.second && p.first.length() <= 1) {
            run.insert(run.end(), p.first.letters().begin(), p.first.letters().end());
            continue;
        }
        flush();
        out.push_back(p);
    }
    flush();
    return out;
}
} // namespace

Decomposition NormEngine::reconstruct(const ClassForm& start, const SearchResult& res) const {
    const auto& E = gs_.entries();
    std::vector<std::vector<std::pair<Word, Word>>> left, right;
    Word T = start.conj;
    int sigma = start.sign;
    Decomposition out;
    for (std::size_t i = 1; i < res.path.size(); ++i) {
        const Step& prev = res.path[i - 1];
        const Step& st = res.path[i];
        const Relator& rel = relators_[st.rel];
        const Word& C = prev.rep;
        std::size_t k = st.rot;
        std::vector<Letter> y = rotate(C.letters(), k);
        y.insert(y.end(), rel.r.begin(), rel.r.end());
        ClassForm next = canonical_class(Word::reduce(y));
        Word p = Word::reduce(std::vector<Letter>(C.letters().begin(), C.letters().begin() + k));
        Word W = multiply({T, p, inverse(rel.z)});
        const Word& a = E[rel.a];
        const Word& b = E[rel.b];
        std::vector<std::pair<Word, Word>> factor;
        if (sigma > 0) {
            push_conjugated(factor, W, b, a);
            right.push_back(std::move(factor));
        } else {
            push_conjugated(factor, W, a, b);
            left.push_back(std::move(factor));
        }
        out.cost += rel.weight;
        T = multiply({T, p, next.conj});
        sigma = sigma > 0 ? next.sign : -next.sign;
    }
    std::vector<std::pair<Word, Word>> all;
    for (auto& f : left) all.insert(all.end(), f.begin(), f.end());
    for (auto it = right.rbegin(); it != right.rend(); ++it) all.insert(all.end(), it->begin(), it->end());
    out.pairs = simplify(all);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------- FinGenMetric

FinGenMetric::FinGenMetric(GenSet genset, std::optional<Rational> bound, SearchOptions options)
    : genset_(std::move(genset)), bound_(bound), options_(options) {
    if (bound_ && *bound_ <= 0) throw Error("bound must be positive");
    for (int f = 1; f <= genset_.rank(); ++f)
        if (!genset_.get(Word::generator(f), Word()))
            throw Error("missing generator entry for generator " + std::to_string(f));
    if (bound_) {
        GenSet clamped(genset_.rank());
        for (const Word& w : genset_.entries()) clamped.add(w);
        for (auto [i, j] : genset_.defined_pairs())
            clamped.set(genset_.entries()[i], genset_.entries()[j], rmin(*genset_.at(i, j), *bound_));
        genset_ = std::move(clamped);
    }
    engine_ = std::make_shared<detail::NormEngine>(genset_, bound_, options_);
}

detail::NormEngine& FinGenMetric::engine() const { return *engine_; }

Rational FinGenMetric::norm(const Word& g) const {
    check_rank(g, rank());
    return engine().norm(g, std::nullopt);
}

Rational FinGenMetric::norm_capped(const Word& g, const Rational& cap) const {
    check_rank(g, rank());
    return engine().norm(g, cap);
}

Decomposition FinGenMetric::witness(const Word& g) const {
    check_rank(g, rank());
    return engine().witness(g);
}

std::size_t FinGenMetric::last_expansions() const { return engine().last_expansions(); }

ValidationResult FinGenMetric::validate() const {
    ValidationResult out;
    const auto& E = genset_.entries();
    for (auto [i, j] : genset_.defined_pairs()) {
        Rational v = *genset_.at(i, j);
        if (v == 0) {
            out.valid = false;
            out.violation = Violation{E[i], E[j], "degenerate", v, 0};
            return out;
        }
        Rational n = norm_capped(multiply(E[i], inverse(E[j])), v);
        if (n < v) {
            out.valid = false;
            out.violation = Violation{E[i], E[j], "decomposition", v, n};
            return out;
        }
    }
    return out;
}

FinGenMetric FinGenMetric::completed() const {
    GenSet gs = genset_;
    const auto& E = genset_.entries();
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = i + 1; j < E.size(); ++j)
            if (!gs.at(i, j)) gs.set(E[i], E[j], dist(E[i], E[j]));
    return FinGenMetric(std::move(gs), bound_, options_);
}

FinGenMetric FinGenMetric::tightened() const {
    GenSet gs(rank());
    const auto& E = genset_.entries();
    for (const Word& w : E) gs.add(w);
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = i + 1; j < E.size(); ++j) gs.set(E[i], E[j], dist(E[i], E[j]));
    return FinGenMetric(std::move(gs), bound_, options_);
}

Rational FinGenMetric::max_generator_value() const {
    Rational L = 0;
    for (int f = 1; f <= rank(); ++f) L = rmax(L, *genset_.get(Word::generator(f), Word()));
    return L;
}

Rational FinGenMetric::min_positive_value() const {
    std::optional<Rational> l;
    for (auto [i, j] : genset_.defined_pairs()) {
        Rational v = *genset_.at(i, j);
        if (v > 0 && (!l || v < *l)) l = v;
    }
    return l.value_or(Rational(0));
}

SearchBudget FinGenMetric::budget(const Word& g) const {
    SearchBudget b;
    b.L = max_generator_value();
    b.l = min_positive_value();
    b.ratio = b.l > 0 ? b.L / b.l : Rational(0);
    b.max_pairs = static_cast<std::size_t>(bimet::ceil(b.ratio * Rational(static_cast<std::int64_t>(g.length()))));
    if (bound_ && b.l > 0)
        b.max_pairs = std::min<std::size_t>(b.max_pairs, static_cast<std::size_t>(bimet::ceil(*bound_ / b.l)) + 1);
    std::size_t maxlen = 0;
    for (const Word& w : genset_.entries()) maxlen = std::max(maxlen, w.length());
    b.node_horizon = b.max_pairs * maxlen;
    return b;
}

// ---------------------------------------------------------------- oracles

BruteForceResult norm_bruteforce(const FinGenMetric& m, const Word& g, std::size_t max_pairs) {
    const GenSet& gs = m.genset();
    if (gs.size() > 9) throw Error("brute force capped at |A| <= 9");
    if (max_pairs > 7) throw Error("brute force capped at 7 pairs");
    const auto& E = gs.entries();
    std::vector<std::tuple<Word, Word, Rational>> pairs;
    std::size_t maxlen = 0;
    for (std::size_t i = 0; i < E.size(); ++i) {
        maxlen = std::max(maxlen, E[i].length());
        for (std::size_t j = 0; j < E.size(); ++j)
            if ((i || j) && gs.at(i, j)) pairs.emplace_back(E[i], E[j], *gs.at(i, j));
    }
    BruteForceResult out;
    out.max_pairs = max_pairs;
    auto consider = [&](const Rational& c) {
        if (!out.found || c < out.value) out.value = c;
        out.found = true;
    };
    std::map<std::pair<std::vector<Letter>, std::vector<Letter>>, Rational> layer;
    layer[{{}, {}}] = 0;
    if (g.is_identity()) consider(0);
    for (std::size_t step = 1; step <= max_pairs; ++step) {
        std::size_t room = (max_pairs - step) * maxlen;
        std::map<std::pair<std::vector<Letter>, std::vector<Letter>>, Rational> next;
        for (const auto& [state, cost] : layer) {
            Word pa = Word::reduce(state.first), pb = Word::reduce(state.second);
            for (const auto& [a, b, w] : pairs) {
                Word na = multiply(pa, a), nb = multiply(pb, b);
                if (nb.length() > room) continue;
                if (multiply(inverse(na), g).length() > room) continue;
                Rational c = cost + w;
                auto key = std::make_pair(na.letters(), nb.letters());
                auto it = next.find(key);
                if (it == next.end() || c < it->second) next[key] = c;
            }
        }
        layer = std::move(next);
        auto hit = layer.find({g.letters(), {}});
        if (hit != layer.end()) consider(hit->second);
    }
    if (out.found && m.bound()) out.value = rmin(out.value, *m.bound());
    return out;
}

Rational dist_value(const FinGenMetric& m, const Word& a, const Word& b) { return m.dist(a, b); }

std::pair<Word, Word> endpoints(const Decomposition& d) {
    std::vector<Letter> a, b;
    for (const auto& [x, y] : d.pairs) {
        a.insert(a.end(), x.letters().begin(), x.letters().end());
        b.insert(b.end(), y.letters().begin(), y.letters().end());
    }
    return {Word::reduce(a), Word::reduce(b)};
}

Rational decomposition_cost(const FinGenMetric& m, const Decomposition& d) {
    Rational total = 0;
    for (const auto& [x, y] : d.pairs) {
        auto v = m.genset().get(x, y);
        if (!v) throw Error("decomposition uses an undefined pair");
        total += *v;
    }
    return total;
}

bool check_tightness(const FinGenMetric& m, const Decomposition& d) {
    const auto& P = d.pairs;
    for (std::size_t i = 0; i < P.size(); ++i) {
        Word a, b;
        Rational sum = 0;
        for (std::size_t j = i; j < P.size(); ++j) {
            a = multiply(a, P[j].first);
            b = multiply(b, P[j].second);
            sum += *m.genset().get(P[j].first, P[j].second);
            if (m.dist(a, b) != sum) return false;
        }
    }
    return true;
}

} // namespace bimet
