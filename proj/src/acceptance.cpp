#include "bimet/acceptance.hpp"

#include "bimet/corpus.hpp"
#include "bimet/fraisse.hpp"
#include "bimet/graev.hpp"
#include "bimet/metspace.hpp"
#include "bimet/nonuniv.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#ifndef BIMET_DATA_DIR
#define BIMET_DATA_DIR "data"
#endif

namespace bimet {

namespace {

// Wall-clock limits in seconds, by criterion.
constexpr double kLimitGraev = 60;
constexpr double kLimitFingen = 120;
constexpr double kLimitAxioms = 120;
constexpr double kLimitKeylemma2 = 10;
constexpr double kLimitKeylemma4 = 600;
constexpr double kLimitSeparation = 60;
constexpr double kLimitApproxN = 120;
constexpr double kLimitApproxQ = 120;
constexpr double kLimitAmalgam = 120;
constexpr double kLimitChain = 300;
constexpr double kLimitBnf = 300;
constexpr double kLimitKatetov = 300;

// Corpus sizes and depths.
constexpr int kGraevSeeds = 100, kGraevLen = 6;
constexpr int kFingenSeeds = 100, kFingenLen = 3, kFingenPairs = 6;
constexpr int kApproxSeeds = 20;
constexpr int kAmalgamSeeds = 50, kAmalgamDepth = 3;
constexpr int kChainDepth = 4, kChainSeedA = 7, kChainSeedB = 11;
constexpr int kKatetovSeeds = 20, kKatetovDepth = 4;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (pass) detail.str("");
        if (!pass) detail << "; ";
        pass = false;
        detail << why;
    }
    void note(const std::string& s) {
        if (pass) detail << (detail.tellp() > 0 ? "; " : "") << s;
    }
};

class Golden {
public:
    explicit Golden(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            error_ = "cannot read golden file " + path;
            return;
        }
        for (std::string line; std::getline(in, line);) {
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t\r"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
                return s;
            };
            values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    // Compares text; records a failure naming the key on mismatch.
    void expect(Outcome& o, const std::string& key, const std::string& actual) const {
        if (!error_.empty()) return o.fail(error_);
        auto it = values_.find(key);
        if (it == values_.end()) return o.fail("golden key " + key + " missing");
        if (it->second != actual) o.fail("golden " + key + " = " + it->second + ", computed " + actual);
    }

private:
    std::map<std::string, std::string> values_;
    std::string error_;
};

std::string ranks_of(const Chain& c) {
    std::string s;
    for (const auto& st : c.stages) s += (s.empty() ? "" : " ") + std::to_string(st->rank());
    return s;
}

void c_graev(Outcome& o, const Golden&) {
    std::size_t words = 0;
    for (int s = 0; s < kGraevSeeds && o.pass; ++s) {
        PointedSpace sp = random_space(static_cast<std::uint64_t>(s));
        Alphabet al = sp.alphabet();
        for (const Word& w : enumerate_ball(sp.size(), kGraevLen)) {
            ++words;
            Rational dp = graev_norm(w, sp), bf = graev_norm_bruteforce(w, sp);
            if (dp != bf) {
                o.fail("seed " + std::to_string(s) + " word " + al.format(w) + ": dp " + to_string(dp) + ", matches " +
                       to_string(bf));
                break;
            }
        }
    }
    o.note(std::to_string(words) + " words over " + std::to_string(kGraevSeeds) + " spaces agree");
}

void c_fingen(Outcome& o, const Golden&) {
    std::size_t checked = 0;
    for (int s = 0; s < kFingenSeeds && o.pass; ++s) {
        FinGenMetric m = random_table(static_cast<std::uint64_t>(s));
        Alphabet al(m.rank());
        for (const Word& g : enumerate_ball(m.rank(), kFingenLen)) {
            ++checked;
            Rational n = m.norm(g);
            BruteForceResult b = norm_bruteforce(m, g, kFingenPairs);
            if (!b.found || b.value != n) {
                o.fail("seed " + std::to_string(s) + " word " + al.format(g) + ": engine " + to_string(n) +
                       ", brute force " + (b.found ? to_string(b.value) : std::string("none")));
                break;
            }
        }
    }
    o.note(std::to_string(checked) + " norms agree over " + std::to_string(kFingenSeeds) + " tables");
}

void c_axioms(Outcome& o, const Golden&) {
    for (int s = 0; s < kFingenSeeds && o.pass; ++s) {
        FinGenMetric m = random_table(static_cast<std::uint64_t>(s));
        Alphabet al(m.rank());
        auto W3 = enumerate_ball(m.rank(), 3), W2 = enumerate_ball(m.rank(), 2), W1 = enumerate_ball(m.rank(), 1);
        const Rational lmin = m.min_positive_value();
        auto where = [&](const char* what, const Word& g) {
            o.fail(std::string(what) + " fails: seed " + std::to_string(s) + " word " + al.format(g));
        };
        for (const Word& g : W3) {
            Rational n = m.norm(g);
            if (m.norm(inverse(g)) != n) return where("inverse symmetry", g);
            if (!g.is_identity() && n < lmin) return where("discreteness", g);
            for (const Word& h : W1)
                if (m.norm(multiply({h, g, inverse(h)})) != n) return where("conjugation invariance", g);
        }
        for (const Word& g : W2)
            for (const Word& h : W2)
                if (m.norm(multiply(g, h)) > m.norm(g) + m.norm(h)) return where("subadditivity", multiply(g, h));
    }
    o.note("conjugation, inversion, subadditivity and discreteness hold on all " + std::to_string(kFingenSeeds) +
           " tables");
}

void c_keylemma2(Outcome& o, const Golden& gold) {
    for (int bit : {0, 1}) {
        KeyLemmaReport r = verify_keylemma(2, BitPrefix({bit}));
        gold.expect(o, "keylemma.n2.bit" + std::to_string(bit), to_string(r.from_below));
        if (!r.pass || r.bound != Rational(5)) o.fail("n=2 bit " + std::to_string(bit) + " below the bound");
        o.note("bit " + std::to_string(bit) + ": from_below=" + to_string(r.from_below) + " bound=" + to_string(r.bound));
    }
}

void c_keylemma4(Outcome& o, const Golden& gold) {
    for (int bit : {0, 1}) {
        KeyLemmaReport r;
        try {
            r = verify_keylemma(4, BitPrefix({bit}));
        } catch (const BudgetExceeded& e) {
            o.fail("n=4 bit " + std::to_string(bit) + " search exceeded its budget (upper bound " +
                   to_string(e.upper_bound()) + ")");
            continue;
        }
        gold.expect(o, "keylemma.n4.bit" + std::to_string(bit), to_string(r.from_below));
        if (!r.pass || r.from_below < Rational(10)) o.fail("n=4 bit " + std::to_string(bit) + " below 10");
        o.note("bit " + std::to_string(bit) + ": from_below=" + to_string(r.from_below) + " (" +
               std::to_string(r.expansions) + " expansions)");
    }
    Decomposition cert = keylemma_certificate_n4();
    FinGenMetric below = family_genset(4, BitPrefix({0}), true);
    auto [top, bottom] = endpoints(cert);
    if (cert.pairs.size() != 11) o.fail("certificate does not have 11 pairs");
    if (top != family_letter(4) || !bottom.is_identity()) o.fail("certificate does not decompose a^4 b^4 c^4");
    gold.expect(o, "keylemma.n4.certificate_cost", to_string(decomposition_cost(below, cert)));
}

void c_separation(Outcome& o, const Golden& gold) {
    for (int k : {1, 2}) {
        std::vector<int> xb(k, 0), yb(k, 0);
        yb[k - 1] = 1;
        BitPrefix x(xb), y(yb);
        SeparationCertificate cert = separation_witness(x, y);
        int n = 1 << k;
        auto fx = std::make_shared<FinGenMetric>(family_genset(n, x));
        auto fy = std::make_shared<FinGenMetric>(family_genset(n, y));
        DistOptions opt;
        opt.candidates = {cert.witness};
        DistInterval di = dist_interval(MetricOracle::from_metric(fx), MetricOracle::from_metric(fy), 3 * n, opt);
        gold.expect(o, "separation.k" + std::to_string(k), to_string(cert.ratio));
        if (cert.ratio != Rational(1, 6)) o.fail("k=" + std::to_string(k) + " witness ratio " + to_string(cert.ratio));
        if (di.lo < Rational(1, 6)) o.fail("k=" + std::to_string(k) + " lo " + to_string(di.lo) + " < 1/6");
        o.note("k=" + std::to_string(k) + ": lo=" + to_string(di.lo) + " at depth " + std::to_string(di.depth) +
               (di.exhaustive ? "" : " plus witness"));
    }
}

void c_approx_n(Outcome& o, const Golden&) {
    for (int s = 0; s < kApproxSeeds && o.pass; ++s) {
        int rank = 1 + s % 2, N = 1 + s % 3;
        auto m = std::make_shared<FinGenMetric>(random_bounded_table(static_cast<std::uint64_t>(s), rank));
        MetricOracle src = tabulate(MetricOracle::from_metric(m), 2 * N + 1);
        auto p = std::make_shared<FinGenMetric>(n_approximation(src, N));
        for (const Word& w : enumerate_ball(rank, N))
            if (p->norm(w) != src.norm(w)) {
                o.fail("seed " + std::to_string(s) + ": N-approximation differs on W_" + std::to_string(N));
                break;
            }
        MetricOracle po = MetricOracle::from_metric(p);
        DistInterval cert = dist_interval(src, po, N);
        DistInterval past = dist_interval(src, po, N + 1);
        if (!cert.hi || *cert.hi > Rational(1, N)) o.fail("seed " + std::to_string(s) + ": certified dist exceeds 1/N");
        if (past.lo > Rational(1, N)) o.fail("seed " + std::to_string(s) + ": measured dist exceeds 1/N on W_(N+1)");
    }
    o.note(std::to_string(kApproxSeeds) + " approximations exact on W_N with dist <= 1/N");
}

void c_approx_q(Outcome& o, const Golden&) {
    const Rational eps(1, 4);
    const std::int64_t cap = 400; // width eps*l/L >= 1/388 for q <= 97 inputs
    for (int s = 0; s < kApproxSeeds && o.pass; ++s) {
        int rank = 1 + s % 2;
        FinGenMetric p = random_bounded_table(static_cast<std::uint64_t>(s), rank, Rational(1), 97);
        RationalApproximation ra = rational_approximation(p, eps, cap);
        const std::string at = "seed " + std::to_string(s) + ": ";
        if (!ra.metric.validate().valid) o.fail(at + "output does not validate");
        if (ra.max_denominator > cap) o.fail(at + "denominator above the cap");
        for (auto [i, j] : ra.metric.genset().defined_pairs())
            if (ra.metric.genset().at(i, j)->denominator() > cap) o.fail(at + "table denominator above the cap");
        for (const Word& w : enumerate_ball(rank, 3))
            if (ra.metric.norm(w) < p.norm(w)) {
                o.fail(at + "output does not dominate the input");
                break;
            }
        if (!ra.certificate || !ra.certificate->hi || *ra.certificate->hi > eps) o.fail(at + "certified dist exceeds eps");
    }
    o.note(std::to_string(kApproxSeeds) + " approximations validate, dominate, and certify dist <= 1/4 with q <= 400");
}

// n(map(w)) == source n(w) on every word of W_depth.
bool exact_on_ball(const Morphism& m, int depth) {
    for (const Word& w : enumerate_ball(m.source->rank(), depth))
        if (m.target->norm(m.apply(w)) != m.source->norm(w)) return false;
    return true;
}

void c_amalgam(Outcome& o, const Golden&) {
    int joins = 0, amalgams = 0, extensions = 0;
    for (int s = 0; s < kAmalgamSeeds && o.pass; ++s) {
        const auto us = static_cast<std::uint64_t>(s);
        const std::string at = "instance " + std::to_string(s) + ": ";
        if (s % 3 == 0) {
            auto g1 = make_object(random_bounded_table(us, 1 + s % 2));
            auto g2 = make_object(random_bounded_table(us + 1000, 1));
            Amalgam am = joint_embedding(g1, g2, 0);
            if (!exact_on_ball(am.from_left, kAmalgamDepth) || !exact_on_ball(am.from_right, kAmalgamDepth))
                o.fail(at + "joint embedding is not exact on W_3");
            ++joins;
        } else if (s % 3 == 1) {
            auto base = make_object(random_bounded_table(us, 1));
            auto g1 = realize_katetov(base, random_katetov(*base, us)).extended;
            auto g2 = realize_katetov(base, random_katetov(*base, us + 7)).extended;
            Morphism l = identity_prefix(base, g1), r = identity_prefix(base, g2);
            if (!exact_on_ball(l, kAmalgamDepth) || !exact_on_ball(r, kAmalgamDepth)) continue;
            Amalgam am = amalgamate(l, r, 0);
            if (!exact_on_ball(am.from_left, kAmalgamDepth) || !exact_on_ball(am.from_right, kAmalgamDepth))
                o.fail(at + "amalgam is not exact on W_3");
            ++amalgams;
        } else {
            auto p = make_object(random_bounded_table(us, 1 + s % 2));
            Rational reach = *p->bound();
            for (int g = 1; g <= p->rank(); ++g) reach = rmin(reach, Rational(2) * p->norm(Word::generator(g)));
            Rational delta = reach / Rational(1 + s % 2);
            ExtendedPair ep = extend_pair(p, p, delta, 3, 0);
            for (const Rational& c : ep.cross)
                if (c != delta) o.fail(at + "cross distance " + to_string(c) + " != delta " + to_string(delta));
            if (!exact_on_ball(ep.from_p1, kAmalgamDepth) || !exact_on_ball(ep.from_p2, kAmalgamDepth))
                o.fail(at + "extension is not exact on W_3");
            ++extensions;
        }
    }
    if (joins + amalgams + extensions < kAmalgamSeeds * 9 / 10) o.fail("too many instances skipped");
    o.note(std::to_string(joins) + " joins, " + std::to_string(amalgams) + " amalgams, " + std::to_string(extensions) +
           " extensions exact on W_3");
}

std::vector<ClassObject> embedding_targets() {
    std::vector<ClassObject> out;
    const Word a = Word::generator(1), b = Word::generator(2), one;
    {
        GenSet gs(1);
        gs.set(a, one, Rational(1, 2));
        out.push_back(make_object(FinGenMetric(gs, Rational(1))));
    }
    {
        GenSet gs(2);
        gs.set(a, one, Rational(1));
        gs.set(b, one, Rational(1, 2));
        gs.set(a, b, Rational(1));
        out.push_back(make_object(FinGenMetric(gs, Rational(1))));
    }
    {
        GenSet gs(2);
        gs.set(a, one, Rational(3, 4));
        gs.set(b, one, Rational(3, 4));
        gs.set(multiply(a, b), one, Rational(1, 2));
        out.push_back(make_object(FinGenMetric(gs, Rational(1))));
    }
    return out;
}

void c_chain(Outcome& o, const Golden& gold) {
    gold.expect(o, "enumerate.K1.default_caps", std::to_string(enumerate_class(Rational(1), {}).size()));
    Chain c = build_chain(Rational(1), kChainDepth, kChainSeedA);
    gold.expect(o, "chain.K1.seed7.ranks", ranks_of(c));
    for (const auto& r : c.requests)
        if (!r.certified) o.fail("request t=" + std::to_string(r.t) + " not certified");
    for (const auto& link : c.links)
        for (std::size_t g = 0; g < link.images.size(); ++g)
            if (link.images[g] != Word::generator(static_cast<int>(g) + 1)) o.fail("a link moves an old generator");
    int t = 0;
    for (const ClassObject& target : embedding_targets()) {
        ++t;
        Chain work = c;
        EmbedResult er = embed_target(target, work, kChainDepth);
        const std::string at = "target " + std::to_string(t) + ": ";
        if (!er.restriction_checked) o.fail(at + "prefix restriction not exact");
        Rational pow2 = 1;
        for (const EmbedStage& st : er.stages) {
            pow2 *= 2;
            if (st.epsilon > Rational(1) / pow2) o.fail(at + "eps_" + std::to_string(st.n) + " above 1/2^n");
            if (st.has_drift && st.drift != st.epsilon)
                o.fail(at + "drift " + to_string(st.drift) + " != eps_" + std::to_string(st.n));
            if (st.closeness.lo != 0 || st.closeness.lo > st.epsilon)
                o.fail(at + "stage " + std::to_string(st.n) + " closeness lo " + to_string(st.closeness.lo));
        }
    }
    o.note(std::to_string(c.requests.size()) + " requests certified; 3 targets with drift = eps_n, closeness 0 on W_3");
}

void c_bnf(Outcome& o, const Golden&) {
    Chain a = build_chain(Rational(1), kChainDepth, kChainSeedA);
    Chain b = build_chain(Rational(1), kChainDepth, kChainSeedB);
    BackAndForthTrace tr = back_and_forth(a, b, kChainDepth, 3);
    for (const auto& st : tr.steps) {
        const std::string at = "step " + std::to_string(st.n) + st.side + ": ";
        if (st.isometry.lo > st.bound) o.fail(at + "isometry lo " + to_string(st.isometry.lo) + " > " + to_string(st.bound));
        if (st.roundtrip_max_ratio > st.bound)
            o.fail(at + "round trip ratio " + to_string(st.roundtrip_max_ratio) + " > " + to_string(st.bound));
        if (!st.ok) o.fail(at + "not ok");
    }
    o.note(std::to_string(tr.steps.size()) + " steps: isometry, round trip and drift within bounds");
}

void c_katetov(Outcome& o, const Golden&) {
    Chain c = build_chain(Rational(1), kChainDepth, kChainSeedA);
    ClassObject stage = c.stages.back();
    int verified = 0;
    for (int s = 0; s < kKatetovSeeds; ++s) {
        KatetovMap f = random_katetov(*stage, static_cast<std::uint64_t>(s));
        KatetovReport r = realize_katetov(stage, f, kKatetovDepth);
        if (r.verified())
            ++verified;
        else
            o.fail("seed " + std::to_string(s) + (r.old_unchanged ? ": support not realized" : ": old distances moved"));
    }
    o.note(std::to_string(verified) + "/" + std::to_string(kKatetovSeeds) + " VERIFIED at depth " +
           std::to_string(kKatetovDepth));
}

struct Criterion {
    const char* name;
    double limit;
    void (*fn)(Outcome&, const Golden&);
};

const Criterion kCriteria[] = {
    {"graev", kLimitGraev, c_graev},         {"fingen", kLimitFingen, c_fingen},
    {"axioms", kLimitAxioms, c_axioms},      {"keylemma2", kLimitKeylemma2, c_keylemma2},
    {"keylemma4", kLimitKeylemma4, c_keylemma4}, {"separation", kLimitSeparation, c_separation},
    {"approx-n", kLimitApproxN, c_approx_n}, {"approx-q", kLimitApproxQ, c_approx_q},
    {"amalgam", kLimitAmalgam, c_amalgam},   {"chain", kLimitChain, c_chain},
    {"bnf", kLimitBnf, c_bnf},               {"katetov", kLimitKatetov, c_katetov},
};

} // namespace

std::string default_golden_path() { return std::string(BIMET_DATA_DIR) + "/golden.txt"; }

const std::vector<std::string>& criterion_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : kCriteria) v.push_back(c.name);
        return v;
    }();
    return names;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    for (const auto& n : options.only)
        if (std::find(criterion_names().begin(), criterion_names().end(), n) == criterion_names().end())
            throw Error("unknown criterion '" + n + "'");
    Golden gold(options.golden_path.empty() ? default_golden_path() : options.golden_path);
    std::vector<CriterionResult> out;
    int id = 0;
    for (const auto& c : kCriteria) {
        ++id;
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.name) == options.only.end())
            continue;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.fn(o, gold);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        CriterionResult r;
        r.id = id;
        r.name = c.name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.time_limit = c.limit;
        if (r.seconds > c.limit) {
            std::ostringstream ss;
            ss << "took " << r.seconds << " s, limit " << c.limit << " s";
            o.fail(ss.str());
        }
        r.pass = o.pass;
        r.detail = o.detail.str();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace bimet
