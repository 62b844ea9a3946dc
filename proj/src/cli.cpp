#include "bimet/cli.hpp"

#include "bimet/acceptance.hpp"
#include "bimet/fraisse.hpp"
#include "bimet/io.hpp"
#include "bimet/metspace.hpp"
#include "bimet/nonuniv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace bimet {

using nlohmann::json;

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(0, "cannot open config " + path);
    Config c;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(line_no, "expected 'key = value'");
        std::istringstream k(line.substr(0, eq)), v(line.substr(eq + 1));
        std::string key;
        long long value = 0;
        k >> key;
        const long long least = key == "verbosity" ? 0 : 1;
        if (!(v >> value) || value < least)
            throw FormatError(line_no, "value for " + key + " must be an integer >= " + std::to_string(least));
        if (key == "max_expansions")
            c.max_expansions = static_cast<std::size_t>(value);
        else if (key == "cert_depth")
            c.cert_depth = static_cast<int>(value);
        else if (key == "denom_cap")
            c.denom_cap = value;
        else if (key == "workers")
            c.workers = static_cast<int>(value);
        else if (key == "verbosity")
            c.verbosity = static_cast<int>(value);
        else
            throw FormatError(line_no, "unknown key " + key);
    }
    return c;
}

namespace {

SearchOptions options_of(const Config& c) {
    SearchOptions o;
    o.max_expansions = c.max_expansions;
    return o;
}

FgmFile load_metric(const std::string& path, const Config& cfg) {
    FgmFile f = read_fgm_file(path);
    return FgmFile{f.names, FinGenMetric(f.metric.genset(), f.metric.bound(), options_of(cfg))};
}

Word parse_word(const Alphabet& al, const std::string& text) {
    try {
        return al.parse(text);
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(0, "bad word '" + text + "': " + e.what());
    }
}

std::vector<Word> parse_images(const Alphabet& al, const std::string& text) {
    std::vector<Word> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        out.push_back(parse_word(al, text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_images(const Alphabet& al, const std::vector<Word>& ws) {
    std::string s;
    for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? ", " : "") + al.format(ws[i]);
    return s;
}

std::string format_decomposition(const Alphabet& al, const Decomposition& d) {
    std::string s;
    for (const auto& [u, v] : d.pairs) s += (s.empty() ? "" : " ") + ("(" + al.format(u) + ", " + al.format(v) + ")");
    return s.empty() ? "()" : s;
}

json decomposition_json(const Alphabet& al, const Decomposition& d) {
    json pairs = json::array();
    for (const auto& [u, v] : d.pairs) pairs.push_back({al.format(u), al.format(v)});
    return {{"pairs", pairs}, {"cost", to_string(d.cost)}, {"clamped", d.clamped}};
}

json interval_json(const Alphabet& al, const DistInterval& di) {
    json j{{"lo", to_string(di.lo)},
           {"hi", di.hi ? json(to_string(*di.hi)) : json(nullptr)},
           {"depth", di.depth},
           {"requested_depth", di.requested_depth},
           {"exhaustive", di.exhaustive},
           {"witness", al.format(di.witness)},
           {"examined", di.examined}};
    return j;
}

std::string interval_text(const Alphabet& al, const DistInterval& di) {
    std::ostringstream s;
    s << "lo=" << to_string(di.lo) << " hi=" << (di.hi ? to_string(*di.hi) : std::string("unknown"))
      << " depth=" << di.depth;
    if (!di.exhaustive) s << " requested=" << di.requested_depth << " (not exhaustive)";
    s << " witness=" << al.format(di.witness);
    return s.str();
}

// Names for a constructed object: the given ones when distinct, else defaults.
std::vector<std::string> merged_names(std::vector<std::string> names, int rank) {
    std::set<std::string> seen(names.begin(), names.end());
    if (static_cast<int>(names.size()) != rank || seen.size() != names.size()) return default_names(rank);
    return names;
}

void emit_fgm(std::ostream& out, const std::string& path, const FinGenMetric& m, const std::vector<std::string>& names) {
    if (path.empty()) {
        write_fgm(out, m, names);
        return;
    }
    std::ofstream f(path);
    if (!f) throw FormatError(0, "cannot write " + path);
    write_fgm(f, m, names);
}

std::string fgm_text(const FinGenMetric& m, const std::vector<std::string>& names) {
    std::ostringstream s;
    write_fgm(s, m, names);
    return s.str();
}

struct Context {
    Config cfg;
    bool json_out = false;
    std::ostream* out;
    std::ostream* err;
    int status = kExitOk;

    void report(const json& j, const std::string& text) const {
        if (json_out)
            *out << j.dump(2) << '\n';
        else
            *out << text;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.out = &out;
    ctx.err = &err;

    CLI::App app{"Bi-invariant metrics on free groups: exact norms, approximations, Fraisse chains"};
    app.name("bimet");
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Config file (default: $BIMET_CONFIG)");
    app.add_flag("--json", ctx.json_out, "Structured JSON output");

    // norm
    std::string metric_path, word_text;
    bool want_witness = false;
    auto* norm = app.add_subcommand("norm", "Exact norm of a word");
    norm->add_option("--metric", metric_path, ".fgm file")->required();
    norm->add_option("--word", word_text, "Word, e.g. \"a b^-1\"")->required();
    norm->add_flag("--witness", want_witness, "Print an optimal decomposition");

    // dist
    std::string left_path, right_path;
    int depth = 0;
    std::vector<std::string> candidates;
    auto* dist = app.add_subcommand("dist", "Certified interval for dist between two metrics");
    dist->add_option("--left", left_path, ".fgm file")->required();
    dist->add_option("--right", right_path, ".fgm file")->required();
    dist->add_option("--depth", depth, "Word length examined")->required()->check(CLI::PositiveNumber);
    dist->add_option("--candidate", candidates, "Extra words examined beyond the exhaustive ball");

    // validate
    auto* validate = app.add_subcommand("validate", "Check that a table is realized by its generated metric");
    validate->add_option("--metric", metric_path, ".fgm file")->required();

    // approx-n
    std::string out_path;
    std::string clamp_text;
    auto* approx_n = app.add_subcommand("approx-n", "N-approximation of a metric");
    approx_n->add_option("--metric", metric_path, ".fgm file")->required();
    approx_n->add_option("--depth", depth, "N")->required()->check(CLI::PositiveNumber);
    approx_n->add_option("--clamp", clamp_text, "Bound for unbounded inputs");
    approx_n->add_option("--out", out_path, "Write the .fgm here instead of stdout");

    // approx-q
    std::string eps_text;
    std::int64_t denom_cap = 0;
    auto* approx_q = app.add_subcommand("approx-q", "Rational approximation with bounded denominators");
    approx_q->add_option("--metric", metric_path, ".fgm file")->required();
    approx_q->add_option("--epsilon", eps_text, "eps as p/q")->required();
    approx_q->add_option("--denom-cap", denom_cap, "Largest denominator (default from config)");
    approx_q->add_option("--out", out_path, "Write the .fgm here instead of stdout");

    // amalgamate
    std::string base_path, left_map, right_map;
    auto* amalg = app.add_subcommand("amalgamate", "Amalgamate two objects over a common base");
    amalg->add_option("--base", base_path, "Base .fgm (omit for joint embedding)");
    amalg->add_option("--left", left_path, "Left factor .fgm")->required();
    amalg->add_option("--right", right_path, "Right factor .fgm")->required();
    amalg->add_option("--left-map", left_map, "Images of base generators in the left factor, comma separated");
    amalg->add_option("--right-map", right_map, "Images of base generators in the right factor, comma separated");
    amalg->add_option("--depth", depth, "Certification depth (default from config)");
    amalg->add_option("--out", out_path, "Write the .fgm here instead of stdout");

    // extend
    std::string p1_path, p2_path, delta_text;
    auto* extend = app.add_subcommand("extend", "Join p1 and p2 with generator cross distances delta");
    extend->add_option("--p1", p1_path, ".fgm on F_n")->required();
    extend->add_option("--p2", p2_path, ".fgm on F_m, m >= n")->required();
    extend->add_option("--delta", delta_text, "delta as p/q")->required();
    extend->add_option("--depth", depth, "Precondition and certification depth (default from config)");
    extend->add_option("--out", out_path, "Write the .fgm here instead of stdout");

    // chain
    auto* chain = app.add_subcommand("chain", "Fraisse chains");
    chain->require_subcommand(1);
    std::string k_text = "1";
    std::uint64_t seed = 0;
    ClassCaps caps;
    auto* build = chain->add_subcommand("build", "Build a chain");
    build->add_option("--K", k_text, "Bound K as p/q");
    build->add_option("--depth", depth, "Number of stages")->required()->check(CLI::PositiveNumber);
    build->add_option("--seed", seed, "Schedule seed");
    build->add_option("--max-rank", caps.max_rank, "Class enumeration cap");
    build->add_option("--max-entry-len", caps.max_entry_len, "Class enumeration cap");
    build->add_option("--max-denom", caps.max_denom, "Class enumeration cap");
    build->add_option("--max-entries", caps.max_entries, "Class enumeration cap");
    build->add_option("--out", out_path, "Write the chain here instead of stdout");
    std::string chain_path, target_path, chain_b_path;
    auto* embed = chain->add_subcommand("embed", "Embed a 1-bounded target into a chain");
    embed->add_option("--chain", chain_path, "Chain file")->required();
    embed->add_option("--target", target_path, "Target .fgm")->required();
    embed->add_option("--depth", depth, "Stages")->required()->check(CLI::PositiveNumber);
    embed->add_option("--out", out_path, "Write the extended chain here");
    int sample_len = 3;
    auto* bnf = chain->add_subcommand("bnf", "Back-and-forth between two chains");
    bnf->add_option("--a", chain_path, "First chain file")->required();
    bnf->add_option("--b", chain_b_path, "Second chain file")->required();
    bnf->add_option("--depth", depth, "Rounds")->required()->check(CLI::PositiveNumber);
    bnf->add_option("--sample-len", sample_len, "Longest sampled word for round trips");

    // katetov
    std::vector<std::string> points, values;
    auto* katetov = app.add_subcommand("katetov", "Realize a Katetov map by a new generator");
    katetov->add_option("--metric", metric_path, "Stage .fgm")->required();
    katetov->add_option("--point", points, "Support word (repeat)")->required();
    katetov->add_option("--value", values, "Value p/q for the matching --point (repeat)")->required();
    katetov->add_option("--depth", depth, "Verification depth (default 4)");
    katetov->add_option("--out", out_path, "Write the extension .fgm here");

    // nonuniv
    auto* nonuniv = app.add_subcommand("nonuniv", "The continuum family of metrics on F_3");
    nonuniv->require_subcommand(1);
    int n_value = 0;
    std::string bits_text, x_text, y_text;
    auto* verify = nonuniv->add_subcommand("verify", "Exact from-below norm of a^n b^n c^n");
    verify->add_option("--n", n_value, "2, 4 or 8")->required()->check(CLI::IsMember({2, 4, 8}));
    verify->add_option("--bits", bits_text, "Bit prefix, e.g. 01")->required();
    verify->add_flag("--witness", want_witness, "Print an optimal decomposition");
    auto* separate = nonuniv->add_subcommand("separate", "Separation certificate for two prefixes");
    separate->add_option("--x", x_text, "Bit prefix")->required();
    separate->add_option("--y", y_text, "Bit prefix")->required();
    std::string oracle_path, emb0_text, emb1_text, ref0_path, ref1_path;
    auto* pack = nonuniv->add_subcommand("pack", "Packing bound check for two embeddings of F_3");
    pack->add_option("--oracle", oracle_path, "Ambient .fgm")->required();
    pack->add_option("--emb0", emb0_text, "Images of a, b, c, comma separated")->required();
    pack->add_option("--emb1", emb1_text, "Images of a, b, c, comma separated")->required();
    pack->add_option("--depth", depth, "Word length checked")->required()->check(CLI::PositiveNumber);
    pack->add_option("--ref0", ref0_path, "Reference .fgm on F_3 for emb0");
    pack->add_option("--ref1", ref1_path, "Reference .fgm on F_3 for emb1");

    // selftest
    std::vector<std::string> only;
    std::string golden;
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_option("--only", only, "Run only these criteria")->check(CLI::IsMember(criterion_names()));
    selftest->add_option("--golden", golden, "Golden values file");

    std::vector<const char*> argv{"bimet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (config_path.empty())
            if (const char* env = std::getenv("BIMET_CONFIG")) config_path = env;
        if (!config_path.empty()) ctx.cfg = load_config(config_path);
        const Config& cfg = ctx.cfg;
        const int cert_depth = depth > 0 ? depth : cfg.cert_depth;
        const auto started = std::chrono::steady_clock::now();

        if (*norm) {
            FgmFile f = load_metric(metric_path, cfg);
            Alphabet al(f.names);
            Word g = parse_word(al, word_text);
            Rational n = f.metric.norm(g);
            json j{{"word", al.format(g)}, {"norm", to_string(n)}};
            std::string text = to_string(n) + "\n";
            if (want_witness) {
                Decomposition d = f.metric.witness(g);
                j["witness"] = decomposition_json(al, d);
                text += "witness: " + format_decomposition(al, d) + "\n";
            }
            ctx.report(j, text);
        } else if (*dist) {
            FgmFile l = load_metric(left_path, cfg), r = load_metric(right_path, cfg);
            if (l.metric.rank() != r.metric.rank()) throw RankMismatch("metrics have different ranks");
            Alphabet al(l.names);
            DistOptions opt;
            for (const auto& c : candidates) opt.candidates.push_back(parse_word(al, c));
            DistInterval di = dist_interval(MetricOracle::from_metric(l.metric), MetricOracle::from_metric(r.metric),
                                            depth, opt);
            ctx.report(interval_json(al, di), interval_text(al, di) + "\n");
        } else if (*validate) {
            FgmFile f = load_metric(metric_path, cfg);
            Alphabet al(f.names);
            ValidationResult v = f.metric.validate();
            json j{{"valid", v.valid}};
            std::string text = "VALID\n";
            if (!v.valid) {
                const Violation& x = *v.violation;
                j["violation"] = {{"a", al.format(x.a)},
                                  {"b", al.format(x.b)},
                                  {"reason", x.reason},
                                  {"table", to_string(x.table_value)},
                                  {"generated", to_string(x.generated_value)}};
                text = "INVALID pair (" + al.format(x.a) + ", " + al.format(x.b) + ") " + x.reason +
                       " table=" + to_string(x.table_value) + " generated=" + to_string(x.generated_value) + "\n";
                ctx.status = kExitFailure;
            }
            ctx.report(j, text);
        } else if (*approx_n) {
            FgmFile f = load_metric(metric_path, cfg);
            std::optional<Rational> clamp;
            if (!clamp_text.empty()) clamp = parse_rational(clamp_text);
            FinGenMetric p = n_approximation(MetricOracle::from_metric(f.metric), depth, clamp);
            if (ctx.json_out)
                ctx.report({{"entries", p.genset().size()}, {"fgm", fgm_text(p, f.names)}}, "");
            else
                emit_fgm(out, out_path, p, f.names);
        } else if (*approx_q) {
            FgmFile f = load_metric(metric_path, cfg);
            Alphabet al(f.names);
            Rational eps = parse_rational(eps_text);
            RationalApproximation ra = rational_approximation(f.metric, eps, denom_cap > 0 ? denom_cap : cfg.denom_cap);
            json j{{"max_denominator", ra.max_denominator}, {"fgm", fgm_text(ra.metric, f.names)}};
            if (ra.certificate) j["certificate"] = interval_json(al, *ra.certificate);
            if (ctx.json_out) {
                ctx.report(j, "");
            } else {
                emit_fgm(out, out_path, ra.metric, f.names);
                if (ra.certificate) out << "# certificate " << interval_text(al, *ra.certificate) << '\n';
            }
        } else if (*amalg) {
            FgmFile l = load_metric(left_path, cfg), r = load_metric(right_path, cfg);
            ClassObject L = make_object(l.metric), R = make_object(r.metric);
            Amalgam am;
            if (base_path.empty()) {
                am = joint_embedding(L, R, cert_depth);
            } else {
                FgmFile b = load_metric(base_path, cfg);
                ClassObject B = make_object(b.metric);
                Morphism lm = identity_prefix(B, L), rm = identity_prefix(B, R);
                if (!left_map.empty()) lm.images = parse_images(Alphabet(l.names), left_map);
                if (!right_map.empty()) rm.images = parse_images(Alphabet(r.names), right_map);
                lm = certify(lm, cert_depth);
                rm = certify(rm, cert_depth);
                am = amalgamate(lm, rm, cert_depth);
            }
            std::vector<std::string> names = l.names;
            for (std::size_t g = 0; g < am.from_right.images.size(); ++g)
                if (am.from_right.images[g][0] > static_cast<int>(names.size())) names.push_back(r.names[g]);
            names = merged_names(names, am.object->rank());
            Alphabet al(names);
            json j{{"rank", am.object->rank()},
                   {"certified_depth", am.certified_depth},
                   {"right_images", format_images(al, am.from_right.images)},
                   {"fgm", fgm_text(*am.object, names)}};
            if (ctx.json_out) {
                ctx.report(j, "");
            } else {
                emit_fgm(out, out_path, *am.object, names);
                out << "# right factor -> " << format_images(al, am.from_right.images) << "; certified on W_"
                    << am.certified_depth << '\n';
            }
        } else if (*extend) {
            FgmFile a = load_metric(p1_path, cfg), b = load_metric(p2_path, cfg);
            ExtendedPair ep =
                extend_pair(make_object(a.metric), make_object(b.metric), parse_rational(delta_text), cert_depth,
                            cert_depth);
            std::vector<std::string> names;
            for (const auto& n : a.names) names.push_back(n + "'");
            names.insert(names.end(), b.names.begin(), b.names.end());
            names = merged_names(names, ep.object->rank());
            json cross = json::array();
            std::string ctext;
            for (const Rational& c : ep.cross) {
                cross.push_back(to_string(c));
                ctext += " " + to_string(c);
            }
            if (ctx.json_out) {
                ctx.report({{"cross", cross}, {"fgm", fgm_text(*ep.object, names)}}, "");
            } else {
                emit_fgm(out, out_path, *ep.object, names);
                out << "# cross" << ctext << '\n';
            }
        } else if (*build) {
            Chain c = build_chain(parse_rational(k_text), depth, seed, caps);
            std::ostringstream s;
            write_chain(s, c);
            if (ctx.json_out) {
                json reqs = json::array();
                for (const auto& r : c.requests)
                    reqs.push_back({{"t", r.t}, {"stage", r.stage}, {"item", r.item}, {"kind", r.kind},
                                    {"detail", r.detail}, {"certified", r.certified}});
                json ranks = json::array();
                for (const auto& st : c.stages) ranks.push_back(st->rank());
                ctx.report({{"K", to_string(c.K)}, {"seed", c.seed}, {"ranks", ranks}, {"requests", reqs},
                            {"chain", s.str()}},
                           "");
            } else if (!out_path.empty()) {
                std::ofstream f(out_path);
                if (!f) throw FormatError(0, "cannot write " + out_path);
                f << s.str();
                out << "wrote " << c.stages.size() << " stages to " << out_path << '\n';
            } else {
                out << s.str();
            }
            for (const auto& r : c.requests)
                if (!r.certified) ctx.status = kExitFailure;
        } else if (*embed) {
            Chain c = read_chain_file(chain_path);
            FgmFile t = load_metric(target_path, cfg);
            EmbedResult er = embed_target(make_object(t.metric), c, depth, cfg.cert_depth);
            json stages = json::array();
            std::ostringstream text;
            text << "restriction " << (er.restriction_checked ? "exact" : "approximated") << '\n';
            for (const auto& st : er.stages) {
                Alphabet al(default_names(c.stages[st.chain_stage]->rank()));
                Alphabet tal(t.names);
                json js{{"n", st.n},
                        {"chain_stage", st.chain_stage + 1},
                        {"epsilon", to_string(st.epsilon)},
                        {"images", format_images(al, st.images)},
                        {"closeness", interval_json(tal, st.closeness)}};
                text << "stage " << st.n << ": eps=" << to_string(st.epsilon);
                if (st.has_drift) {
                    js["drift"] = to_string(st.drift);
                    text << " drift=" << to_string(st.drift);
                    if (st.drift != st.epsilon) ctx.status = kExitFailure;
                }
                text << " closeness " << interval_text(tal, st.closeness) << " images " << format_images(al, st.images)
                     << '\n';
                if (st.closeness.lo > st.epsilon) ctx.status = kExitFailure;
                stages.push_back(js);
            }
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                if (!f) throw FormatError(0, "cannot write " + out_path);
                write_chain(f, c);
            }
            ctx.report({{"restriction_checked", er.restriction_checked}, {"stages", stages}}, text.str());
        } else if (*bnf) {
            Chain a = read_chain_file(chain_path), b = read_chain_file(chain_b_path);
            BackAndForthTrace tr = back_and_forth(a, b, depth, sample_len);
            json steps = json::array();
            std::ostringstream text;
            for (const auto& st : tr.steps) {
                steps.push_back({{"n", st.n},
                                 {"side", std::string(1, st.side)},
                                 {"isometry_lo", to_string(st.isometry.lo)},
                                 {"drift", to_string(st.drift)},
                                 {"roundtrip_max_ratio", to_string(st.roundtrip_max_ratio)},
                                 {"bound", to_string(st.bound)},
                                 {"ok", st.ok}});
                text << (st.side == 'A' ? "phi_" : "psi_") << st.n << ": isometry lo=" << to_string(st.isometry.lo)
                     << " drift=" << to_string(st.drift) << " roundtrip=" << to_string(st.roundtrip_max_ratio)
                     << " bound=" << to_string(st.bound) << (st.ok ? " ok" : " FAIL") << '\n';
            }
            text << (tr.ok ? "PASS" : "FAIL") << '\n';
            if (!tr.ok) ctx.status = kExitFailure;
            ctx.report({{"ok", tr.ok}, {"steps", steps}}, text.str());
        } else if (*katetov) {
            if (points.size() != values.size()) throw FormatError(0, "--point and --value counts differ");
            FgmFile f = load_metric(metric_path, cfg);
            Alphabet al(f.names);
            KatetovMap km;
            for (std::size_t i = 0; i < points.size(); ++i) {
                km.support.push_back(parse_word(al, points[i]));
                km.values.push_back(parse_rational(values[i]));
            }
            KatetovReport r = realize_katetov(make_object(f.metric), km, depth > 0 ? depth : 4);
            std::vector<std::string> names = f.names;
            names.push_back("z");
            names = merged_names(names, r.extended->rank());
            if (!out_path.empty()) emit_fgm(out, out_path, *r.extended, names);
            std::string verdict = r.verified() ? "VERIFIED" : "NOT VERIFIED";
            if (!r.verified()) ctx.status = kExitFailure;
            std::ostringstream text;
            text << verdict << " z=" << names[r.z - 1] << " depth=" << r.depth
                 << " old_unchanged=" << (r.old_unchanged ? "yes" : "no")
                 << " support_realized=" << (r.support_realized ? "yes" : "no") << '\n';
            ctx.report({{"verified", r.verified()},
                        {"z", names[r.z - 1]},
                        {"depth", r.depth},
                        {"old_unchanged", r.old_unchanged},
                        {"support_realized", r.support_realized},
                        {"fgm", fgm_text(*r.extended, names)}},
                       text.str());
        } else if (*verify) {
            KeyLemmaReport r = verify_keylemma(n_value, BitPrefix::parse(bits_text), options_of(cfg));
            Alphabet al(3);
            if (!r.pass) ctx.status = kExitFailure;
            std::string text = "from_below=" + to_string(r.from_below) + " bound=" + to_string(r.bound) +
                               (r.pass ? " PASS" : " FAIL") + "\n";
            if (want_witness) text += "witness: " + format_decomposition(al, r.witness) + "\n";
            ctx.report({{"n", r.n},
                        {"from_below", to_string(r.from_below)},
                        {"bound", to_string(r.bound)},
                        {"pass", r.pass},
                        {"both_values_admissible", r.both_values_admissible},
                        {"expansions", r.expansions},
                        {"witness", decomposition_json(al, r.witness)}},
                       text);
        } else if (*separate) {
            SeparationCertificate s = separation_witness(BitPrefix::parse(x_text), BitPrefix::parse(y_text));
            Alphabet al(3);
            ctx.report({{"k", s.k},
                        {"witness", al.format(s.witness)},
                        {"value_x", to_string(s.value_x)},
                        {"value_y", to_string(s.value_y)},
                        {"ratio", to_string(s.ratio)}},
                       "k=" + std::to_string(s.k) + " witness=" + al.format(s.witness) + " value_x=" +
                           to_string(s.value_x) + " value_y=" + to_string(s.value_y) + " ratio=" + to_string(s.ratio) +
                           "\n");
        } else if (*pack) {
            FgmFile g = load_metric(oracle_path, cfg);
            Alphabet al(g.names);
            auto three = [&](const std::string& text) {
                std::vector<Word> ws = parse_images(al, text);
                if (ws.size() != 3) throw FormatError(0, "an embedding of F_3 needs three images");
                return std::array<Word, 3>{ws[0], ws[1], ws[2]};
            };
            std::optional<MetricOracle> r0, r1;
            if (!ref0_path.empty()) r0 = MetricOracle::from_metric(load_metric(ref0_path, cfg).metric);
            if (!ref1_path.empty()) r1 = MetricOracle::from_metric(load_metric(ref1_path, cfg).metric);
            PackingReport p = packing_check(MetricOracle::from_metric(g.metric), three(emb0_text), three(emb1_text),
                                            depth, r0 ? &*r0 : nullptr, r1 ? &*r1 : nullptr);
            if (!p.bound_holds) ctx.status = kExitFailure;
            auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
            std::ostringstream text;
            text << "S=" << to_string(p.S) << " max_ratio=" << to_string(p.max_ratio)
                 << " bound=" << (p.bound_holds ? "holds" : "VIOLATED");
            if (p.isometric0) text << " isometric0=" << (*p.isometric0 ? "yes" : "no");
            if (p.isometric1) text << " isometric1=" << (*p.isometric1 ? "yes" : "no");
            if (r0 && r1) text << " separation=" << to_string(p.separation) << " contradiction=" << (p.contradiction ? "yes" : "no");
            text << '\n';
            ctx.report({{"S", to_string(p.S)},
                        {"max_ratio", to_string(p.max_ratio)},
                        {"bound_holds", p.bound_holds},
                        {"isometric0", opt(p.isometric0)},
                        {"isometric1", opt(p.isometric1)},
                        {"separation", to_string(p.separation)},
                        {"contradiction", p.contradiction}},
                       text.str());
        } else if (*selftest) {
            AcceptanceOptions opt;
            opt.only = only;
            opt.golden_path = golden;
            std::vector<CriterionResult> rs = run_acceptance(opt);
            json arr = json::array();
            std::ostringstream text;
            for (const auto& r : rs) {
                if (!r.pass) ctx.status = kExitFailure;
                arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds},
                               {"time_limit", r.time_limit}, {"detail", r.detail}});
                text << std::setw(2) << r.id << ' ' << std::left << std::setw(10) << r.name << std::right << ' '
                     << (r.pass ? "PASS" : "FAIL") << ' ' << std::fixed << std::setprecision(2) << r.seconds << "s  "
                     << r.detail << '\n';
            }
            ctx.report({{"pass", ctx.status == kExitOk}, {"criteria", arr}}, text.str());
        }
        if (cfg.verbosity > 0)
            err << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()
                << " s\n";
        return ctx.status;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << " (upper bound " << to_string(e.upper_bound()) << ")\n";
        return kExitBudget;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const RankMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace bimet
