#include "bimet/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace bimet {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

// Reads lines, dropping comments and blanks, tracking the line number.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
            out = trim(raw);
            if (!out.empty()) return true;
        }
        return false;
    }
    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
};

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

// "key = value" -> value, or throws.
std::string expect_key(const LineReader& lr, const std::string& line, const std::string& key) {
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(std::string_view(line).substr(0, eq)) != key)
        throw FormatError(lr.line(), "expected '" + key + " = ...'");
    return trim(std::string_view(line).substr(eq + 1));
}

Rational rational_at(const LineReader& lr, const std::string& s) {
    try {
        return parse_rational(s);
    } catch (const Error& e) {
        throw FormatError(lr.line(), std::string("bad fraction '") + s + "': " + e.what());
    }
}

Word word_at(const LineReader& lr, const Alphabet& al, const std::string& s) {
    try {
        return al.parse(s);
    } catch (const Error& e) {
        throw FormatError(lr.line(), std::string("bad word '") + s + "': " + e.what());
    }
}

std::ifstream open(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError(0, "cannot open " + path);
    return f;
}

// Body of an fgm block after the "fgm v1" header. Stops at "end" when stop_at_end.
FgmFile read_fgm_body(LineReader& lr, bool stop_at_end, const SearchOptions& opt = {}) {
    std::string line;
    if (!lr.next(line)) throw FormatError(lr.line(), "missing 'rank = <n>'");
    int rank = 0;
    try {
        rank = std::stoi(expect_key(lr, line, "rank"));
    } catch (const std::logic_error&) {
        throw FormatError(lr.line(), "rank must be an integer");
    }
    if (rank < 1) throw FormatError(lr.line(), "rank must be >= 1");
    if (!lr.next(line)) throw FormatError(lr.line(), "missing 'names = ...'");
    std::vector<std::string> names = split_ws(expect_key(lr, line, "names"));
    if (static_cast<int>(names.size()) != rank)
        throw FormatError(lr.line(), "names lists " + std::to_string(names.size()) + " generators, rank is " +
                                         std::to_string(rank));
    Alphabet al(names);
    std::optional<Rational> bound;
    GenSet gs(rank);
    std::vector<bool> self(rank + 1, false);
    bool ended = false;
    bool first = true;
    while (lr.next(line)) {
        if (stop_at_end && line == "end") {
            ended = true;
            break;
        }
        if (first && line.rfind("bound", 0) == 0) {
            bound = rational_at(lr, expect_key(lr, line, "bound"));
            if (*bound <= 0) throw FormatError(lr.line(), "bound must be positive");
            first = false;
            continue;
        }
        first = false;
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (std::size_t bar; (bar = line.find('|', pos)) != std::string::npos; pos = bar + 1)
            parts.push_back(trim(std::string_view(line).substr(pos, bar - pos)));
        parts.push_back(trim(std::string_view(line).substr(pos)));
        if (parts.size() != 3) throw FormatError(lr.line(), "expected '<word> | <word> | <p/q>'");
        Word u = word_at(lr, al, parts[0]), v = word_at(lr, al, parts[1]);
        Rational val = rational_at(lr, parts[2]);
        if (u == v) throw FormatError(lr.line(), "diagonal entries are implicit");
        if (val <= 0) throw FormatError(lr.line(), "distances between distinct entries must be positive");
        try {
            gs.set(u, v, val);
        } catch (const Error& e) {
            throw FormatError(lr.line(), e.what());
        }
        for (const Word* w : {&u, &v})
            if (w->length() == 1 && (u.is_identity() || v.is_identity())) self[generator_of((*w)[0])] = true;
    }
    if (stop_at_end && !ended) throw FormatError(lr.line(), "fgm block is not closed by 'end'");
    for (int g = 1; g <= rank; ++g)
        if (!self[g]) throw FormatError(lr.line(), "missing generator entry '" + names[g - 1] + " | 1 | v'");
    return FgmFile{names, FinGenMetric(std::move(gs), bound, opt)};
}

void write_fgm_body(std::ostream& out, const FinGenMetric& m, const std::vector<std::string>& names) {
    Alphabet al(names);
    const GenSet& gs = m.genset();
    out << "rank = " << m.rank() << "\nnames =";
    for (const auto& n : names) out << ' ' << n;
    out << '\n';
    if (m.bound()) out << "bound = " << to_string(*m.bound()) << '\n';
    const auto& E = gs.entries();
    std::vector<bool> self(m.rank() + 1, false);
    for (auto [i, j] : gs.defined_pairs()) {
        Word u = E[i], v = E[j];
        // Orient generator entries as "f | 1".
        if (u.is_identity()) std::swap(u, v);
        if (v.is_identity() && u.length() == 1 && u[0] < 0) u = inverse(u);
        if (v.is_identity() && u.length() == 1) self[u[0]] = true;
        out << al.format(u) << " | " << al.format(v) << " | " << to_string(*gs.at(i, j)) << '\n';
    }
    for (int g = 1; g <= m.rank(); ++g)
        if (!self[g])
            out << al.format(Word::generator(g)) << " | 1 | " << to_string(m.norm(Word::generator(g))) << '\n';
}

} // namespace

FgmFile read_fgm(std::istream& in) {
    LineReader lr(in);
    std::string line;
    if (!lr.next(line) || line != "fgm v1") throw FormatError(lr.line(), "expected header 'fgm v1'");
    return read_fgm_body(lr, false);
}

FgmFile read_fgm_file(const std::string& path) {
    auto f = open(path);
    return read_fgm(f);
}

void write_fgm(std::ostream& out, const FinGenMetric& m, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != m.rank()) throw Error("names do not match the rank");
    out << "fgm v1\n";
    write_fgm_body(out, m, names);
}

void write_fgm(std::ostream& out, const FinGenMetric& m) { write_fgm(out, m, default_names(m.rank())); }

PointedSpace read_space(std::istream& in) {
    LineReader lr(in);
    std::string line;
    if (!lr.next(line) || line != "space") throw FormatError(lr.line(), "expected header 'space'");
    std::vector<std::string> names;
    std::vector<std::tuple<std::string, std::string, Rational, int>> ds;
    while (lr.next(line)) {
        auto t = split_ws(line);
        if (t[0] == "point" && t.size() == 2) {
            if (t[1] == "1") throw FormatError(lr.line(), "the basepoint 1 is implicit");
            if (std::find(names.begin(), names.end(), t[1]) != names.end())
                throw FormatError(lr.line(), "duplicate point '" + t[1] + "'");
            names.push_back(t[1]);
        } else if (t[0] == "d" && t.size() == 4) {
            ds.emplace_back(t[1], t[2], rational_at(lr, t[3]), lr.line());
        } else {
            throw FormatError(lr.line(), "expected 'point <name>' or 'd <name> <name> <p/q>'");
        }
    }
    if (names.empty()) throw FormatError(lr.line(), "space has no points");
    const std::size_t k = names.size();
    auto idx = [&](const std::string& n, int line) -> std::size_t {
        if (n == "1") return 0;
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw FormatError(line, "unknown point '" + n + "'");
        return static_cast<std::size_t>(it - names.begin()) + 1;
    };
    std::vector<std::vector<std::optional<Rational>>> d(k + 1, std::vector<std::optional<Rational>>(k + 1));
    for (auto& [x, y, v, line] : ds) {
        std::size_t i = idx(x, line), j = idx(y, line);
        if (i == j) throw FormatError(line, "diagonal distances are implicit");
        if (d[i][j] && *d[i][j] != v) throw FormatError(line, "conflicting distance");
        d[i][j] = d[j][i] = v;
    }
    std::vector<std::vector<Rational>> dist(k + 1, std::vector<Rational>(k + 1, Rational(0)));
    for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j) {
            if (i == j) continue;
            if (!d[i][j])
                throw FormatError(0, "missing distance between " + (i ? names[i - 1] : std::string("1")) + " and " +
                                         (j ? names[j - 1] : std::string("1")));
            dist[i][j] = *d[i][j];
        }
    try {
        return PointedSpace(names, dist);
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(0, e.what());
    }
}

PointedSpace read_space_file(const std::string& path) {
    auto f = open(path);
    return read_space(f);
}

void write_space(std::ostream& out, const PointedSpace& s) {
    out << "space\n";
    for (const auto& n : s.names()) out << "point " << n << '\n';
    auto name = [&](int i) { return i ? s.names()[i - 1] : std::string("1"); };
    for (int i = 0; i <= s.size(); ++i)
        for (int j = i + 1; j <= s.size(); ++j) out << "d " << name(i) << ' ' << name(j) << ' ' << to_string(s.d(i, j)) << '\n';
}

Chain read_chain(std::istream& in) {
    LineReader lr(in);
    std::string line;
    if (!lr.next(line) || line != "chain v1") throw FormatError(lr.line(), "expected header 'chain v1'");
    Chain c;
    if (!lr.next(line)) throw FormatError(lr.line(), "missing 'K = <p/q>'");
    c.K = rational_at(lr, expect_key(lr, line, "K"));
    if (!lr.next(line)) throw FormatError(lr.line(), "missing 'seed = <int>'");
    try {
        c.seed = std::stoull(expect_key(lr, line, "seed"));
    } catch (const std::logic_error&) {
        throw FormatError(lr.line(), "seed must be a nonnegative integer");
    }
    std::vector<std::vector<std::string>> names;
    std::vector<std::pair<std::vector<std::string>, int>> links;
    while (lr.next(line)) {
        if (line == "fgm v1") {
            int at = lr.line();
            FgmFile f = read_fgm_body(lr, true);
            if (!f.metric.bound() || *f.metric.bound() != c.K) throw FormatError(at, "stage bound differs from K");
            try {
                c.stages.push_back(make_object(std::move(f.metric)));
            } catch (const FormatError&) {
                throw;
            } catch (const Error& e) {
                throw FormatError(at, std::string("stage table is invalid: ") + e.what());
            }
            names.push_back(f.names);
        } else if (line.rfind("link:", 0) == 0) {
            links.emplace_back(std::vector<std::string>{}, lr.line());
            std::string body = trim(std::string_view(line).substr(5));
            std::size_t pos = 0;
            for (std::size_t comma; (comma = body.find(',', pos)) != std::string::npos; pos = comma + 1)
                links.back().first.push_back(trim(std::string_view(body).substr(pos, comma - pos)));
            if (!trim(std::string_view(body).substr(pos)).empty())
                links.back().first.push_back(trim(std::string_view(body).substr(pos)));
            if (links.size() != c.stages.size()) throw FormatError(lr.line(), "link: must follow a stage");
        } else if (line.rfind("request:", 0) == 0) {
            std::istringstream ss(line.substr(8));
            ChainRequest r;
            int cert = 0;
            if (!(ss >> r.t >> r.stage >> r.item >> r.kind >> cert) || (cert != 0 && cert != 1))
                throw FormatError(lr.line(), "expected 'request: <t> <stage> <item> <kind> <0|1> <detail>'");
            r.certified = cert == 1;
            std::getline(ss, r.detail);
            r.detail = trim(r.detail);
            c.requests.push_back(std::move(r));
        } else {
            throw FormatError(lr.line(), "unexpected line '" + line + "'");
        }
    }
    if (c.stages.empty()) throw FormatError(lr.line(), "chain has no stages");
    if (links.size() + 1 != c.stages.size()) throw FormatError(lr.line(), "each stage but the last needs a link:");
    for (std::size_t i = 0; i < links.size(); ++i) {
        auto& [imgs, at] = links[i];
        if (static_cast<int>(imgs.size()) != c.stages[i]->rank())
            throw FormatError(at, "link lists " + std::to_string(imgs.size()) + " images for rank " +
                                      std::to_string(c.stages[i]->rank()));
        Alphabet al(names[i + 1]);
        Morphism m{c.stages[i], c.stages[i + 1], {}, -1};
        for (const auto& s : imgs) {
            try {
                m.images.push_back(al.parse(s));
            } catch (const Error& e) {
                throw FormatError(at, std::string("bad image '") + s + "': " + e.what());
            }
        }
        c.links.push_back(std::move(m));
    }
    return c;
}

Chain read_chain_file(const std::string& path) {
    auto f = open(path);
    return read_chain(f);
}

void write_chain(std::ostream& out, const Chain& c) {
    out << "chain v1\nK = " << to_string(c.K) << "\nseed = " << c.seed << '\n';
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
        out << "fgm v1\n";
        auto names = default_names(c.stages[i]->rank());
        write_fgm_body(out, *c.stages[i], names);
        out << "end\n";
        if (i < c.links.size()) {
            Alphabet al(default_names(c.stages[i + 1]->rank()));
            out << "link:";
            for (std::size_t g = 0; g < c.links[i].images.size(); ++g)
                out << (g ? ", " : " ") << al.format(c.links[i].images[g]);
            out << '\n';
        }
    }
    for (const auto& r : c.requests)
        out << "request: " << r.t << ' ' << r.stage << ' ' << r.item << ' ' << r.kind << ' ' << (r.certified ? 1 : 0)
            << ' ' << r.detail << '\n';
}

} // namespace bimet
