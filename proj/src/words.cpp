#include "bimet/words.hpp"

#include <algorithm>
#include <sstream>

namespace bimet {

Word Word::reduce(const std::vector<Letter>& raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter l : raw) {
        if (l == 0) throw Error("letter 0 is not a generator");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return Word(std::move(out));
}

Word Word::generator(int index) {
    if (index < 1) throw Error("generator index must be >= 1");
    return Word({index});
}

int Word::max_generator() const {
    int m = 0;
    for (Letter l : letters_) m = std::max(m, generator_of(l));
    return m;
}

bool shortlex_less(const Word& u, const Word& v) {
    if (u.length() != v.length()) return u.length() < v.length();
    for (std::size_t i = 0; i < u.length(); ++i) {
        int a = letter_key(u[i]), b = letter_key(v[i]);
        if (a != b) return a < b;
    }
    return false;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w.letters()) {
        h ^= static_cast<std::size_t>(l + 1024);
        h *= 1099511628211ull;
    }
    return h;
}

Word multiply(const Word& u, const Word& v) {
    std::vector<Letter> raw = u.letters();
    raw.insert(raw.end(), v.letters().begin(), v.letters().end());
    return Word::reduce(raw);
}

Word multiply(std::initializer_list<Word> factors) {
    std::vector<Letter> raw;
    for (const Word& w : factors) raw.insert(raw.end(), w.letters().begin(), w.letters().end());
    return Word::reduce(raw);
}

Word inverse(const Word& u) {
    std::vector<Letter> raw(u.letters().rbegin(), u.letters().rend());
    for (Letter& l : raw) l = -l;
    return Word::reduce(raw);
}

Word power(const Word& u, int k) {
    Word base = k < 0 ? inverse(u) : u;
    std::vector<Letter> raw;
    for (int i = 0; i < (k < 0 ? -k : k); ++i)
        raw.insert(raw.end(), base.letters().begin(), base.letters().end());
    return Word::reduce(raw);
}

void check_rank(const Word& w, int rank) {
    if (w.max_generator() > rank)
        throw RankMismatch("word uses generator " + std::to_string(w.max_generator()) +
                           " but rank is " + std::to_string(rank));
}

std::uint64_t ball_size(int rank, int radius) {
    std::uint64_t total = 1, layer = 2ull * rank;
    const std::uint64_t sat = std::uint64_t(1) << 62;
    for (int k = 1; k <= radius; ++k) {
        total += layer;
        if (total >= sat) return sat; // saturate; callers only compare against caps
        layer *= 2ull * rank - 1;
    }
    return total;
}

std::vector<Word> enumerate_ball(int rank, int radius) {
    if (rank < 1 || radius < 0) throw Error("enumerate_ball needs rank >= 1 and radius >= 0");
    std::vector<Letter> alphabet;
    for (int i = 1; i <= rank; ++i) {
        alphabet.push_back(i);
        alphabet.push_back(-i);
    }
    std::vector<Word> out;
    out.reserve(ball_size(rank, radius));
    out.emplace_back();
    std::size_t layer_begin = 0, layer_end = 1;
    for (int k = 1; k <= radius; ++k) {
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            const Word& w = out[i];
            for (Letter l : alphabet) {
                if (!w.is_identity() && w.letters().back() == -l) continue;
                std::vector<Letter> next = w.letters();
                next.push_back(l);
                out.push_back(Word::reduce(next));
            }
        }
        layer_begin = layer_end;
        layer_end = out.size();
    }
    return out;
}

Word substitute(const std::vector<Word>& images, const Word& u) {
    std::vector<Letter> raw;
    for (Letter l : u.letters()) {
        std::size_t g = static_cast<std::size_t>(generator_of(l));
        if (g > images.size()) throw Error("no image for generator " + std::to_string(g));
        const Word& img = images[g - 1];
        if (l > 0)
            raw.insert(raw.end(), img.letters().begin(), img.letters().end());
        else
            for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) raw.push_back(-*it);
    }
    return Word::reduce(raw);
}

Word cyclic_core(const Word& w, Word* conj) {
    const auto& L = w.letters();
    std::size_t i = 0, j = L.size();
    while (j - i >= 2 && L[i] == -L[j - 1]) {
        ++i;
        --j;
    }
    if (conj) *conj = Word::reduce(std::vector<Letter>(L.begin(), L.begin() + i));
    return Word::reduce(std::vector<Letter>(L.begin() + i, L.begin() + j));
}

std::vector<Letter> rotate(const std::vector<Letter>& letters, std::size_t k) {
    std::vector<Letter> out;
    out.reserve(letters.size());
    out.insert(out.end(), letters.begin() + k, letters.end());
    out.insert(out.end(), letters.begin(), letters.begin() + k);
    return out;
}

namespace {

bool keys_less(const std::vector<Letter>& a, const std::vector<Letter>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int x = letter_key(a[i]), y = letter_key(b[i]);
        if (x != y) return x < y;
    }
    return false;
}

// Index of the least rotation (naive; cores stay short).
std::size_t least_rotation(const std::vector<Letter>& c) {
    std::size_t best = 0, n = c.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t t = 0; t < n; ++t) {
            int x = letter_key(c[(k + t) % n]), y = letter_key(c[(best + t) % n]);
            if (x != y) {
                if (x < y) best = k;
                break;
            }
        }
    }
    return best;
}

} // namespace

ClassForm canonical_class(const Word& w) {
    ClassForm out;
    Word v;
    Word core = cyclic_core(w, &v);
    if (core.is_identity()) return out;
    Word inv = inverse(core);
    std::size_t kp = least_rotation(core.letters());
    std::size_t km = least_rotation(inv.letters());
    auto rp = rotate(core.letters(), kp);
    auto rm = rotate(inv.letters(), km);
    // core = P rot P^-1 where P is the first k letters.
    if (!keys_less(rm, rp)) {
        out.rep = Word::reduce(rp);
        out.sign = 1;
        std::vector<Letter> p(core.letters().begin(), core.letters().begin() + kp);
        out.conj = multiply(v, Word::reduce(p));
    } else {
        out.rep = Word::reduce(rm);
        out.sign = -1;
        std::vector<Letter> p(inv.letters().begin(), inv.letters().begin() + km);
        out.conj = multiply(v, Word::reduce(p));
    }
    return out;
}

Word class_key(const Word& w) { return canonical_class(w).rep; }

std::vector<Word> enumerate_cyclic_classes(int rank, int max_len) {
    std::vector<Word> out;
    for (const Word& w : enumerate_ball(rank, max_len)) {
        if (w.is_identity()) continue;
        if (w.length() >= 2 && w[0] == -w[w.length() - 1]) continue;
        if (class_key(w) == w) out.push_back(w);
    }
    return out;
}

std::vector<std::string> default_names(int rank) {
    std::vector<std::string> names;
    for (int i = 0; i < rank; ++i)
        names.push_back(rank <= 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i + 1));
    return names;
}

Alphabet::Alphabet(int rank) : names_(default_names(rank)) {}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (const auto& n : names_)
        if (n.empty() || n == "1" || n.find_first_of(" ^|") != std::string::npos)
            throw Error("invalid generator name '" + n + "'");
}

Word Alphabet::parse(std::string_view text) const {
    std::istringstream in{std::string(text)};
    std::string tok;
    std::vector<Letter> raw;
    while (in >> tok) {
        if (tok == "1") continue;
        std::string name = tok;
        int exp = 1;
        if (auto caret = tok.find('^'); caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                std::size_t used = 0;
                exp = std::stoi(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) throw Error("");
            } catch (...) {
                throw Error("bad exponent in '" + tok + "'");
            }
        }
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw Error("unknown generator '" + name + "'");
        Letter l = static_cast<Letter>(it - names_.begin()) + 1;
        for (int k = 0; k < (exp < 0 ? -exp : exp); ++k) raw.push_back(exp < 0 ? -l : l);
    }
    return Word::reduce(raw);
}

std::string Alphabet::format_letter(Letter l) const {
    int g = generator_of(l);
    std::string n = g <= rank() ? names_[g - 1] : "g" + std::to_string(g);
    return l < 0 ? n + "^-1" : n;
}

std::string Alphabet::format(const Word& w) const {
    if (w.is_identity()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.length(); ++i) {
        if (i) out += ' ';
        out += format_letter(w[i]);
    }
    return out;
}

} // namespace bimet
