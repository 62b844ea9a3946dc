#pragma once

#include "bimet/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace bimet {

// A letter is a signed generator index: +i is f_i, -i is f_i^-1 (i >= 1).
using Letter = int;

inline int generator_of(Letter l) { return l < 0 ? -l : l; }

// Shortlex key: a < a^-1 < b < b^-1 < ...
inline int letter_key(Letter l) { return 2 * (generator_of(l) - 1) + (l < 0 ? 1 : 0); }

class RankMismatch : public Error {
public:
    using Error::Error;
};

// A freely reduced word. The empty word is the identity.
class Word {
public:
    Word() = default;

    static Word reduce(const std::vector<Letter>& raw);
    static Word generator(int index);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool is_identity() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    // Largest generator index occurring in the word (0 for the identity).
    int max_generator() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
    std::vector<Letter> letters_;
};

// Shortlex order with letter_key on letters.
bool shortlex_less(const Word& u, const Word& v);
struct ShortlexLess {
    bool operator()(const Word& u, const Word& v) const { return shortlex_less(u, v); }
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

Word multiply(const Word& u, const Word& v);
Word multiply(std::initializer_list<Word> factors);
Word inverse(const Word& u);
Word power(const Word& u, int k);

// Throws RankMismatch if the word uses a generator above rank.
void check_rank(const Word& w, int rank);

// 1 + sum_{k=1..N} 2n(2n-1)^{k-1}
std::uint64_t ball_size(int rank, int radius);

// All reduced words of length <= radius over rank generators, in shortlex order.
std::vector<Word> enumerate_ball(int rank, int radius);

// images[i-1] is the image of generator i.
Word substitute(const std::vector<Word>& images, const Word& u);

// w = conj * core * conj^-1 with core cyclically reduced.
Word cyclic_core(const Word& w, Word* conj = nullptr);

// Canonical representative of the conjugacy class of w or w^-1: the shortlex-least
// rotation of the cyclic core of w or of its inverse. Satisfies
// w = conj * rep^sign * conj^-1.
struct ClassForm {
    Word rep;
    int sign = 1;
    Word conj;
};
ClassForm canonical_class(const Word& w);
Word class_key(const Word& w);

// Canonical representatives of nontrivial classes (up to conjugation and inversion)
// with cyclic length <= max_len, shortlex order.
std::vector<Word> enumerate_cyclic_classes(int rank, int max_len);

// Rotation of a cyclically reduced word: letters [k..) followed by [0..k).
std::vector<Letter> rotate(const std::vector<Letter>& letters, std::size_t k);

// Text syntax: space separated letters, inverse `x^-1`, powers `x^k`, identity `1`.
class Alphabet {
public:
    explicit Alphabet(int rank);
    explicit Alphabet(std::vector<std::string> names);

    int rank() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

    Word parse(std::string_view text) const;
    std::string format(const Word& w) const;
    std::string format_letter(Letter l) const;

private:
    std::vector<std::string> names_;
};

// Default names: a, b, c, ... for rank <= 26, otherwise g1, g2, ...
std::vector<std::string> default_names(int rank);

} // namespace bimet
