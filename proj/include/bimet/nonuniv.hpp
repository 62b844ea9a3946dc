#pragma once

#include "bimet/fingen.hpp"
#include "bimet/metspace.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bimet {

// bit(k) for k = 1..size(); level k concerns the letter a^n b^n c^n with n = 2^k.
class BitPrefix {
public:
    BitPrefix() = default;
    explicit BitPrefix(std::vector<int> bits);
    static BitPrefix parse(const std::string& text); // e.g. "01"

    int size() const { return static_cast<int>(bits_.size()); }
    int bit(int k) const;
    std::string str() const;

private:
    std::vector<int> bits_;
};

// a^i b^i c^i over F_3 (a,b,c = generators 1,2,3).
Word family_letter(int i);
// 2i if bit 0, 3i - i/2 if bit 1.
Rational family_value(int i, int bit);

// A = {1,a,b,c}^± together with (a^i b^i c^i)^± for i = 2^k <= n (i < n when below_n);
// letters weigh 1 and a^i b^i c^i weighs family_value. The cross rule
// d'(u,v) = d'(u,1) + d'(v,1) never undercuts the route through 1, so those entries are
// left undefined unless literal_cross is set; both tables generate the same metric, but
// the literal one is not tight (e.g. (a^2b^2c^2, a) at bit 1 is 6 while a b^2 c^2 costs 5).
FinGenMetric family_genset(int n, const BitPrefix& bits, bool below_n = false, bool literal_cross = false);

struct KeyLemmaReport {
    int n = 0;
    Rational from_below;
    Rational bound;
    bool pass = false;
    bool both_values_admissible = false; // 2n and 3n - n/2 are both <= from_below
    Decomposition witness;
    std::size_t expansions = 0;
};

KeyLemmaReport verify_keylemma(int n, const BitPrefix& bits, SearchOptions options = {});

// The hand-expanded certificate a a (a^2b^2c^2) c^-1 c^-1 b b c c c c for n = 4, bit(1) = 0,
// as pairs against the below-4 table.
Decomposition keylemma_certificate_n4();

struct SeparationCertificate {
    int k = 0;
    Word witness;
    Rational value_x, value_y;
    Rational ratio;
};

SeparationCertificate separation_witness(const BitPrefix& x, const BitPrefix& y);

struct PackingReport {
    Rational S;
    Rational max_ratio;
    bool bound_holds = true;
    std::optional<bool> isometric0, isometric1;
    Rational separation;
    bool contradiction = false;
};

// S = sum over a,b,c of d_G(emb0(v), emb1(v)); checks
// |N_G(emb0 w) - N_G(emb1 w)| <= |w| S on W_N(F_3). When reference metrics are given,
// also checks that each embedding is isometric on W_N and reports a contradiction if
// both are while S is below the separation of the references.
PackingReport packing_check(const MetricOracle& G, const std::array<Word, 3>& emb0, const std::array<Word, 3>& emb1,
                            int N, const MetricOracle* ref0 = nullptr, const MetricOracle* ref1 = nullptr);

} // namespace bimet
