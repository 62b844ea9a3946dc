#pragma once

#include "bimet/fingen.hpp"
#include "bimet/metspace.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bimet {

// A validated rational metric bounded by K.
using ClassObject = std::shared_ptr<const FinGenMetric>;

// Validates and wraps; throws Error if unbounded or invalid.
ClassObject make_object(FinGenMetric m);

// Generator-preserving map source -> target. images[i] is the target generator word for
// source generator i+1.
struct Morphism {
    ClassObject source, target;
    std::vector<Word> images;
    int certified_depth = -1;

    Word apply(const Word& w) const { return substitute(images, w); }
};

Morphism identity_prefix(ClassObject source, ClassObject target);
Morphism compose(const Morphism& first, const Morphism& second); // second after first

// True iff source and target norms agree on every class of cyclic length <= depth.
bool is_isometric_to_depth(const Morphism& m, int depth);
// Checks and records the depth; throws Error if the check fails.
Morphism certify(Morphism m, int depth);

// The trivial object (F_1 is the smallest free group; the trivial group is represented
// by a rank-0 base, i.e. an empty image list).
struct Base {
    ClassObject object; // null for the trivial group
    int rank() const { return object ? object->rank() : 0; }
};

struct Amalgam {
    ClassObject object;
    Morphism from_left, from_right;
    // Depth at which both factor restrictions were confirmed exact.
    int certified_depth = -1;
};

// left: base -> G1 and right: base -> G2 (same base, or both trivial with empty images).
// Generators of the amalgam: G1's, then G2's generators outside the base image.
Amalgam amalgamate(const Morphism& left, const Morphism& right, int certify_depth = 3);
// Joint embedding over the trivial group.
Amalgam joint_embedding(ClassObject g1, ClassObject g2, int certify_depth = 3);

struct ExtendedPair {
    ClassObject object;       // rank n + m: f'_1..f'_n then f_1..f_m
    Morphism from_p1, from_p2; // onto the two blocks
    std::vector<Rational> cross; // d(f'_j, f_j)
};

// p1 on F_n and p2 on F_m (n <= m) with p1 >= p2 on F_n and dist(p1, p2|F_n) <= delta,
// both checked on classes up to check_depth.
ExtendedPair extend_pair(ClassObject p1, ClassObject p2, const Rational& delta, int check_depth = 3,
                         int certify_depth = 3);

struct ClassCaps {
    int max_rank = 1;
    int max_entry_len = 1;
    std::int64_t max_denom = 2;
    std::size_t max_entries = 3; // |A| including 1 and inverses
};

// Objects whose table is d'(e,1) over entries e (generators plus extra words up to
// inversion), values in (0,K] with denominator <= max_denom; only validating tables.
// Ordered by (rank, |A|, longest entry, largest denominator, values).
std::vector<ClassObject> enumerate_class(const Rational& K, const ClassCaps& caps);

struct ChainRequest {
    std::size_t t = 0;
    std::size_t stage = 0; // 1-based stage whose object is the base
    std::size_t item = 0;
    std::string kind;      // "join" or "delta"
    std::string detail;
    bool certified = false;
};

struct Chain {
    Rational K;
    std::uint64_t seed = 0;
    std::vector<ClassObject> stages;
    std::vector<Morphism> links; // links[i]: stages[i] -> stages[i+1]
    std::vector<ChainRequest> requests;
};

// Cantor pairing inverse: t -> (x, y).
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t t);

Chain build_chain(const Rational& K, int depth, std::uint64_t seed, const ClassCaps& caps = {1, 1, 2, 3});

// Stage i (0-based) into the last stage.
Morphism chain_embedding(const Chain& c, std::size_t i);

struct EmbedStage {
    std::size_t n = 0;
    std::size_t chain_stage = 0; // index into the chain's stages
    std::vector<Word> images;    // images of the first min(n, m) target generators
    Rational epsilon;
    Rational drift;              // int_dist to the next stage's images (n < depth)
    bool has_drift = false;
    DistInterval closeness;
};

struct EmbedResult {
    std::vector<Rational> schedule;
    std::vector<EmbedStage> stages;
    bool restriction_checked = false;
};

// Embeds a 1-bounded target into the chain (extending it) for n = 1..depth.
EmbedResult embed_target(ClassObject target, Chain& chain, int depth, int check_depth = 3);

struct BackAndForthStep {
    std::size_t n = 0;
    char side = 'A';               // 'A': phi_n from the A side, 'B': psi_n
    std::vector<Word> images;      // images of the source generators
    DistInterval isometry;         // dist(G_n, phi_n[G_n])
    Rational drift = 0;            // int_dist between successive compositions
    Rational roundtrip_max_ratio;  // max d(x, psi phi x)/|x| over sampled x
    Rational bound;                // 1/2^n
    bool ok = false;
};

struct BackAndForthTrace {
    std::vector<BackAndForthStep> steps;
    bool ok = false;
};

BackAndForthTrace back_and_forth(const Chain& a, const Chain& b, int depth, int sample_len = 3);

struct KatetovMap {
    std::vector<Word> support;
    std::vector<Rational> values;
};

// |f(x)-f(y)| <= d(x,y) <= f(x)+f(y) on the support.
bool is_katetov(const FinGenMetric& m, const KatetovMap& f);

struct KatetovReport {
    ClassObject extended;
    int z = 0; // new generator index
    bool old_unchanged = false;
    bool support_realized = false;
    int depth = 0;
    bool verified() const { return old_unchanged && support_realized; }
};

KatetovReport realize_katetov(ClassObject stage, const KatetovMap& f, int depth = 4);

} // namespace bimet
