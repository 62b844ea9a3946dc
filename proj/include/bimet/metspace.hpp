#pragma once

#include "bimet/fingen.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bimet {

// A bi-invariant metric on F_rank given by its norm.
class MetricOracle {
public:
    using NormFn = std::function<Rational(const Word&)>;

    MetricOracle(int rank, NormFn norm, std::optional<Rational> bound = std::nullopt);

    static MetricOracle from_metric(std::shared_ptr<const FinGenMetric> m);
    static MetricOracle from_metric(const FinGenMetric& m);

    int rank() const { return rank_; }
    Rational norm(const Word& g) const;
    Rational dist(const Word& a, const Word& b) const { return norm(multiply(a, inverse(b))); }
    const std::optional<Rational>& bound() const { return bound_; }
    bool bounded_by_one() const { return bound_ && *bound_ <= 1; }
    // The backing metric, if any.
    const FinGenMetric* metric() const { return metric_.get(); }

private:
    int rank_;
    NormFn norm_;
    std::optional<Rational> bound_;
    std::shared_ptr<const FinGenMetric> metric_;
};

// Values of d on every class of cyclic length <= max_len; evaluating anything longer throws.
MetricOracle tabulate(const MetricOracle& d, int max_len);
// d restricted to the subgroup on the first n generators.
MetricOracle restrict_rank(const MetricOracle& d, int n);
// w -> d(substitute(images, w)); images are words over d's generators.
MetricOracle pullback(const MetricOracle& d, std::vector<Word> images);

struct DistInterval {
    Rational lo = 0;
    std::optional<Rational> hi; // unknown for unbounded oracles
    int depth = 0;              // every class up to this length was examined
    int requested_depth = 0;
    bool exhaustive = true;
    Word witness;
    std::size_t examined = 0;
};

struct DistOptions {
    // Largest ball enumerated; deeper requests fall back to the deepest full ball
    // within the cap plus the candidate words.
    std::uint64_t ball_cap = 400000;
    std::vector<Word> candidates;
};

DistInterval dist_interval(const MetricOracle& d, const MetricOracle& p, int N, const DistOptions& opt = {});

// A = W_N with d' = d on A x A, clamped at the oracle's bound (or the given clamp).
FinGenMetric n_approximation(const MetricOracle& d, int N, std::optional<Rational> clamp = std::nullopt);

class DenominatorCapError : public Error {
public:
    DenominatorCapError(const std::string& what, std::int64_t min_cap) : Error(what), min_cap_(min_cap) {}
    std::int64_t min_cap() const { return min_cap_; }

private:
    std::int64_t min_cap_;
};

// Least value p/q with q <= cap in [lo, hi], or nullopt.
std::optional<Rational> smallest_fraction_in(const Rational& lo, const Rational& hi, std::int64_t cap);

struct RationalApproximation {
    FinGenMetric metric;
    std::optional<DistInterval> certificate; // present for 1-bounded inputs
    std::int64_t max_denominator = 1;
};

RationalApproximation rational_approximation(const FinGenMetric& p, const Rational& eps, std::int64_t denom_cap);

// eps_1 = min(1/2, 2 d(f_1,1)); eps_n = min(1/2^n, 2 d(f_n,1), eps_{n-1}).
// Past the oracle's rank the 2 d(f_n,1) term is omitted.
std::vector<Rational> epsilon_schedule(const MetricOracle& d, int count);

// max_i d(images[i], images2[i]).
Rational int_dist(const MetricOracle& h, const std::vector<Word>& images, const std::vector<Word>& images2);

} // namespace bimet
