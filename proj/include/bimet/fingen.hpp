#pragma once

#include "bimet/rational.hpp"
#include "bimet/words.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bimet {

// Raised when a search exceeds its node budget. upper_bound is the best value found
// (a genuine upper bound on the norm, never presented as exact).
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, Rational upper_bound)
        : Error(what), upper_bound_(upper_bound) {}
    const Rational& upper_bound() const { return upper_bound_; }

private:
    Rational upper_bound_;
};

// The symmetric generating set A (1 in A, A = A^-1, all generators in A) with a
// partial table d' on A x A. Setting a value also sets its symmetric and inverse images.
class GenSet {
public:
    explicit GenSet(int rank);

    int rank() const { return rank_; }
    const std::vector<Word>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // Adds w and w^-1; returns the index of w.
    std::size_t add(const Word& w);
    std::optional<std::size_t> index_of(const Word& w) const;

    // Adds a and b if needed. Throws Error on a conflicting earlier value.
    void set(const Word& a, const Word& b, const Rational& value);
    std::optional<Rational> get(const Word& a, const Word& b) const;
    const std::optional<Rational>& at(std::size_t i, std::size_t j) const { return table_[i * cap_ + j]; }

    // Each unordered defined pair {a,b} with a != b once, up to inversion.
    std::vector<std::pair<std::size_t, std::size_t>> defined_pairs() const;

private:
    void grow();
    void put(std::size_t i, std::size_t j, const Rational& v);

    int rank_;
    std::vector<Word> entries_;
    std::unordered_map<Word, std::size_t, WordHash> index_;
    std::size_t cap_ = 0;
    std::vector<std::optional<Rational>> table_;
};

struct Decomposition {
    std::vector<std::pair<Word, Word>> pairs;
    Rational cost = 0;
    // True when the norm was clamped at K and this decomposition costs more than K.
    bool clamped = false;
};

struct SearchOptions {
    std::size_t max_expansions = 3'000'000;
};

struct SearchBudget {
    Rational L, l, ratio;
    std::size_t max_pairs = 0;
    std::size_t node_horizon = 0;
    std::optional<Rational> cost_cap;
};

struct Violation {
    Word a, b;
    std::string reason;
    Rational table_value;
    Rational generated_value;
};

struct ValidationResult {
    bool valid = true;
    std::optional<Violation> violation;
};

namespace detail {
class NormEngine;
}

// The metric generated by a GenSet table, optionally clamped at K.
// Norms are computed exactly by A* search over conjugacy classes; see fingen.cpp.
class FinGenMetric {
public:
    // Values above the bound are clamped. Throws Error if a generator lacks its
    // (f,1) entry or a value is negative.
    explicit FinGenMetric(GenSet genset, std::optional<Rational> bound = std::nullopt,
                          SearchOptions options = {});

    int rank() const { return genset_.rank(); }
    const GenSet& genset() const { return genset_; }
    const std::optional<Rational>& bound() const { return bound_; }
    const SearchOptions& options() const { return options_; }

    Rational norm(const Word& g) const;
    // min(norm(g), cap); stops as soon as the cap is certified.
    Rational norm_capped(const Word& g, const Rational& cap) const;
    Rational dist(const Word& a, const Word& b) const { return norm(multiply(a, inverse(b))); }
    Decomposition witness(const Word& g) const;

    ValidationResult validate() const;
    // Every pair of A x A filled with its generated value.
    FinGenMetric completed() const;
    // Every pair of A x A set to its generated value, defined or not. The result
    // generates the same metric and always validates.
    FinGenMetric tightened() const;

    // L = max generator value, l = min positive value.
    Rational max_generator_value() const;
    Rational min_positive_value() const;
    SearchBudget budget(const Word& g) const;

    std::size_t last_expansions() const;

private:
    detail::NormEngine& engine() const;

    GenSet genset_;
    std::optional<Rational> bound_;
    SearchOptions options_;
    std::shared_ptr<detail::NormEngine> engine_;
};

struct BruteForceResult {
    // Minimum over pair sequences of length <= max_pairs; an upper bound on the norm,
    // equal to it once max_pairs covers an optimal decomposition.
    Rational value;
    std::size_t max_pairs = 0;
    bool found = false;
};

// Definitional oracle. Throws Error when |A| > 9 or max_pairs > 7.
BruteForceResult norm_bruteforce(const FinGenMetric& m, const Word& g, std::size_t max_pairs);

Rational dist_value(const FinGenMetric& m, const Word& a, const Word& b);

// Endpoints products and cost of a decomposition.
std::pair<Word, Word> endpoints(const Decomposition& d);
Rational decomposition_cost(const FinGenMetric& m, const Decomposition& d);

// Every contiguous block (i..j) satisfies d(a_i..a_j, b_i..b_j) = sum of its costs.
bool check_tightness(const FinGenMetric& m, const Decomposition& d);

} // namespace bimet
