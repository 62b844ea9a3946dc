#pragma once

#include "bimet/rational.hpp"
#include "bimet/words.hpp"

#include <string>
#include <vector>

namespace bimet {

// Finite pointed metric space. Point 0 is the basepoint "1"; points 1..k are the
// non-base points and double as generators (letter +i is point i).
class PointedSpace {
public:
    // dist is (k+1)x(k+1) indexed by point; names has k entries. Throws Error if dist is
    // not a metric (zero diagonal, symmetric, positive off diagonal, triangle inequality).
    PointedSpace(std::vector<std::string> names, std::vector<std::vector<Rational>> dist);

    int size() const { return static_cast<int>(names_.size()); }
    const Rational& d(int i, int j) const { return dist_[i][j]; }
    const std::vector<std::string>& names() const { return names_; }
    Alphabet alphabet() const { return Alphabet(names_); }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<Rational>> dist_;
};

// Distances on points, their formal inverses and the basepoint (letter 0).
class RhoTable {
public:
    explicit RhoTable(const PointedSpace& space) : space_(&space) {}
    Rational operator()(Letter x, Letter y) const;

private:
    const PointedSpace* space_;
};

RhoTable rho_extend(const PointedSpace& space);

// theta[i] = partner of i (0-based); theta[i] == i for fixed points.
using Match = std::vector<int>;

constexpr int kMatchCap = 10;

// All non-crossing involutions on {0..k-1}. Throws Error above cap.
std::vector<Match> enumerate_matches(int k, int cap = kMatchCap);

// Sum over fixed points of rho(w_i,1) plus over pairs i<theta(i) of rho(w_i, w_theta(i)^-1).
// w need not be reduced.
Rational match_cost(const std::vector<Letter>& w, const Match& theta, const RhoTable& rho);

// Interval DP over the reduced word.
Rational graev_norm(const Word& w, const PointedSpace& space);
Rational graev_norm_bruteforce(const Word& w, const PointedSpace& space);
Rational graev_dist(const Word& u, const Word& v, const PointedSpace& space);

} // namespace bimet
