// Probability semantics of the symmetric n-player game.
//
// A GamePoint holds the effect probabilities x_1..x_n, where x_k is the
// probability that a player's effect occurs given that exactly k of the n
// players (that player included) chose the same cause state. Causes are
// i.i.d. fair coins. Everything here is exact rational arithmetic; the
// brute-force enumerations are the independent oracles the algebraic
// modules are checked against.
#pragma once

#include <array>

#include "gst/rational.hpp"

namespace gst {

inline constexpr int kDefaultEnumerationCap = 16;

struct GamePoint {
    int n = 0;
    RatVec x;

    GamePoint() = default;
    GamePoint(int n_, RatVec x_);

    // True when every coordinate lies in [0,1]. The algebraic operations
    // accept unconstrained vectors; this flag records interpretability.
    bool probabilistic() const;
};

struct ResidualReport {
    int n = 0;
    GamePoint x;
    Rational marginal;   // P(E_i | C_k) == P(E_i)
    Rational joint;      // P(E_i ∧ E_j | C_k), exact enumeration
    Rational residual;   // joint - marginal^2
    Rational psi;        // quadratic-form value at x
    bool relation_ok = false;  // residual == -psi, exactly
};

// max_s |x_s - x_{n-s+1}|. Positive iff the point exhibits influence.
Rational influence_margin(const GamePoint& p);

// (1/2^{n-1}) Σ_{k=0}^{n-1} C(n-1,k) x_{k+1}. A player's agreement count is
// 1 + Binomial(n-1, 1/2), so this is the unconditional effect probability.
Rational marginal_effect_prob(const GamePoint& p);

// Conditional-independence residual by exact enumeration of all 2^{n-1}
// cause assignments with one cause fixed. The index triple (effect i,
// effect j, conditioned cause k) is irrelevant by symmetry; the default is
// (0,1,2) and any distinct triple may be passed for cross-checking.
ResidualReport independence_residual(const GamePoint& p, int cap = kDefaultEnumerationCap);
ResidualReport independence_residual(const GamePoint& p, std::array<int, 3> ijk,
                                     int cap = kDefaultEnumerationCap);

// True iff every (cause, effect) pair is influenced: some assignment of the
// remaining causes exists where flipping the cause changes the effect's
// conditional probability. Agrees with influence_margin(p) > 0.
bool influence_bruteforce(const GamePoint& p, int cap = kDefaultEnumerationCap);

}  // namespace gst
