#pragma once

#include <utility>
#include <vector>

#include "twistrank/intkit.hpp"

namespace twistrank {

/// Continued fraction of sqrt(n) for nonsquare n: [a0; period repeating].
/// The last period element is always 2*a0 and the rest is a palindrome.
struct ContinuedFraction {
    Int n;
    Int a0;
    std::vector<Int> period;
};

/// Minimal positive solution of T^2 - d*U^2 = ±1, i.e. the fundamental
/// unit T + U*sqrt(d) of Q(sqrt(d)) for squarefree d ≡ 2, 3 (mod 4).
struct FundamentalUnit {
    Int d;
    Int T;
    Int U;
    int norm = 1;  // T^2 - d*U^2, either +1 or -1
};

ContinuedFraction cf_sqrt(const Int& n);

/// Fundamental unit via the convergent one step before the period closes.
/// norm is -1 exactly when the period length is odd. d ≡ 1 (mod 4) is
/// rejected: its units are half-integral and carry different coefficient
/// semantics.
FundamentalUnit fundamental_unit(const Int& d);

/// (T mod 3, U mod 3)
std::pair<int, int> unit_residues(const FundamentalUnit& u);

}  // namespace twistrank
