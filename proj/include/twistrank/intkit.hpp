#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace twistrank {

using Int = mpz_class;  // arbitrary-precision integer
using Rat = mpq_class;  // arbitrary-precision rational, reduced, denominator > 0

inline constexpr unsigned long kDefaultTrialBound = 1000000;

/// Factorization of a positive integer by trial division. `complete` is
/// false when the bound was hit and a composite cofactor remains; the
/// factors found so far are still listed.
struct Factorization {
    Int n;
    std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent), primes ascending
    bool complete = false;

    /// n divided by every listed prime power (1 when complete).
    Int cofactor() const;
};

/// floor(sqrt(n)); rejects negative input.
Int isqrt(const Int& n);

bool is_perfect_square(const Int& n);

/// Deterministic Miller-Rabin with the first twelve prime witnesses,
/// exact for n < 3.3e24.
bool is_prime(const Int& n);

Factorization factor_trial(const Int& n, const Int& bound = Int(kDefaultTrialBound));

/// True iff no prime divides n twice. Throws IncompleteFactorization when
/// the factorization cannot decide.
bool is_squarefree(const Int& n, const Int& bound = Int(kDefaultTrialBound));

/// Largest squarefree d | n with n/d a perfect square.
Int squarefree_kernel(const Int& n, const Int& bound = Int(kDefaultTrialBound));

/// Kronecker symbol (delta / a).
int kronecker(const Int& delta, const Int& a);
int kronecker(const Int& delta, unsigned long a);

/// p-adic valuation of a rational; std::nullopt encodes +infinity (q == 0).
std::optional<long> valuation(const Int& p, const Rat& q);

Int pow_int(const Int& base, unsigned long exp);

/// Mathematical residue in {0, 1, 2}.
int mod3(const Int& n);

}  // namespace twistrank
