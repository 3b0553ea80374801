#include "twistrank/intkit.hpp"

#include <stdexcept>

#include "twistrank/errors.hpp"

namespace twistrank {

Int Factorization::cofactor() const {
    Int rest = n;
    for (const auto& [p, e] : factors) {
        for (unsigned i = 0; i < e; ++i) rest /= p;
    }
    return rest;
}

Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative input");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace {

// Exact below 3.3e24 (Sorenson–Webster); every input here is far smaller.
constexpr unsigned long kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool witness_passes(const Int& n, const Int& n1, const Int& odd, unsigned long twos,
                    unsigned long a) {
    Int x;
    Int base(static_cast<unsigned long>(a));
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), odd.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n1) return true;
    for (unsigned long i = 1; i < twos; ++i) {
        x = x * x % n;
        if (x == n1) return true;
    }
    return false;
}

}  // namespace

bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (unsigned long p : kWitnesses) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    Int n1 = n - 1;
    Int odd = n1;
    unsigned long twos = mpz_scan1(odd.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), twos);
    for (unsigned long a : kWitnesses) {
        if (!witness_passes(n, n1, odd, twos, a)) return false;
    }
    return true;
}

Factorization factor_trial(const Int& n, const Int& bound) {
    if (n < 1) throw std::domain_error("factor_trial: n must be positive");
    if (bound < 1) throw std::domain_error("factor_trial: bound must be positive");

    Factorization out;
    out.n = n;
    Int rest = n;

    auto strip = [&](const Int& p) {
        if (!mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) return;
        unsigned e = 0;
        do {
            rest /= p;
            ++e;
        } while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t()));
        out.factors.emplace_back(p, e);
    };

    if (bound >= 2) strip(2);
    if (bound >= 3) strip(3);
    Int p = 5;
    int step = 2;  // alternate +2, +4 to walk 6k±1
    while (p <= bound && p * p <= rest) {
        strip(p);
        p += step;
        step = 6 - step;
    }

    if (rest == 1) {
        out.complete = true;
    } else if (p * p > rest || is_prime(rest)) {
        // Nothing below sqrt(rest) divides it, or the cofactor is prime.
        out.factors.emplace_back(rest, 1);
        out.complete = true;
    } else {
        out.complete = false;
    }
    return out;
}

bool is_squarefree(const Int& n, const Int& bound) {
    if (n < 1) throw std::domain_error("is_squarefree: n must be positive");
    Factorization f = factor_trial(n, bound);
    if (!f.complete) {
        throw IncompleteFactorization("is_squarefree: cannot decide, factorization of " +
                                      n.get_str() + " incomplete at bound " + bound.get_str());
    }
    for (const auto& [p, e] : f.factors) {
        if (e >= 2) return false;
    }
    return true;
}

Int squarefree_kernel(const Int& n, const Int& bound) {
    if (n < 1) throw std::domain_error("squarefree_kernel: n must be positive");
    Factorization f = factor_trial(n, bound);
    if (!f.complete) {
        throw IncompleteFactorization("squarefree_kernel: factorization of " + n.get_str() +
                                      " incomplete at bound " + bound.get_str());
    }
    Int kernel = 1;
    for (const auto& [p, e] : f.factors) {
        if (e % 2 == 1) kernel *= p;
    }
    return kernel;
}

int kronecker(const Int& delta, const Int& a) {
    return mpz_kronecker(delta.get_mpz_t(), a.get_mpz_t());
}

int kronecker(const Int& delta, unsigned long a) {
    return mpz_kronecker_ui(delta.get_mpz_t(), a);
}

std::optional<long> valuation(const Int& p, const Rat& q) {
    if (p < 2 || !is_prime(p)) throw std::domain_error("valuation: p must be prime");
    if (q == 0) return std::nullopt;
    Int scratch;
    Int num(q.get_num());
    long vnum = static_cast<long>(
        mpz_remove(scratch.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
    if (vnum > 0) return vnum;  // reduced form: p cannot divide both parts
    Int den(q.get_den());
    long vden = static_cast<long>(
        mpz_remove(scratch.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));
    return -vden;
}

Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

int mod3(const Int& n) {
    return static_cast<int>(mpz_fdiv_ui(n.get_mpz_t(), 3));
}

}  // namespace twistrank
