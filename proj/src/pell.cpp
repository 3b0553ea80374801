#include "twistrank/pell.hpp"

#include <stdexcept>

namespace twistrank {

ContinuedFraction cf_sqrt(const Int& n) {
    if (n < 1) throw std::domain_error("cf_sqrt: n must be positive");
    if (is_perfect_square(n)) throw std::domain_error("cf_sqrt: rational square root");

    ContinuedFraction cf;
    cf.n = n;
    cf.a0 = isqrt(n);

    // (P, Q) recurrence for the conjugate states of sqrt(n). The expansion
    // is purely periodic from index 1 on, so the period closes at the first
    // repeat of the state seen there.
    Int P = cf.a0;
    Int Q = n - cf.a0 * cf.a0;
    const Int P1 = P, Q1 = Q;
    while (true) {
        Int a = (cf.a0 + P) / Q;
        cf.period.push_back(a);
        P = a * Q - P;
        Q = (n - P * P) / Q;
        if (P == P1 && Q == Q1) break;
    }
    return cf;
}

namespace {

FundamentalUnit unit_from_cf(const ContinuedFraction& cf) {
    // Convergent of [a0; t_1, ..., t_{L-1}]: the value one step before the
    // period closes solves T^2 - n U^2 = (-1)^L minimally.
    Int p_prev = 1, p = cf.a0;
    Int q_prev = 0, q = 1;
    for (std::size_t i = 0; i + 1 < cf.period.size(); ++i) {
        Int pn = cf.period[i] * p + p_prev;
        Int qn = cf.period[i] * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    FundamentalUnit u;
    u.d = cf.n;
    u.T = p;
    u.U = q;
    u.norm = (cf.period.size() % 2 == 1) ? -1 : 1;
    if (u.T * u.T - u.d * u.U * u.U != u.norm) {
        throw std::logic_error("fundamental_unit: convergent identity failed for d = " +
                               cf.n.get_str());
    }
    return u;
}

}  // namespace

FundamentalUnit fundamental_unit(const Int& d) {
    if (d < 2) throw std::domain_error("fundamental_unit: d must be >= 2");
    unsigned long r4 = mpz_fdiv_ui(d.get_mpz_t(), 4);
    if (r4 != 2 && r4 != 3) {
        throw std::domain_error("fundamental_unit: d ≡ 1 (mod 4): half-integral units unsupported");
    }
    if (!is_squarefree(d)) {
        throw std::domain_error("fundamental_unit: d = " + d.get_str() + " is not squarefree");
    }
    return unit_from_cf(cf_sqrt(d));
}

std::pair<int, int> unit_residues(const FundamentalUnit& u) {
    return {mod3(u.T), mod3(u.U)};
}

}  // namespace twistrank
