#include "twistrank/classno.hpp"

#include <mpfr.h>

#include <set>
#include <stdexcept>
#include <tuple>

#include "twistrank/errors.hpp"

namespace twistrank {

const char* to_string(ClassNumberMethod m) {
    switch (m) {
        case ClassNumberMethod::forms: return "forms";
        case ClassNumberMethod::dirichlet_sum: return "dirichlet_sum";
        case ClassNumberMethod::analytic: return "analytic";
        case ClassNumberMethod::cycles: return "cycles";
    }
    return "?";
}

FundamentalDiscriminant fundamental_discriminant(const Int& m) {
    if (m == 0 || m == 1) {
        throw std::domain_error("fundamental_discriminant: radicand must not be 0 or 1");
    }
    if (!is_squarefree(abs(m))) {
        throw std::domain_error("fundamental_discriminant: " + m.get_str() +
                                " is not squarefree");
    }
    FundamentalDiscriminant fd;
    fd.field_radicand = m;
    fd.delta = (mpz_fdiv_ui(m.get_mpz_t(), 4) == 1) ? m : Int(4 * m);
    return fd;
}

FundamentalDiscriminant discriminant_from_delta(const Int& delta) {
    if (delta != 0) {
        unsigned long r = mpz_fdiv_ui(delta.get_mpz_t(), 4);
        if (r == 1) {
            if (delta != 1 && is_squarefree(abs(delta))) return {delta, delta};
        } else if (r == 0) {
            Int m = delta / 4;
            unsigned long rm = mpz_fdiv_ui(m.get_mpz_t(), 4);
            if ((rm == 2 || rm == 3) && is_squarefree(abs(m))) return {delta, m};
        }
    }
    throw std::domain_error("not a fundamental discriminant: " + delta.get_str());
}

std::vector<ReducedForm> reduced_imaginary_forms(const FundamentalDiscriminant& fd) {
    const Int& delta = fd.delta;
    if (delta >= 0) {
        throw std::domain_error("reduced_imaginary_forms: delta must be negative");
    }
    std::vector<ReducedForm> forms;
    const unsigned long parity = mpz_fdiv_ui(delta.get_mpz_t(), 2);
    Int amax = isqrt(Int(-delta) / 3);
    for (Int a = 1; a <= amax; ++a) {
        Int four_a = 4 * a;
        for (Int b = 1 - a; b <= a; ++b) {
            if (mpz_fdiv_ui(b.get_mpz_t(), 2) != parity) continue;
            Int num = b * b - delta;  // 4ac
            if (!mpz_divisible_p(num.get_mpz_t(), four_a.get_mpz_t())) continue;
            Int c = num / four_a;
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd(a, gcd(b, c)) != 1) continue;
            forms.push_back({a, b, c});
        }
    }
    return forms;
}

ClassNumberResult h_imaginary_forms(const FundamentalDiscriminant& fd) {
    Int h(static_cast<unsigned long>(reduced_imaginary_forms(fd).size()));
    if (h < 1) throw std::logic_error("h_imaginary_forms: empty class group");
    return {fd, h, ClassNumberMethod::forms, mod3(h)};
}

ClassNumberResult h_imaginary_dirichlet(const FundamentalDiscriminant& fd) {
    const Int& delta = fd.delta;
    if (delta >= -4) {
        throw std::domain_error("h_imaginary_dirichlet: requires delta < -4");
    }
    Int abs_delta = -delta;
    if (!abs_delta.fits_ulong_p()) {
        throw std::domain_error("h_imaginary_dirichlet: |delta| too large for character sum");
    }
    const unsigned long n = abs_delta.get_ui();
    Int sum = 0;
    for (unsigned long a = 1; a < n; ++a) {
        int chi = kronecker(delta, a);
        if (chi > 0) {
            sum += a;
        } else if (chi < 0) {
            sum -= a;
        }
    }
    Int h = -sum / abs_delta;
    if (h * abs_delta != -sum || h < 1) {
        throw std::logic_error("h_imaginary_dirichlet: character sum is not -h*|delta| at delta = " +
                               delta.get_str());
    }
    return {fd, h, ClassNumberMethod::dirichlet_sum, mod3(h)};
}

namespace {

// One attempt at the log-sin class number formula at a fixed precision.
// Returns true when the value lands within 0.05 of a positive integer.
bool analytic_attempt(unsigned long n, const Int& delta, const FundamentalUnit& unit,
                      mpfr_prec_t prec, Int& h_out) {
    mpfr_t pi, term, prod, reg, value, nearest;
    mpfr_inits2(prec, pi, term, prod, reg, value, nearest, static_cast<mpfr_ptr>(nullptr));

    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_set_ui(prod, 1, MPFR_RNDN);
    // chi(n - a) = chi(a) and sin is symmetric about pi/2, so the two
    // halves of the character sum are equal; accumulate one half as a
    // product and take a single log at the end.
    for (unsigned long a = 1; 2 * a < n; ++a) {
        int chi = kronecker(delta, a);
        if (chi == 0) continue;
        mpfr_mul_ui(term, pi, a, MPFR_RNDN);
        mpfr_div_ui(term, term, n, MPFR_RNDN);
        mpfr_sin(term, term, MPFR_RNDN);
        if (chi > 0) {
            mpfr_mul(prod, prod, term, MPFR_RNDN);
        } else {
            mpfr_div(prod, prod, term, MPFR_RNDN);
        }
    }

    // regulator log(T + U*sqrt(d))
    mpfr_set_z(reg, unit.d.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(reg, reg, MPFR_RNDN);
    mpfr_mul_z(reg, reg, unit.U.get_mpz_t(), MPFR_RNDN);
    mpfr_add_z(reg, reg, unit.T.get_mpz_t(), MPFR_RNDN);
    mpfr_log(reg, reg, MPFR_RNDN);

    mpfr_log(value, prod, MPFR_RNDN);
    mpfr_div(value, value, reg, MPFR_RNDN);
    mpfr_neg(value, value, MPFR_RNDN);

    mpfr_rint(nearest, value, MPFR_RNDN);
    mpfr_sub(term, value, nearest, MPFR_RNDN);
    mpfr_abs(term, term, MPFR_RNDN);
    bool ok = mpfr_cmp_d(term, 0.05) < 0;
    if (ok) mpfr_get_z(h_out.get_mpz_t(), nearest, MPFR_RNDN);

    mpfr_clears(pi, term, prod, reg, value, nearest, static_cast<mpfr_ptr>(nullptr));
    return ok;
}

}  // namespace

ClassNumberResult h_real_analytic(const FundamentalDiscriminant& fd,
                                  const FundamentalUnit& unit) {
    const Int& delta = fd.delta;
    if (delta <= 0) throw std::domain_error("h_real_analytic: delta must be positive");
    if (delta != 4 * unit.d) {
        throw std::domain_error("h_real_analytic: delta must equal 4 * unit radicand");
    }
    if (!delta.fits_ulong_p()) {
        throw std::domain_error("h_real_analytic: delta too large for character sum");
    }
    const unsigned long n = delta.get_ui();

    // Start near double precision and double the working precision up to
    // four times before giving up.
    for (int attempt = 0; attempt <= 4; ++attempt) {
        Int h;
        if (analytic_attempt(n, delta, unit, mpfr_prec_t(60) << attempt, h)) {
            if (h < 1) {
                throw PrecisionError("h_real_analytic: rounded to a nonpositive value at delta = " +
                                     delta.get_str());
            }
            return {fd, h, ClassNumberMethod::analytic, mod3(h)};
        }
    }
    throw PrecisionError("h_real_analytic: value not within 0.05 of an integer after "
                         "precision escalation at delta = " + delta.get_str());
}

namespace {

using FormTuple = std::tuple<Int, Int, Int>;

// Reduction step on reduced indefinite forms: (a, b, c) -> (c, r, (r^2-D)/(4c))
// with r ≡ -b (mod 2|c|) and sqrt(D) - 2|c| < r < sqrt(D).
FormTuple rho(const FormTuple& f, const Int& delta, const Int& s) {
    const Int& c = std::get<2>(f);
    Int m = 2 * abs(c);
    Int r = s - (s + std::get<1>(f)) % m;  // b > 0 on reduced forms, so s + b >= 0
    Int c2 = (r * r - delta) / (4 * c);
    return {c, r, c2};
}

}  // namespace

Int h_real_cycles(const FundamentalDiscriminant& fd) {
    const Int& delta = fd.delta;
    if (delta <= 0) throw std::domain_error("h_real_cycles: delta must be positive");
    const Int s = isqrt(delta);
    const unsigned long parity = mpz_fdiv_ui(delta.get_mpz_t(), 2);

    // Reduced primitive forms: 0 < b < sqrt(D) and |sqrt(D) - 2|a|| < b,
    // checked with exact integer comparisons.
    std::set<FormTuple> forms;
    for (Int b = 1; b <= s; ++b) {
        if (mpz_fdiv_ui(b.get_mpz_t(), 2) != parity) continue;
        Int num = delta - b * b;  // = -4ac > 0
        Int N = num / 4;
        for (Int u = 1; u * u <= N; ++u) {
            if (!mpz_divisible_p(N.get_mpz_t(), u.get_mpz_t())) continue;
            Int v = N / u;
            for (const Int& aa : {u, v}) {
                Int cc = N / aa;
                Int twoa = 2 * aa;
                if ((twoa + b) * (twoa + b) <= delta) continue;
                if (twoa > b && (twoa - b) * (twoa - b) >= delta) continue;
                if (gcd(aa, gcd(b, cc)) != 1) continue;
                forms.insert({aa, b, -cc});
                forms.insert({-aa, b, cc});
            }
        }
    }

    // rho permutes the reduced forms; the narrow class number is the number
    // of orbits.
    std::set<FormTuple> visited;
    Int cycles = 0;
    for (const FormTuple& start : forms) {
        if (visited.count(start)) continue;
        ++cycles;
        FormTuple cur = start;
        while (!visited.count(cur)) {
            visited.insert(cur);
            cur = rho(cur, delta, s);
            if (!forms.count(cur)) {
                throw std::logic_error("h_real_cycles: rho left the reduced set at delta = " +
                                       delta.get_str());
            }
        }
    }
    return cycles;
}

ScholzReport scholz_consistent(const Int& D) {
    if (D < 1 || mpz_even_p(D.get_mpz_t()) || !is_squarefree(D)) {
        throw std::domain_error("scholz_consistent: D must be an odd squarefree positive integer");
    }
    ClassNumberResult im = h_imaginary_forms(fundamental_discriminant(-2 * D));
    Int six_d = 6 * D;
    Int kernel = squarefree_kernel(six_d);
    FundamentalUnit unit = fundamental_unit(kernel);
    ClassNumberResult re = h_real_analytic(fundamental_discriminant(kernel), unit);

    ScholzReport rep;
    rep.D = D;
    rep.kernel = kernel;
    rep.kernel_reduced = (kernel != six_d);
    rep.h_im_mod3 = im.h_mod_3;
    rep.h_re_mod3 = re.h_mod_3;
    rep.implication_holds = !(im.h_mod_3 != 0 && re.h_mod_3 == 0);
    return rep;
}

}  // namespace twistrank
