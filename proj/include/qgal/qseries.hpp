#pragma once

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <limits>

#include "qgal/dd.hpp"
#include "qgal/errors.hpp"
#include "qgal/scalar.hpp"

namespace qgal {

// Deformation parameter 0 < q < 1.
struct QValue {
    double q;

    explicit QValue(double q_) : q(q_) {
        if (!(q > 0.0 && q < 1.0)) throw Error("q must lie in (0,1), got " + std::to_string(q_));
    }
    operator double() const { return q; }
};

// (a;q)_n = prod_{k=0}^{n-1} (1 - q^k a), finite n >= 0.
inline cplx qpochhammer(cplx a, double q, int n) {
    cplx p = 1.0;
    cplx qk = 1.0;
    for (int k = 0; k < n; ++k) {
        p *= (1.0 - qk * a);
        qk *= q;
    }
    return p;
}

// (a;q)_inf. The factors tend to 1 geometrically; the product is cut once
// |q^k a| drops below eps/(1-q), which bounds the remaining relative change.
inline cplx qpochhammer_inf(cplx a, double q) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double cut = eps / (1.0 - q);
    cplx p = 1.0;
    cplx qka = a;
    for (int k = 0; k < 100000; ++k) {
        if (std::abs(qka) < cut) break;
        p *= (1.0 - qka);
        qka *= q;
    }
    return p;
}

namespace detail {

// If a = q^{-n} for a natural n (within tol), return n, else -1.
inline int terminating_order(cplx a, double q, double tol = 1e-12) {
    if (std::abs(a.imag()) > tol) return -1;
    double re = a.real();
    if (re < 1.0 - tol) return -1;
    double n = -std::log(re) / std::log(q);
    double nr = std::round(n);
    if (std::abs(std::pow(q, -nr) - re) <= tol * std::max(1.0, re)) return static_cast<int>(nr);
    return -1;
}

} // namespace detail

// Heine's basic hypergeometric series
//   2phi1(a,b;c | q,z) = sum_k (a;q)_k (b;q)_k / ((c;q)_k (q;q)_k) z^k.
// Terminating if a (or b) = q^{-n}; then the finite sum is evaluated with
// incremental Pochhammer updates, which keeps factors like (q^{-n};q)_k
// exact products. A non-terminating series needs |z| < 1.
inline cplx hyper_2phi1(cplx a, cplx b, cplx c, double q, cplx z) {
    int na = detail::terminating_order(a, q);
    int nb = detail::terminating_order(b, q);
    int nterm = -1;
    if (na >= 0 && nb >= 0) nterm = std::min(na, nb);
    else if (na >= 0) nterm = na;
    else if (nb >= 0) nterm = nb;

    if (nterm < 0 && std::abs(z) >= 1.0)
        throw NonTerminatingDivergent("2phi1 with |z| >= 1 does not terminate");

    cplx sum = 1.0;
    cplx term = 1.0;
    cplx qk = 1.0; // q^k
    const int kmax = (nterm >= 0) ? nterm : 100000;
    for (int k = 0; k < kmax; ++k) {
        cplx denom = (1.0 - qk * c) * (1.0 - qk * q);
        if (std::abs(denom) == 0.0) throw Error("2phi1: zero denominator, c = q^{-m}");
        term *= (1.0 - qk * a) * (1.0 - qk * b) / denom * z;
        sum += term;
        qk *= q;
        if (nterm < 0 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

// Wall polynomial p_n(x; a, 0 | q) = 2phi1(q^{-n}, 0; qa | q, qx).
// Exact finite sum of n+1 terms.
inline double wall_polynomial(int n, double x, double a, double q) {
    // (0;q)_k = 1, so the series reduces to
    //   sum_{k<=n} (q^{-n};q)_k / ((qa;q)_k (q;q)_k) (qx)^k.
    double sum = 1.0;
    double term = 1.0;
    double qk = 1.0;
    double qmn = std::pow(q, -n);
    for (int k = 0; k < n; ++k) {
        term *= (1.0 - qk * qmn) / ((1.0 - qk * q * a) * (1.0 - qk * q)) * (q * x);
        sum += term;
        qk *= q;
    }
    return sum;
}

// Wall value p_n(q^m; q^d, 0 | q) on the spectral grid. The terminating sum
// cancels down from terms of size ~q^{-n(n+1)/2}, so the working precision is
// chosen from that loss: double-double while it suffices, MPFR beyond.
inline double wall_polynomial_grid(int n, int m, int d, double q) {
    if (n == 0) return 1.0;
    // cancellation from the largest term down to the value, which itself
    // sits ~q^{(n-m)(n-m+1)/2 + dn} deep below 1 when m < n
    double depth = 0.5 * n * (n + 1) + 1.0 * d * n;
    if (m < n) depth += 0.5 * (n - m) * (n - m + 1);
    double digits_lost = depth * std::log10(1.0 / q);
    if (digits_lost < 18.0) {
        // sum_{k<=n} (q^{-n};q)_k / ((q^{1+d};q)_k (q;q)_k) q^{(1+m)k}
        dd sum(1.0), term(1.0);
        dd qq(q);
        for (int k = 0; k < n; ++k) {
            dd num = (dd(1.0) - dd_pow(qq, k - n)) * dd_pow(qq, 1 + m);
            dd den = (dd(1.0) - dd_pow(qq, k + 1 + d)) * (dd(1.0) - dd_pow(qq, k + 1));
            term = term * num / den;
            sum = sum + term;
        }
        return sum.value();
    }

    const auto prec = static_cast<mpfr_prec_t>((digits_lost + 60.0) * 3.33) + 64;
    mpfr_t sum, term, qk, tmp, num, den, qmp;
    mpfr_inits2(prec, sum, term, qk, tmp, num, den, qmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qmp, q, MPFR_RNDN);
    mpfr_set_ui(sum, 1, MPFR_RNDN);
    mpfr_set_ui(term, 1, MPFR_RNDN);
    for (int k = 0; k < n; ++k) {
        // num = (1 - q^{k-n}) * q^{1+m}
        mpfr_pow_si(tmp, qmp, k - n, MPFR_RNDN);
        mpfr_ui_sub(num, 1, tmp, MPFR_RNDN);
        mpfr_pow_si(tmp, qmp, 1 + m, MPFR_RNDN);
        mpfr_mul(num, num, tmp, MPFR_RNDN);
        // den = (1 - q^{k+1+d}) (1 - q^{k+1})
        mpfr_pow_si(tmp, qmp, k + 1 + d, MPFR_RNDN);
        mpfr_ui_sub(den, 1, tmp, MPFR_RNDN);
        mpfr_pow_si(tmp, qmp, k + 1, MPFR_RNDN);
        mpfr_ui_sub(tmp, 1, tmp, MPFR_RNDN);
        mpfr_mul(den, den, tmp, MPFR_RNDN);
        mpfr_mul(term, term, num, MPFR_RNDN);
        mpfr_div(term, term, den, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, qk, tmp, num, den, qmp, static_cast<mpfr_ptr>(nullptr));
    return out;
}

} // namespace qgal
