#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "qgal/qseries.hpp"

using namespace qgal;
using Catch::Approx;

namespace {

// Independent oracle: the bare product, no increment cut, fixed term count.
cplx pochhammer_oracle(cplx a, double q, int n) {
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) p *= (1.0 - std::pow(q, k) * a);
    return p;
}

} // namespace

TEST_CASE("finite q-Pochhammer basics") {
    CHECK(qpochhammer(cplx(0.7, 0.3), 0.5, 0) == cplx(1.0));
    CHECK(std::abs(qpochhammer(cplx(1.0), 0.5, 3)) == 0.0); // first factor 1-a = 0

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        cplx a(u(rng), u(rng));
        double q = 0.05 + 0.9 * std::abs(u(rng));
        int n = rng() % 65;
        cplx lhs = qpochhammer(a, q, n + 1);
        cplx rhs = qpochhammer(a, q, n) * (1.0 - std::pow(q, n) * a);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(qpochhammer(a, q, n) - pochhammer_oracle(a, q, n)) <=
              1e-13 * std::max(1.0, std::abs(qpochhammer(a, q, n))));
    }
}

TEST_CASE("infinite q-Pochhammer converges to the direct product") {
    // (0.25; 0.25)_inf by multiplying factors until the increment dies out.
    cplx direct = 1.0;
    double f = 0.25;
    while (f > 1e-20) {
        direct *= (1.0 - f);
        f *= 0.25;
    }
    CHECK(std::abs(qpochhammer_inf(0.25, 0.25) - direct) <= 1e-14 * std::abs(direct));

    // agreement with long finite products
    CHECK(std::abs(qpochhammer_inf(0.3, 0.5) - qpochhammer(0.3, 0.5, 200)) <= 1e-14);
}

TEST_CASE("2phi1 terminating series") {
    // a = q^0: only the k = 0 term
    CHECK(hyper_2phi1(1.0, 0.3, 0.7, 0.5, 0.9).real() == Approx(1.0).margin(1e-15));

    // 2phi1(q^{-1}, 0; qa | q, qx) = 1 - x/(1-qa): two-term sum by hand
    double q = 0.37, a = 0.42, x = 1.7;
    double byhand = 1.0 + (1.0 - 1.0 / q) / ((1.0 - q * a) * (1.0 - q)) * (q * x);
    CHECK(byhand == Approx(1.0 - x / (1.0 - q * a)).epsilon(1e-13));
    cplx got = hyper_2phi1(1.0 / q, 0.0, q * a, q, q * x);
    CHECK(got.real() == Approx(1.0 - x / (1.0 - q * a)).epsilon(1e-12));
}

TEST_CASE("2phi1 divergence guard") {
    CHECK_THROWS_AS(hyper_2phi1(0.5, 0.5, 0.25, 0.5, 1.3), NonTerminatingDivergent);
}

TEST_CASE("q-binomial identity sum_k z^k/(q;q)_k = 1/(z;q)_inf") {
    for (double q : {0.3, 0.5, 0.7}) {
        double Q = q * q;
        // lhs as a 2phi1 with a = b = c = 0 evaluated at z = Q
        cplx lhs = hyper_2phi1(0.0, 0.0, 0.0, Q, Q);
        cplx rhs = 1.0 / qpochhammer_inf(Q, Q);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("Wall polynomial values") {
    CHECK(wall_polynomial(0, 0.8, 0.3, 0.5) == Approx(1.0).margin(0.0));

    double q = 0.41, a = 0.23, x = 0.9;
    CHECK(wall_polynomial(1, x, a, q) == Approx(1.0 - x / (1.0 - q * a)).epsilon(1e-13));

    // p_2(0.3; 0.25, 0 | 0.25): direct 3-term sum
    {
        double qq = 0.25, aa = 0.25, xx = 0.3;
        double s = 0.0;
        for (int k = 0; k <= 2; ++k) {
            double num = pochhammer_oracle(std::pow(qq, -2), qq, k).real();
            double den = pochhammer_oracle(qq * aa, qq, k).real() * pochhammer_oracle(qq, qq, k).real();
            s += num / den * std::pow(qq * xx, k);
        }
        CHECK(wall_polynomial(2, xx, aa, qq) == Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("Wall polynomial has exact degree n") {
    // order-(n+1) finite differences on an arithmetic grid vanish; order-n do not
    for (int n : {1, 2, 3, 5}) {
        double q = 0.5, a = 0.3, h = 0.17;
        auto f = [&](int i) { return wall_polynomial(n, 0.1 + h * i, a, q); };
        std::vector<double> d;
        for (int i = 0; i <= n + 1; ++i) d.push_back(f(i));
        double scale = 0.0;
        for (double v : d) scale = std::max(scale, std::abs(v));
        for (int ord = 0; ord <= n + 1; ++ord) {
            if (ord == n + 1) {
                CHECK(std::abs(d[0]) <= 1e-10 * std::max(1.0, scale));
            } else {
                for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
                d.pop_back();
            }
        }
    }
}

TEST_CASE("QValue validates its range") {
    CHECK_THROWS_AS(QValue(1.0), Error);
    CHECK_THROWS_AS(QValue(0.0), Error);
    CHECK(QValue(0.5).q == 0.5);
}

TEST_CASE("grid Wall evaluation matches the series where the series is safe") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        int n = static_cast<int>(rng() % 5);
        double q = 0.35 + 0.005 * static_cast<double>(rng() % 100);
        int d = static_cast<int>(rng() % 6);
        int m = static_cast<int>(rng() % 10);
        double s = wall_polynomial(n, std::pow(q, m), std::pow(q, d), q);
        double r = wall_polynomial_grid(n, m, d, q);
        CHECK(std::abs(s - r) <= 1e-9 * std::max(1.0, std::abs(s)));
    }
}

namespace {

// independent oracle: same terminating sum, straight MPFR at fixed precision
double wall_oracle(int n, int m, int d, double q, mpfr_prec_t prec) {
    mpfr_t sum, term, tmp, num, den, qmp;
    mpfr_inits2(prec, sum, term, tmp, num, den, qmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qmp, q, MPFR_RNDN);
    mpfr_set_ui(sum, 1, MPFR_RNDN);
    mpfr_set_ui(term, 1, MPFR_RNDN);
    for (int k = 0; k < n; ++k) {
        mpfr_pow_si(tmp, qmp, k - n, MPFR_RNDN);
        mpfr_ui_sub(num, 1, tmp, MPFR_RNDN);
        mpfr_pow_si(tmp, qmp, 1 + m, MPFR_RNDN);
        mpfr_mul(num, num, tmp, MPFR_RNDN);
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
    mpfr_clears(sum, term, tmp, num, den, qmp, static_cast<mpfr_ptr>(nullptr));
    return out;
}

} // namespace

TEST_CASE("grid Wall evaluation against a fixed high-precision oracle") {
    for (double q : {0.25, 0.49}) {
        for (int d : {0, 1, 3}) {
            for (int m : {0, 1, 4, 9}) {
                for (int n : {1, 2, 5, 8, 13, 18}) {
                    double got = wall_polynomial_grid(n, m, d, q);
                    double want = wall_oracle(n, m, d, q, 4096);
                    CHECK(std::abs(got - want) <= 1e-13 * std::max(std::abs(want), 1e-300));
                }
            }
        }
    }
}
