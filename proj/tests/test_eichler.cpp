#include <doctest.h>

#include <numeric>

#include "etaq/eichler.hpp"

using namespace etaq;

namespace {
const mpfr_prec_t B = bits_for_digits(40);
bool close(const Real& a, const Real& b, long digits) {
    return abs(a - b) < pow10(-digits, B) * max(Real(1L, B), abs(b));
}
}  // namespace

TEST_CASE("moment convergence rules") {
    CHECK(moment_divergence({1, 3, 1}).empty());
    CHECK_FALSE(moment_divergence({2, 1, 1}).empty());
    CHECK_FALSE(moment_divergence({1, 0, 1}).empty());
    CHECK_FALSE(moment_divergence({2, 2, 1}).empty());
    CHECK(moment_divergence({1, 4, 1}, 9.0).empty());
    CHECK_FALSE(moment_divergence({1, 3, 1}, 9.0).empty());
    CHECK_THROWS_AS(bessel_moment({3, 2, 1}, 20), EichlerError);
}

TEST_CASE("simple Bessel moments") {
    // int K0 x dx = 1, int K0^2 x dx = 1/2, int I0 K0^2 x dx = pi/(3 sqrt 3)
    CHECK(close(bessel_moment({0, 1, 1}, 30), Real(1L, B), 28));
    CHECK(close(bessel_moment({0, 2, 1}, 30), Real(1L, B) / 2, 28));
    CHECK(close(bessel_moment({1, 2, 1}, 30), pi(B) / (3 * sqrt(Real(3L, B))), 28));
}

TEST_CASE("Fricke relations") {
    for (const auto& f : lseries_forms())
        for (double y : {0.3, 0.7, 1.3}) CHECK(fricke_residual(f, Real(y, B), 30) < pow10(-25, B));
}

TEST_CASE("Hecke multiplicativity of the L6 and L8 coefficients") {
    for (const char* name : {"L6", "L8"}) {
        QSeries s = lseries_form_series(lseries_form(name), 201);
        auto a = [&](long n) { return s.coeff_at_exponent24(24 * n); };
        for (long m = 2; m <= 14; ++m)
            for (long n = m + 1; m * n <= 200; ++n)
                if (std::gcd(m, n) == 1) CHECK(a(m * n) == a(m) * a(n));
    }
}

TEST_CASE("L-values") {
    const LSeriesForm& l8 = lseries_form("L8");
    Real l5 = lseries_value(l8, 5, 30), l1 = lseries_value(l8, 1, 30);
    Real p = pi(B);
    CHECK(close(l5, p * p * p * p / 54 * l1, 26));
    // the split point does not matter
    const LSeriesForm& l6 = lseries_form("L6");
    CHECK(close(lseries_value(l6, 2, 30), lseries_value(l6, 2, 30, Real(0.3, B)), 26));
}

TEST_CASE("on-shell sunrise against L-values") {
    for (long L : {3L, 4L}) CHECK(onshell_sunrise(L, 25).all_pass());
}

TEST_CASE("quasi-period partner heads") {
    QSeries g4 = quasi_period_series({4}, PeriodForm::partner, 5);
    CHECK(g4.coeff_at_exponent24(24) == 5);
    CHECK(g4.coeff_at_exponent24(48) == 102);
    CHECK(g4.coeff_at_exponent24(72) == 945);
    QSeries g6 = quasi_period_series({6}, PeriodForm::partner, 5);
    CHECK(g6.coeff_at_exponent24(24) == 1);
    CHECK(g6.coeff_at_exponent24(96) == 5264);
}

TEST_CASE("period integrals: termwise against quadrature") {
    for (PeriodForm w : {PeriodForm::holomorphic, PeriodForm::partner}) {
        Real a = eichler_period({4}, w, 1, 25), b = eichler_period_quadrature({4}, w, 1, 25);
        CHECK(close(a, b, 22));
    }
}
