#include <doctest.h>

#include <cmath>

#include "etaq/eichler.hpp"
#include "etaq/qseries.hpp"
#include "etaq/sunrise.hpp"

using namespace etaq;

namespace {
const mpfr_prec_t B = bits_for_digits(60);
Real R(double x) { return Real(x, B); }
bool close(const Real& a, const Real& b, long digits) {
    return abs(a - b) < pow10(-digits, B) * max(Real(1L, B), abs(b));
}
}  // namespace

TEST_CASE("nome round trip through the eta parametrization") {
    Complex q0(R(0.05), Real(B));
    Real x = 3 * eval_eta_quotient(EtaQuotient::parse("2^2 3^4 1^-4 6^-2"), q0, 45).re;
    Complex q = nome_Q(x, 40);
    CHECK(close(q.re, R(0.05), 38));
    Real edge = sqrt(R(3)) + sqrt(R(6));
    CHECK(abs(nome_Q(edge, 30).re).to_double() == doctest::Approx(std::exp(-M_PI * std::sqrt(2.0 / 3))).epsilon(1e-12));
    CHECK_THROWS_AS(nome_Q(R(1), 30), SunriseError);
}

TEST_CASE("cusp choice") {
    CHECK(choose_cusp(R(4), 30).k == 1);
    CuspChoice c = choose_cusp(R(-1), 30);
    CHECK(c.k == 2);
    CHECK(close(c.wk2, R(5), 40));
    CHECK(choose_cusp(R(100), 30).k == 6);
    CHECK(choose_cusp(R(2), 30).k == 3);
    for (double w2 : {-50.0, -3.0, -1.0, 0.2, 0.6, 2.9, 3.1, 8.0, 10.0, 17.0, 18.0, 400.0}) {
        CuspChoice k = choose_cusp(R(w2), 30);
        CHECK(k.in_range);
        CHECK(abs(k.qk) < 0.16304);
    }
}

TEST_CASE("two-loop special values") {
    CHECK(close(I2(R(1), 45).value.re, pi(B) * pi(B) / 4, 43));
    CHECK(close(I2(R(0), 45).value.re, 12 * clausen_C2(45) / 5, 43));
    CHECK(I2(R(0), 20).value.re.to_double() == doctest::Approx(2.3439072387));
    CHECK_THROWS_AS(I2(R(9), 30), SunriseError);
}

TEST_CASE("two-loop against Bessel quadrature") {
    for (double w2 : {-5.0, -1.0, 0.5, 2.0}) {
        Real want = 4 * bessel_moment_t(R(w2), {1, 3, 1}, 30);
        SunriseValue v = I2(R(w2), 35);
        CHECK(close(v.value.re, want, 28));
        CHECK(abs(v.value.im) < pow10(-30, B));
    }
}

TEST_CASE("adjacent cusps agree near interval boundaries") {
    for (double w2 : {2.95, 3.05}) CHECK(close(I2_at(R(w2), 1, 45).value.re, I2_at(R(w2), 3, 45).value.re, 40));
    Real b23 = 9 - 6 * sqrt(R(2));
    for (double d : {-0.02, 0.02}) CHECK(close(I2_at(b23 + R(d), 2, 45).value.re, I2_at(b23 + R(d), 3, 45).value.re, 40));
}

TEST_CASE("imaginary part above threshold is the cut discontinuity") {
    // q > 0 above w^2 = 9, so Im log(-1/q) = pi and Im I = pi^2 f / sqrt 3
    SunriseValue v = I2(R(16), 40);
    CHECK(v.cusp == 1);
    Complex f = eval_eta_quotient(EtaQuotient::parse("1^6 6^1 2^-3 3^-2"), v.nome, 40);
    CHECK(close(v.value.im, pi(B) * pi(B) * f.re / sqrt(R(3)), 35));
    Real lo = I2(R(15.999), 30).value.im, hi = I2(R(16.001), 30).value.im;
    CHECK(abs(lo - v.value.im) < 1e-2);
    CHECK(abs(hi - v.value.im) < 1e-2);
}

TEST_CASE("three-loop") {
    CHECK(close(J3(R(0), 45).value.re, 7 * zeta3(45), 43));
    for (double t : {8.0, -8.0}) {
        Complex a = J3_branch(R(t), 1, 45).value, b = J3_branch(R(t), 6, 45).value;
        CHECK(close(a.re, b.re, 40));
    }
    Real want = 8 * bessel_moment_t(R(-5), {1, 4, 1}, 30);
    CHECK(close(J3(R(-5), 35).value.re, want, 28));
    CHECK_THROWS_AS(J3(R(4), 30), SunriseError);
}

TEST_CASE("t from z round trip") {
    for (double t : {-20.0, -8.0, 1.0, 3.0}) {
        Complex z = z_of_t(R(t), 40);
        CHECK(z.im > 0.0);
        Complex q = exp(Complex(Real(B), 2 * pi(B)) * z);
        Complex e6 = eval_eta_quotient(EtaQuotient::parse("2^6 6^6 1^-6 3^-6"), q, 45);
        CHECK(close(-64 * e6.re, R(t), 35));
    }
}

TEST_CASE("hypergeometric parametrization") {
    CHECK(verify_H_param(50).pass);
    HParamReport bad = verify_H_param(50, mpq_class(1, 4));
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.first_mismatch);
    CHECK(*bad.first_mismatch <= 10);
}
