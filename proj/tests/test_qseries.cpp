#include <doctest.h>

#include <random>

#include "etaq/qseries.hpp"

using namespace etaq;

namespace {
QSeries ints(std::vector<long> v) {
    std::vector<mpz_class> z(v.begin(), v.end());
    return QSeries(0, z);
}
}  // namespace

TEST_CASE("eta(1) is the pentagonal series") {
    QSeries e = eta_series(1, 40);
    std::vector<long> want(40, 0);
    for (long m = -10; m <= 10; ++m) {
        long k = m * (3 * m - 1) / 2;
        if (k < 40) want[k] += (m % 2 == 0) ? 1 : -1;
    }
    CHECK(e.offset24() == 1);
    for (long k = 0; k < 40; ++k) CHECK(e.coeff(k) == want[k]);
    // q^(-1/24) eta(1) as a theta series
    CHECK(theta_series(1, 2, 40).coeffs() == e.coeffs());
}

TEST_CASE("quotient expansion agrees with the factored product") {
    for (const char* s : {"2^1 6^5 1^-5 3^-1", "1^14 6^10 2^-22 3^-2", "3^12 1^-12", "169^1 1^-1"}) {
        EtaQuotient e = EtaQuotient::parse(s);
        CHECK(quotient_expansion(e, 300) == quotient_expansion_factored(e, 300));
    }
}

TEST_CASE("level-6 Hauptmodul head") {
    QSeries h = quotient_expansion(EtaQuotient::parse("2^1 6^5 1^-5 3^-1"), 6);
    CHECK(h.offset24() == 24);
    std::vector<long> head = {1, 5, 19, 61, 174};
    for (size_t i = 0; i < head.size(); ++i) CHECK(h.coeff(static_cast<long>(i)) == head[i]);
}

TEST_CASE("weight-3 form g equals its two eta forms and its Lambert series through q^500") {
    long K = 501;
    QSeries g = quotient_expansion(EtaQuotient::parse("2^5 3^4 6^1 1^-4"), K - 1);
    QSeries a = quotient_expansion(EtaQuotient::parse("3^9 1^-3"), K - 1);
    QSeries b = quotient_expansion(EtaQuotient::parse("6^9 2^-3"), K - 1);
    QSeries l = lambert_series({{1, 1}, {5, -1}}, 6, 2, K);
    for (long n = 1; n < K; ++n) {
        mpq_class gn = g.coeff_at_exponent24(24 * n);
        CHECK(gn == a.coeff_at_exponent24(24 * n) + b.coeff_at_exponent24(24 * n));
        CHECK(gn == l.coeff(n));
    }
}

TEST_CASE("series arithmetic") {
    QSeries a = ints({1, 3, -2, 7, 0, 5, 1, 1, -4});
    QSeries one = a * inverse(a);
    CHECK(one == QSeries::one(9));
    CHECK(pow(a, 3) == a * a * a);
    CHECK((a + mpq_class(2) - a) == QSeries::constant(2, 9));
    CHECK(series_arith(a, ArithOp::scalar, mpq_class(1, 3)).coeff(1) == 1);
    QSeries d = ints({0, 1, 1, 1, 1}).derivative();
    CHECK(d.coeff(3) == 3);
}

TEST_CASE("multiplication backends agree") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<mpz_class> a(300), b(250);
        for (auto& x : a) x = dist(rng);
        for (auto& x : b) x = mpz_class(dist(rng)) * mpz_class("123456789012345678901");
        auto s = poly_mul_schoolbook(a, b, 400);
        CHECK(poly_mul_kronecker(a, b, 400) == s);
        CHECK(poly_mul(a, b, 400) == s);
    }
}

TEST_CASE("unit inverse") {
    std::vector<mpz_class> a = {1, -1, -1, 0, 0, 1, 0, 1};
    auto inv = poly_inverse_unit(a, 20);
    auto p = poly_mul(a, inv, 20);
    CHECK(p[0] == 1);
    for (size_t i = 1; i < p.size(); ++i) CHECK(p[i] == 0);
}

TEST_CASE("parse and print eta quotients") {
    EtaQuotient e = EtaQuotient::parse("2^1 6^5 1^-5 3^-1");
    CHECK(e.weight() == 0);
    CHECK(e.offset24() == 24);
    CHECK(EtaQuotient::parse(e.str()) == e);
    CHECK_THROWS(EtaQuotient::parse("2^x"));
}

TEST_CASE("numerical evaluation matches the exact expansion") {
    mpfr_prec_t b = bits_for_digits(40);
    Complex q0(Real(0.1, b), Real(0.05, b));
    EtaQuotient e = EtaQuotient::parse("2^1 6^5 1^-5 3^-1");
    QSeries h = quotient_expansion(e, 200);
    SeriesValue v = eval_series(h, q0, 30);
    Complex w = eval_eta_quotient(e, q0, 30);
    Complex d = v.value - w;
    CHECK(abs(d.re) < pow10(-28, b));
    CHECK(abs(d.im) < pow10(-28, b));
    CHECK(v.error < pow10(-25, b));
}
