#include <doctest.h>

#include <cmath>
#include <numeric>

#include "etaq/rademacher.hpp"

using namespace etaq;

namespace {

long inv_mod(long a, long m) {
    long g = m, x = 0, x1 = 1, a1 = a % m;
    while (a1) {
        long q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return ((x % m) + m) % m;
}

double brute_kloosterman(long c, long N, long M, long n) {
    double s = 0;
    for (long r = 0; r < c; ++r) {
        if (std::gcd(r, c) != 1) continue;
        long inv = inv_mod((N * r) % c, c);
        s += std::cos(2 * M_PI * static_cast<double>(M * r - n * inv) / c);
    }
    return c == 1 ? 1.0 : s;
}

}  // namespace

TEST_CASE("Kloosterman sums against direct summation") {
    for (long c : {1L, 5L, 7L, 11L, 25L, 49L, 97L})
        for (long N : {1L, 6L, 12L})
            for (auto [M, n] : {std::pair{1L, 1L}, {2L, 3L}, {5L, 7L}}) {
                if (std::gcd(c, N) != 1) continue;
                double want = brute_kloosterman(c, N, M, n);
                double got = kloosterman(c, N, M, n, 20).to_double();
                CHECK(got == doctest::Approx(want).epsilon(1e-9));
            }
    CHECK_THROWS_AS(kloosterman(4, 6, 1, 1, 20), DomainError);
}

TEST_CASE("Kloosterman histogram counts the units") {
    auto h = kloosterman_histogram(35, 6, 2, 3);
    long total = 0;
    for (long x : h) total += x;
    CHECK(total == 24);
}

TEST_CASE("Rademacher sums near the level-6 Hauptmodul coefficients") {
    RademacherQuery q;
    q.N = 6;
    q.M = 1;
    q.n = 1;
    q.prec = 30;
    RademacherResult r = rademacher_sum(q);
    CHECK(abs(r.value - 72) < 0.05);
    q.n = 2;
    CHECK(abs(rademacher_sum(q).value / 72 - 5) < 0.001);
    q.N = 5;
    q.n = 1;
    CHECK(abs(rademacher_sum(q).value - 125) < 0.05);
    q.N = 3;
    q.M = 2;
    q.n = 2;
    CHECK(abs(rademacher_sum(q).value / 2187 - 339) < 0.001);
}

TEST_CASE("rational snapping") {
    mpfr_prec_t b = bits_for_digits(30);
    auto a = rationalize(Real(71.9999999997, b), 1, Real(1e-6, b));
    REQUIRE(a);
    CHECK(a->value == 72);
    auto t = rationalize(Real(0.3333333333, b), 10, Real(1e-6, b));
    REQUIRE(t);
    CHECK(t->value == mpq_class(1, 3));
    CHECK_FALSE(rationalize(Real(0.123456789, b), 10, Real(1e-6, b)));
}

TEST_CASE("batch rows equal single sums") {
    auto row = rademacher_row(19, 2, {1, 2, 3, 4, 5}, 30);
    std::vector<long> want = {1, 4, 10, 25, 55};
    for (size_t i = 0; i < row.size(); ++i) CHECK(abs(row[i].value / 19 - want[i]) < 0.01);
    RademacherQuery q;
    q.N = 19;
    q.M = 2;
    q.n = 3;
    q.prec = 30;
    CHECK(abs(rademacher_sum(q).value - row[2].value) < pow10(-20, row[2].value.prec()));
    auto ints = rademacher_integer_row(19, {{2, 1}}, 5, 30);
    for (size_t i = 0; i < ints.size(); ++i) CHECK(ints[i] == 19 * want[i]);
}

TEST_CASE("symmetry R(N,M)(n)/M = R(N,n)(M)/n") {
    RademacherQuery a, b;
    a.N = b.N = 7;
    a.M = 2, a.n = 5;
    b.M = 5, b.n = 2;
    a.prec = b.prec = 30;
    // same truncation on both sides; the sums then agree term by term
    a.policy.fixed_cutoff = b.policy.fixed_cutoff = true;
    a.policy.all_terms_mpfr = b.policy.all_terms_mpfr = true;
    Real x = rademacher_sum(a).value / 2, y = rademacher_sum(b).value / 5;
    CHECK(abs(x - y) < pow10(-20, x.prec()) * max(Real(1L, x.prec()), abs(x)));
}
