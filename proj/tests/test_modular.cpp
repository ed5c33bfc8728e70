#include <doctest.h>

#include "etaq/expr.hpp"
#include "etaq/modsym.hpp"
#include "etaq/modular.hpp"
#include "etaq/registry.hpp"
#include "etaq/workbench.hpp"

using namespace etaq;

TEST_CASE("genus of X0(N)") {
    std::vector<std::pair<long, long>> g = {{1, 0},  {6, 0},  {11, 1}, {25, 0}, {36, 1},  {50, 2},  {64, 3},
                                            {81, 4}, {72, 5}, {121, 6}, {100, 7}, {169, 8}, {144, 13}, {43, 3}};
    for (auto [N, want] : g) CHECK(genus0(N) == want);
    LevelData d = level_data(6);
    CHECK(d.index == 12);
    CHECK(d.cusps == 4);
}

TEST_CASE("curve coefficients for 11a") {
    EllipticCurve E{0, -1, 1, -10, -20};
    auto a = curve_an(E, 13);
    CHECK(a[0] == 1);
    CHECK(a[1] == -2);
    CHECK(a[2] == -1);
    CHECK(a[3] == 2);  // a4 = a2^2 - 2
    CHECK(a[4] == 1);
    CHECK(a[6] == -2);
    CHECK(a[10] == 1);
    CHECK(a[12] == 4);
    CHECK(E.discriminant() == -161051);
}

TEST_CASE("cusp form of level 11 from eta and from the curve") {
    QSeries f = quotient_expansion(EtaQuotient::parse("1^2 11^2"), 200);
    auto a = curve_an(EllipticCurve{0, -1, 1, -10, -20}, 199);
    for (long n = 1; n < 200; ++n) CHECK(f.coeff_at_exponent24(24 * n) == a[n - 1]);
}

TEST_CASE("orders at cusps") {
    auto o = eta_cusp_orders(EtaQuotient::parse("2^1 6^5 1^-5 3^-1"), 6);
    // zero at infinity, the single pole at the cusp 0
    for (const auto& c : o) CHECK(c.order == (c.c == 6 ? 1 : c.c == 1 ? -1 : 0));
    auto u = eta_cusp_orders(EtaQuotient(), 6);
    for (const auto& c : u) CHECK(c.order == 0);
    auto p = eta_cusp_orders(EtaQuotient::parse("25^1 1^-1"), 25);
    for (const auto& c : p) {
        if (c.c == 1) CHECK(c.order == -1);
        if (c.c == 25) CHECK(c.order == 1);
    }
    CHECK_THROWS(eta_cusp_orders(EtaQuotient::parse("7^1 1^-1"), 6));
}

TEST_CASE("enumeration matches small tallies") {
    CHECK(enumerate_quotients(21, 0).size() == 1);
    CHECK(enumerate_quotients(21, 4).size() == 6);
}

TEST_CASE("parity of the level-6 Hauptmodul") {
    CHECK(hauptmodul_parity(1));
    CHECK(hauptmodul_parity(4));
    CHECK_FALSE(hauptmodul_parity(5));
    CHECK(squarefree_part(72) == 2);
    QSeries h = quotient_expansion(EtaQuotient::parse("2^1 6^5 1^-5 3^-1"), 500);
    for (long n = 1; n < 500; ++n)
        CHECK((mpz_odd_p(h.coeff_at_exponent24(24 * n).get_num_mpz_t()) != 0) == hauptmodul_parity(n));
}

TEST_CASE("cusp form basis dimension equals the genus") {
    for (long N : {11L, 22L, 37L, 43L, 64L}) {
        CuspFormBasis b = cusp_form_basis(N, 60);
        CHECK(static_cast<long>(b.pivots.size()) == genus0(N));
    }
}

TEST_CASE("expressions") {
    SeriesContext ctx;
    QSeries s = eval_expression("eta(2)*eta(6)^5/(eta(1)^5*eta(3))", 10, ctx);
    CHECK(coefficient_at(s, 2) == 5);
    QSeries z = eval_expression("h := eta(3)^9/eta(1)^3 + eta(6)^9/eta(2)^3; h = eta(2)^5*eta(3)^4*eta(6)/eta(1)^4", 100, ctx);
    CHECK(z.is_zero());
    QSeries t = eval_expression("(1-x^11)/((1-x)*(1-x^2))", 6, ctx);
    CHECK(coefficient_at(t, 4) == 3);
    CHECK_THROWS(eval_expression("eta(2", 10, ctx));
    CHECK(scan_expression("G(11,2)+1").numeric());
    CHECK_FALSE(scan_expression("eta(11)").numeric());
}

TEST_CASE("registry loading and errors") {
    Registry r = Registry::load(Registry::resolve_path());
    CHECK(r.level(6));
    CHECK(r.curve("N64"));
    CHECK(r.identity("r49"));
    CHECK_FALSE(r.curve("nope"));
    CHECK_THROWS_AS(Registry::parse("{not json"), RegistryError);
}

TEST_CASE("workbench on small cases") {
    Workbench wb(Registry::load(Registry::resolve_path()));
    CHECK(wb.tally(21, 50) == 2938);
    CHECK(wb.tally(21, 100) == 22126);
    auto t = wb.tally_series(36, 200);
    for (long M = 0; M <= 200; ++M) CHECK(tally36_closed_form(M) == mpq_class(t[static_cast<size_t>(M)]));
    CHECK(wb.verify_identity(*wb.registry().identity("r49"), 200).pass);
    CHECK(wb.verify_curve(*wb.registry().curve("N64"), 300).pass);
    VerifyReport bad = wb.verify_identity("eta(1)^24 = eta(1)^24 + q^7", 20);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.first_mismatch);
    CHECK(*bad.first_mismatch == 7);
    auto g = wb.subtracted_series(11, 5, 10);
    CHECK(g.size() == 10);
}
