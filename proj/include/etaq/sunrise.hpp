#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "etaq/mp.hpp"

namespace etaq {

struct SunriseError : std::domain_error {
    using std::domain_error::domain_error;
};

// Q(x) = exp(-pi agm(1, sqrt r) / agm(1, sqrt(1-r))), r = 16x / ((x+3)(x-1)^3)
Complex nome_Q(const Real& x, long prec);

struct CuspChoice {
    int k = 1;     // 1, 2, 3 or 6
    Real w2;       // input
    Real wk2;      // transformed w^2
    Real wk;       // sqrt(wk2) > 0
    Real qk;       // Q(wk), real
    bool in_range = true;  // wk within [sqrt 3, sqrt 3 + sqrt 6]
};

// the nearest cusp for w^2
CuspChoice choose_cusp(const Real& w2, long prec);
// a given cusp, even away from its own interval
CuspChoice cusp_at(const Real& w2, int k, long prec);

struct SunriseValue {
    Complex value;
    int cusp = 0;  // 1, 2, 3, 6 for I2; 1 (q) or 6 (q6) for J3
    long terms_used = 0;
    Real error_estimate;
    Complex nome;
};

// I(w^2) = 4 int_0^inf I0(w x) K0(x)^3 x dx, continued past w^2 = 9 via the principal log
SunriseValue I2(const Real& w2, long prec);
SunriseValue I2_at(const Real& w2, int k, long prec);

// z with q = exp(2 pi i z) and t = -64 (eta2 eta6 / (eta1 eta3))^6
Complex z_of_t(const Real& t, long prec);

// J(t) = 8 int_0^inf I0(sqrt t x) K0(x)^4 x dx
SunriseValue J3(const Real& t, long prec);
// branch 1: expansion in q (|t| <= 8 preferred); branch 6: expansion in q6 after z -> -1/(6z)
SunriseValue J3_branch(const Real& t, int branch, long prec);

Real clausen_C2(long prec);  // 5 Cl2(pi/3) / sqrt 27
Real zeta3(long prec);

struct HParamReport {
    bool pass = false;
    long order = 0;
    std::optional<long> first_mismatch;
    mpq_class lhs_coeff = 0, rhs_coeff = 0;
};
// H(3 eta1^2 eta6^4/(eta2^4 eta3^2)) against the eta-quotient side through q^(K-1)
HParamReport verify_H_param(long K, const mpq_class& third = mpq_class(1, 3));

}  // namespace etaq
