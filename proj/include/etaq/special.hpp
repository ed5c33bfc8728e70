#pragma once

#include <functional>
#include <vector>

#include "etaq/mp.hpp"

namespace etaq {

Real zeta_ui(unsigned long s, mpfr_prec_t bits);
Real gamma_fn(const Real& x);
// Clausen Cl2(theta) for 0 < theta < 2 pi
Real clausen2(const Real& theta);
// upper incomplete gamma for positive integer s
Real gamma_upper_int(long s, const Real& x);

Real agm(const Real& a, const Real& b);
// complex AGM taking at each step the root closer to the arithmetic mean
Complex agm(const Complex& a, const Complex& b);

Real bessel_i0(const Real& x);
Real bessel_i1(const Real& x);
Real bessel_k0(const Real& x);
void bessel_i0_k0(const Real& x, Real& i0, Real& k0);
// argument above which the large-x expansions are used at the given precision
double bessel_crossover(mpfr_prec_t bits);
Real bessel_i0_series(const Real& x);
Real bessel_i0_asymptotic(const Real& x);
Real bessel_i1_series(const Real& x);
Real bessel_i1_asymptotic(const Real& x);
Real bessel_k0_series(const Real& x);
Real bessel_k0_asymptotic(const Real& x);

Complex bessel_i0(const Complex& z);
// principal branch, |arg z| < pi
Complex bessel_k0(const Complex& z);

struct QuadResult {
    Real value;
    Real error;  // difference between the last two levels
    int level = 0;
    long evaluations = 0;
};

// tanh-sinh on [a,b]; f receives x and the distance of x from the nearer endpoint
// (accurate near the ends), plus which end (-1 left, +1 right)
using Integrand = std::function<Real(const Real& x)>;
QuadResult tanh_sinh(const Integrand& f, const Real& a, const Real& b, mpfr_prec_t bits, int max_level = 12,
                     int min_level = 3);

using CIntegrand = std::function<Complex(const Real& x)>;
struct CQuadResult {
    Complex value;
    Real error;
    int level = 0;
};
CQuadResult tanh_sinh_c(const CIntegrand& f, const Real& a, const Real& b, mpfr_prec_t bits, int max_level = 12,
                        int min_level = 3);

}  // namespace etaq
