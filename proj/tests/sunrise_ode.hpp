#pragma once

// Continuation of the two-loop sunrise past w^2 = 9 by the equal-mass ODE
//   t(t-1)(t-9) I'' + (3t^2-20t+9) I' + (t-3) I = -6,
// seeded from Bessel quadrature below threshold. Used only as a test oracle.

#include <algorithm>
#include <cmath>
#include <vector>

#include "etaq/eichler.hpp"
#include "etaq/mp.hpp"

namespace oracle {

using etaq::Complex;
using etaq::Real;

struct Seed {
    Real t, value, slope;
};

// I and I' at t0 from quadrature, 7-point stencil
inline Seed sunrise_seed(double t0d, long prec) {
    mpfr_prec_t b = etaq::bits_for_digits(prec + 10);
    Real t0(t0d, b), h(1e-5, b);
    Real f[7];
    for (int k = -3; k <= 3; ++k) f[k + 3] = 4 * etaq::bessel_moment_t(t0 + h * k, {1, 3, 1}, prec);
    Real d1 = ((f[6] - f[0]) - 9 * (f[5] - f[1]) + 45 * (f[4] - f[2])) / (60 * h);
    return {t0, f[3], d1};
}

// one Taylor step from t0 by s, returns (I, I') at t0+s
inline void taylor_step(const Complex& t0, const Complex& s, Complex& y, Complex& dy, const Real& eps) {
    mpfr_prec_t b = y.prec();
    Complex one(1L, 0L, b);
    Complex p[4] = {t0 * t0 * t0 - t0 * t0 * 10 + t0 * 9, t0 * t0 * 3 - t0 * 20 + one * 9, t0 * 3 - one * 10, one};
    Complex q[3] = {t0 * t0 * 3 - t0 * 20 + one * 9, t0 * 6 - one * 20, one * 3};
    Complex r[2] = {t0 - one * 3, one};
    std::vector<Complex> a{y, dy};
    auto at = [&](long m) { return m < 0 ? Complex(b) : a[m]; };
    Complex sum = y + dy * s, dsum = dy;
    Complex sp = s;  // s^(n+1)
    Real as = etaq::sqrt(s.re * s.re + s.im * s.im);
    for (long n = 0;; ++n) {
        Complex acc(b);
        if (n == 0) acc.re = Real(-6L, b);
        for (long j = 1; j <= 3; ++j) acc -= p[j] * at(n - j + 2) * Real((n - j + 2) * (n - j + 1), b);
        for (long j = 0; j <= 2; ++j) acc -= q[j] * at(n - j + 1) * Real(n - j + 1, b);
        for (long j = 0; j <= 1; ++j) acc -= r[j] * at(n - j);
        Complex next = acc / (p[0] * Real((n + 2) * (n + 1), b));
        a.push_back(next);
        dsum += next * sp * Real(n + 2, b);
        sp *= s;
        Complex term = next * sp;
        sum += term;
        Real mag = etaq::sqrt(term.re * term.re + term.im * term.im) * (n + 3);
        if (n > 8 && mag < eps) break;
        if (n > 4000) break;
    }
    y = sum;
    dy = dsum;
}

// integrate along straight segments through the given points
inline Complex sunrise_continue(const Seed& seed, const std::vector<Complex>& path, long prec) {
    mpfr_prec_t b = etaq::bits_for_digits(prec + 10);
    Real eps = etaq::pow10(-prec - 5, b);
    Complex t(Real(seed.t, b), Real(b));
    Complex y(Real(seed.value, b), Real(b)), dy(Real(seed.slope, b), Real(b));
    const double sing[3] = {0.0, 1.0, 9.0};
    for (const Complex& target : path) {
        for (;;) {
            Complex d = target - t;
            double len = etaq::sqrt(d.re * d.re + d.im * d.im).to_double();
            if (len < 1e-30) break;
            double room = 1e300;
            for (double z : sing) {
                double dx = t.re.to_double() - z, dyy = t.im.to_double();
                room = std::min(room, std::sqrt(dx * dx + dyy * dyy));
            }
            double step = std::min(len, room / 3);
            Complex s = d;
            if (step < len) s *= Real(step / len, b);
            taylor_step(t, s, y, dy, eps);
            t += s;
        }
    }
    return y;
}

}  // namespace oracle
