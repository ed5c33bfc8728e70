#include "etaq/special.hpp"

#include <cmath>
#include <stdexcept>

namespace etaq {

Real zeta_ui(unsigned long s, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_zeta_ui(r.get(), s, MPFR_RNDN);
    return r;
}

Real gamma_fn(const Real& x) {
    Real r(x.prec());
    mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real clausen2(const Real& theta) {
    // Cl2(t) = t - t log t + sum_k zeta(2k) t^(2k+1) / (k (2k+1) (2 pi)^(2k)), 0 < t < 2 pi
    mpfr_prec_t p = theta.prec() + 32;
    Real t(theta, p);
    if (!(t.sign() > 0) || !(t < 2 * pi(p))) throw std::domain_error("clausen2 argument outside (0, 2 pi)");
    Real r = t - t * log(t);
    Real x = t / (2 * pi(p));
    Real x2 = x * x;
    Real pw = t * x2;
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        Real term = zeta_ui(static_cast<unsigned long>(2 * k), p) * pw / (k * (2 * k + 1));
        r += term;
        if (abs(term) < eps * abs(r)) break;
        pw *= x2;
    }
    return Real(r, theta.prec());
}

Real gamma_upper_int(long s, const Real& x) {
    if (s < 1) throw std::domain_error("gamma_upper_int needs s >= 1");
    // (s-1)! e^-x sum_{k<s} x^k / k!
    mpfr_prec_t p = x.prec();
    Real sum(0L, p), term(1L, p);
    for (long k = 0; k < s; ++k) {
        if (k > 0) {
            term *= x;
            term /= k;
        }
        sum += term;
    }
    Real fact(1L, p);
    for (long k = 2; k < s; ++k) fact *= k;
    return fact * exp(-x) * sum;
}

Real agm(const Real& a0, const Real& b0) {
    mpfr_prec_t p = pmax(a0, b0);
    Real r(p);
    mpfr_agm(r.get(), a0.get(), b0.get(), MPFR_RNDN);
    return r;
}

Complex agm(const Complex& a0, const Complex& b0) {
    mpfr_prec_t p = a0.prec() > b0.prec() ? a0.prec() : b0.prec();
    Complex a = a0, b = b0;
    if (a.is_zero() || b.is_zero()) throw std::domain_error("agm with a zero argument");
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p) + 4);
    for (int it = 0; it < 10000; ++it) {
        Complex an = (a + b) * Real(0.5, p);
        Complex g = sqrt(a * b);
        if (norm(an - g) > norm(an + g)) g = -g;
        a = std::move(an);
        b = std::move(g);
        if (abs(a - b) <= eps * abs(a)) return (a + b) * Real(0.5, p);
    }
    throw std::runtime_error("complex agm did not converge");
}

double bessel_crossover(mpfr_prec_t bits) {
    // asymptotic expansions reach relative error ~ e^(-2x)
    return 0.7 * static_cast<double>(bits) * 0.6931471805599453 + 12.0;
}

Real bessel_i0_series(const Real& x) {
    mpfr_prec_t p = x.prec() + 32;
    Real y(x, p);
    Real z = y * y / 4;
    Real term(1L, p), sum(1L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= z;
        term /= k * k;
        sum += term;
        if (term < eps * sum) break;
    }
    return Real(sum, x.prec());
}

Real bessel_i1_series(const Real& x) {
    mpfr_prec_t p = x.prec() + 32;
    Real y(x, p);
    Real z = y * y / 4;
    Real term(1L, p), sum(1L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= z;
        term /= k * (k + 1);
        sum += term;
        if (term < eps * sum) break;
    }
    return Real(sum * y / 2, x.prec());
}

namespace {

// sum_k a_k(nu) s^k / x^k with a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k)
Real hankel_sum(const Real& x, long nu, int s) {
    mpfr_prec_t p = x.prec();
    Real sum(1L, p), term(1L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    Real prev_abs = abs(term);
    for (long k = 1; k < 100000; ++k) {
        long m = 4 * nu * nu - (2 * k - 1) * (2 * k - 1);
        term *= m;
        term /= 8 * k;
        term /= x;
        if (s < 0) term = -term;
        Real at = abs(term);
        if (at > prev_abs) throw std::runtime_error("asymptotic bessel series used below its range");
        sum += term;
        if (at < eps * abs(sum)) return sum;
        prev_abs = at;
    }
    throw std::runtime_error("asymptotic bessel series did not converge");
}

}  // namespace

Real bessel_i0_asymptotic(const Real& x) {
    mpfr_prec_t p = x.prec() + 32;
    Real y(x, p);
    Real r = exp(y) / sqrt(2 * pi(p) * y) * hankel_sum(y, 0, -1);
    return Real(r, x.prec());
}

Real bessel_i1_asymptotic(const Real& x) {
    mpfr_prec_t p = x.prec() + 32;
    Real y(x, p);
    Real r = exp(y) / sqrt(2 * pi(p) * y) * hankel_sum(y, 1, -1);
    return Real(r, x.prec());
}

Real bessel_k0_asymptotic(const Real& x) {
    mpfr_prec_t p = x.prec() + 32;
    Real y(x, p);
    Real r = sqrt(pi(p) / (2 * y)) * exp(-y) * hankel_sum(y, 0, +1);
    return Real(r, x.prec());
}

Real bessel_k0_series(const Real& x) {
    // K0 = -(log(x/2) + gamma) I0 + sum (x^2/4)^k / (k!)^2 H_k ; cancellation of about 2x/ln 2 bits
    double xd = x.to_double();
    mpfr_prec_t extra = static_cast<mpfr_prec_t>(2.0 * std::fabs(xd) / 0.6931471805599453) + 40;
    mpfr_prec_t p = x.prec() + extra;
    Real y(x, p);
    Real z = y * y / 4;
    Real term(1L, p), i0(1L, p), hs(0L, p), h(0L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= z;
        term /= k * k;
        h += Real(1L, p) / k;
        i0 += term;
        Real t = term * h;
        hs += t;
        if (t < eps * hs && term < eps * i0) break;
    }
    Real r = hs - (log(y / 2) + euler_gamma(p)) * i0;
    return Real(r, x.prec());
}

Real bessel_i0(const Real& x) {
    Real ax = abs(x);
    if (ax.to_double() > bessel_crossover(x.prec())) return bessel_i0_asymptotic(ax);
    return bessel_i0_series(ax);
}

Real bessel_i1(const Real& x) {
    Real ax = abs(x);
    Real r = ax.to_double() > bessel_crossover(x.prec()) ? bessel_i1_asymptotic(ax) : bessel_i1_series(ax);
    return x.sign() < 0 ? -r : r;
}

Real bessel_k0(const Real& x) {
    if (!(x.sign() > 0)) throw std::domain_error("K0 needs x > 0");
    if (x.to_double() > bessel_crossover(x.prec())) return bessel_k0_asymptotic(x);
    return bessel_k0_series(x);
}

void bessel_i0_k0(const Real& x, Real& i0, Real& k0) {
    if (!(x.sign() > 0)) throw std::domain_error("K0 needs x > 0");
    if (x.to_double() > bessel_crossover(x.prec())) {
        i0 = bessel_i0_asymptotic(x);
        k0 = bessel_k0_asymptotic(x);
        return;
    }
    double xd = x.to_double();
    mpfr_prec_t extra = static_cast<mpfr_prec_t>(2.0 * xd / 0.6931471805599453) + 40;
    mpfr_prec_t p = x.prec() + extra;
    Real y(x, p);
    Real z = y * y / 4;
    Real term(1L, p), s0(1L, p), hs(0L, p), h(0L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= z;
        term /= k * k;
        h += Real(1L, p) / k;
        s0 += term;
        Real t = term * h;
        hs += t;
        if (t < eps * hs && term < eps * s0) break;
    }
    k0 = Real(hs - (log(y / 2) + euler_gamma(p)) * s0, x.prec());
    i0 = Real(s0, x.prec());
}

Complex bessel_i0(const Complex& z) {
    double m = abs(z).to_double();
    mpfr_prec_t p = z.prec() + static_cast<mpfr_prec_t>(2.0 * m / 0.6931471805599453) + 40;
    Complex y(Real(z.re, p), Real(z.im, p));
    Complex w = y * y * Real(0.25, p);
    Complex term(1L, 0L, p), sum(1L, 0L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= w;
        term /= Real(k * k, p);
        sum += term;
        if (abs(term) < eps && k > 2 * m) break;
    }
    mpfr_prec_t q = z.prec();
    return Complex(Real(sum.re, q), Real(sum.im, q));
}

Complex bessel_k0(const Complex& z) {
    double m = abs(z).to_double();
    mpfr_prec_t p = z.prec() + static_cast<mpfr_prec_t>(2.0 * m / 0.6931471805599453) + 40;
    Complex y(Real(z.re, p), Real(z.im, p));
    Complex w = y * y * Real(0.25, p);
    Complex term(1L, 0L, p), s0(1L, 0L, p), hs(p);
    Real h(0L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1;; ++k) {
        term *= w;
        term /= Real(k * k, p);
        h += Real(1L, p) / k;
        s0 += term;
        Complex t = term * h;
        hs += t;
        if (abs(t) < eps && k > 2 * m) break;
    }
    Complex l = log(y * Real(0.5, p)) + euler_gamma(p);
    Complex r = hs - l * s0;
    mpfr_prec_t q = z.prec();
    return Complex(Real(r.re, q), Real(r.im, q));
}

namespace {

template <class V, class F, class Zero, class Mag>
void tanh_sinh_core(const F& f, const Real& a, const Real& b, mpfr_prec_t bits, int max_level, int min_level,
                    const Zero& zero, const Mag& mag, V& out, Real& err, int& level_out, long& evals) {
    mpfr_prec_t p = bits + 20;
    Real A(a, p), B(b, p);
    Real half = (B - A) / 2;
    Real mid = (A + B) / 2;
    Real pi2 = pi(p) / 2;
    Real eps = ldexp(Real(1L, p), -static_cast<long>(bits) - 10);
    Real h(1L, p);
    V total = zero();
    V prev = zero();
    bool have_prev = false;
    evals = 0;

    auto node = [&](const Real& u, V& acc) -> bool {
        // returns false once contributions are negligible
        Real v = pi2 * sinh(u);
        Real cv = cosh(v);
        Real w = pi2 * cosh(u) / (cv * cv);
        Real ev = exp(-2 * abs(v));
        Real d = 2 * ev / (1 + ev);  // 1 - |t|
        if (d.is_zero()) return false;
        Real off = half * d;
        Real x = v.sign() >= 0 ? B - off : A + off;
        if (!(x > A) || !(x < B)) return false;
        V fx = f(x);
        ++evals;
        V c = fx * (w * half);
        acc += c;
        return !(mag(c) < eps * (1 + mag(acc)) && w < eps);
    };

    // level 0: u = k h with h = 1
    {
        V s = zero();
        node(Real(0L, p), s);
        for (long k = 1; k < 100000; ++k) {
            Real u(k, p);
            bool go1 = node(u, s);
            bool go2 = node(-u, s);
            if (!go1 && !go2) break;
        }
        total = s;
    }
    int level = 0;
    for (level = 1; level <= max_level; ++level) {
        h /= 2;
        V s = zero();
        for (long k = 1; k < 100000000; k += 2) {
            Real u = h * k;
            bool go1 = node(u, s);
            bool go2 = node(-u, s);
            if (!go1 && !go2) break;
        }
        prev = total * h * 2;
        total += s;
        V cur = total * h;
        Real diff = mag(cur - prev);
        have_prev = true;
        if (level >= min_level && diff < eps * (1 + mag(cur)) * 16) {
            out = cur;
            err = diff;
            level_out = level;
            return;
        }
        out = cur;
        err = diff;
    }
    level_out = max_level;
    (void)have_prev;
}

}  // namespace

QuadResult tanh_sinh(const Integrand& f, const Real& a, const Real& b, mpfr_prec_t bits, int max_level,
                     int min_level) {
    QuadResult r;
    mpfr_prec_t p = bits + 20;
    auto zero = [p]() { return Real(0L, p); };
    auto mag = [](const Real& v) { return abs(v); };
    tanh_sinh_core<Real>(f, a, b, bits, max_level, min_level, zero, mag, r.value, r.error, r.level, r.evaluations);
    r.value = Real(r.value, bits);
    return r;
}

CQuadResult tanh_sinh_c(const CIntegrand& f, const Real& a, const Real& b, mpfr_prec_t bits, int max_level,
                        int min_level) {
    CQuadResult r;
    mpfr_prec_t p = bits + 20;
    auto zero = [p]() { return Complex(p); };
    auto mag = [](const Complex& v) { return abs(v); };
    long ev = 0;
    tanh_sinh_core<Complex>(f, a, b, bits, max_level, min_level, zero, mag, r.value, r.error, r.level, ev);
    return r;
}

}  // namespace etaq
