#include "etaq/sunrise.hpp"

#include <cmath>

#include "etaq/qseries.hpp"
#include "etaq/special.hpp"

namespace etaq {

namespace {

const EtaQuotient& eq(const char* s) {
    static std::map<std::string, EtaQuotient> cache;
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, EtaQuotient::parse(s)).first;
    return it->second;
}

// f, f2, f3, f6 of the two-loop parametrization
const char* kF[7] = {nullptr, "1^6 6^1 2^-3 3^-2", "2^6 3^1 1^-3 6^-2", "2^1 3^6 1^-2 6^-3", nullptr, nullptr,
                     "1^1 6^6 2^-2 3^-3"};

long chi3(long n) { return n % 3 == 1 ? 1 : n % 3 == 2 ? -1 : 0; }
long chi6(long n) { return n % 6 == 1 ? 1 : n % 6 == 5 ? -1 : 0; }
long phi6(long n) {
    static const long t[6] = {0, 1, 0, -8, 0, 1};
    return t[((n % 6) + 6) % 6];
}

// principal log of a real nonzero number
Complex log_real(const Real& x) {
    mpfr_prec_t p = x.prec();
    if (x.sign() > 0) return Complex(log(x), Real(p));
    return Complex(log(-x), pi(p));
}

void check_threshold(const Real& v, double at, const char* what) {
    if (std::fabs(v.to_double() - at) < 1e-8)
        throw SunriseError(std::string(what) + " is within 1e-8 of the singular point " + std::to_string(static_cast<int>(at)));
}

}  // namespace

Real clausen_C2(long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 10);
    return 5 * clausen2(pi(b) / 3) / sqrt(Real(27L, b));
}

Real zeta3(long prec) { return zeta_ui(3, bits_for_digits(prec + 10)); }

Complex nome_Q(const Real& x, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real X(x, b);
    if (X == Real(1L, b) || X == Real(-3L, b)) throw SunriseError("Q(x) has a pole of r at x = " + X.str(6));
    Real r = 16 * X / ((X + 3) * pow(X - 1, 3));
    if (r == Real(1L, b)) return Complex(b);  // agm(1, 0) = 0: the cusp itself
    if (r.is_zero()) return Complex(Real(1L, b), Real(b));
    Complex one(Real(1L, b), Real(b));
    Complex a = agm(one, sqrt(Complex(r, Real(b))));
    Complex c = agm(one, sqrt(Complex(1 - r, Real(b))));
    return exp(Complex(-pi(b), Real(b)) * (a / c));
}

CuspChoice cusp_at(const Real& w2in, int k, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real w2(w2in, b);
    CuspChoice c;
    c.k = k;
    c.w2 = w2;
    switch (k) {
    case 1:
        c.wk2 = w2;
        break;
    case 2:
        if (w2 == Real(1L, b)) throw SunriseError("w^2 = 1 is a pole of the k = 2 map");
        c.wk2 = (w2 - 9) / (w2 - 1);
        break;
    case 3:
        if (w2.is_zero()) throw SunriseError("w^2 = 0 is a pole of the k = 3 map");
        c.wk2 = 9 / w2;
        break;
    case 6:
        if (w2 == Real(9L, b)) throw SunriseError("w^2 = 9 is a pole of the k = 6 map");
        c.wk2 = 9 * (w2 - 1) / (w2 - 9);
        break;
    default:
        throw SunriseError("cusp index must be 1, 2, 3 or 6");
    }
    if (!(c.wk2.sign() > 0)) throw SunriseError("w_k^2 = " + c.wk2.str(10) + " is not positive for k = " + std::to_string(k));
    c.wk = sqrt(c.wk2);
    Real s3 = sqrt(Real(3L, b));
    Real slack = pow10(-30, b);
    c.in_range = !(c.wk < s3 - slack) && !(c.wk > s3 + sqrt(Real(6L, b)) + slack);
    Complex q = nome_Q(c.wk, prec);
    if (abs(q.im) > pow10(-prec - 5, b) * max(Real(1L, b), abs(q.re)))
        throw SunriseError("nome for w_k = " + c.wk.str(10) + " is not real");
    c.qk = q.re;
    return c;
}

CuspChoice choose_cusp(const Real& w2in, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real w2(w2in, b);
    Real s = 6 * sqrt(Real(2L, b));
    int k;
    if (!(w2 < -3) && !(w2 > 9 - s))
        k = 2;
    else if (!(w2 < 9 - s) && !(w2 > 3))
        k = 3;
    else if (!(w2 < 3) && !(w2 > 9 + s))
        k = 1;
    else
        k = 6;
    return cusp_at(w2, k, prec);
}

SunriseValue I2_at(const Real& w2in, int k, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real w2(w2in, b);
    check_threshold(w2, 9, "w^2");
    CuspChoice c = cusp_at(w2, k, prec);
    Real q = c.qk;
    Real aq = abs(q);
    if (!(aq < 1.0)) throw SunriseError("nome not inside the unit disc");
    Real eps = pow10(-prec - 10, b);

    SunriseValue out;
    out.cusp = k;
    out.nome = Complex(q, Real(b));
    Complex S(b);
    long n = 0;
    Real acc(0L, b);
    // sum until |q|^n / n^2 is negligible
    Real qn(1L, b);
    auto done = [&](long m) { return aq.is_zero() || abs(qn) / (m * m) < eps; };
    switch (k) {
    case 1: {
        if (q.is_zero()) throw SunriseError("w^2 = 9 is the threshold; the expansion has log(0)");
        for (n = 1;; ++n) {
            qn *= q;
            if (chi6(n)) acc += Real(chi6(n), b) * 2 * qn / ((1 - qn) * (n * n));
            if (done(n)) break;
        }
        Complex lg = log_real(-1 / q);
        S = lg * (pi(b) / sqrt(Real(3L, b)));
        S.re -= 3 * (clausen_C2(prec + 5) + acc);
        break;
    }
    case 2: {
        for (n = 1; !aq.is_zero(); ++n) {
            qn *= q;
            // q^n/(1+q^n): the double integral of g2 = eta1^5 eta3 eta6^4 / eta2^4
            if (chi3(n)) acc += Real(6 * chi3(n), b) * qn / ((1 + qn) * (n * n));
            if (done(n)) break;
        }
        S.re = 12 * clausen_C2(prec + 5) / 5 - acc;
        break;
    }
    case 3: {
        for (n = 1; !aq.is_zero(); ++n) {
            qn *= q;
            if (n % 2) acc += 6 * qn / ((1 + qn + qn * qn) * (n * n));
            if (done(n)) break;
        }
        S.re = pi(b) * pi(b) / 4 - acc;
        break;
    }
    case 6: {
        if (q.is_zero()) throw SunriseError("w^2 = 1 maps to the cusp of the k = 6 expansion");
        for (n = 1;; ++n) {
            qn *= q;
            acc += 6 * qn / ((1 - qn + qn * qn) * (n * n));
            if (done(n)) break;
        }
        Complex lg = log_real(-q);
        S = lg * lg * Real(-3L, b);
        S.re += acc;
        break;
    }
    }
    Complex fk = eval_eta_quotient(eq(kF[k]), out.nome, prec + 5);
    out.value = fk * S;
    out.terms_used = n;
    out.error_estimate = aq.is_zero() ? Real(0L, b) : abs(qn) * aq * 10;
    return out;
}

SunriseValue I2(const Real& w2, long prec) { return I2_at(w2, choose_cusp(w2, prec).k, prec); }

Complex z_of_t(const Real& tin, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real t(tin, b);
    if (t.is_zero()) throw SunriseError("t = 0 is the cusp q = 0 (z = i infinity)");
    Complex T(t, Real(b));
    Complex one(Real(1L, b), Real(b));
    Complex x = Complex(Real(2L, b), Real(b)) / (sqrt(one * 4 - T) + sqrt(one * 16 - T));
    Complex a = sqrt(pow(one - x, 3) * (one + x * 3));
    Complex g1 = x * sqrt(x) * 4;
    Complex g2 = sqrt(pow(one + x, 3) * (one - x * 3));
    if (a.is_zero() || g1.is_zero() || g2.is_zero()) throw SunriseError("degenerate AGM argument at t = " + t.str(10));
    Complex ratio = agm(a, g1) / agm(a, g2);
    // (i/2) ratio
    return Complex(-ratio.im / 2, ratio.re / 2);
}

SunriseValue J3_branch(const Real& tin, int branch, long prec) {
    mpfr_prec_t b = bits_for_digits(prec + 15);
    Real t(tin, b);
    check_threshold(t, 4, "t");
    check_threshold(t, 16, "t");
    Real eps = pow10(-prec - 10, b);
    SunriseValue out;
    out.cusp = branch;
    if (branch == 1) {
        Complex q(b);
        if (!t.is_zero()) {
            Complex z = z_of_t(t, prec);
            q = exp(Complex(Real(b), 2 * pi(b)) * z);
        }
        out.nome = q;
        Real aq = abs(q);
        if (!(aq < 1.0)) throw SunriseError("nome not inside the unit disc");
        Complex acc(b), qn(Real(1L, b), Real(b));
        long n = 0;
        for (n = 1; !aq.is_zero(); ++n) {
            qn *= q;
            if (phi6(n)) acc += qn / (Complex(Real(1L, b), Real(b)) - qn) * Real(phi6(n), b) / Real(n * n * n, b);
            if (abs(qn) / (n * n * n) < eps) break;
        }
        Complex S = acc * Real(24L, b);
        S.re += 7 * zeta3(prec + 5);
        // (w f / 3)^2 = (eta1^2 eta3^2 / (eta2 eta6))^2
        Complex v = eval_eta_quotient(eq("1^4 3^4 2^-2 6^-2"), q, prec + 5);
        out.value = v * S;
        out.terms_used = aq.is_zero() ? 0 : n;
        out.error_estimate = aq.is_zero() ? Real(0L, b) : abs(qn) * 10;
        return out;
    }
    if (branch != 6) throw SunriseError("J3 branch must be 1 or 6");
    if (t.is_zero()) throw SunriseError("t = 0 maps to t6 = infinity");
    Complex z = z_of_t(t, prec);
    Complex z6 = Complex(Real(-1L, b), Real(b)) / (z * Real(6L, b));
    Complex lq = Complex(Real(b), 2 * pi(b)) * z6;  // log q6 on the branch fixed by z6
    Complex q6 = exp(lq);
    out.nome = q6;
    Real aq = abs(q6);
    if (!(aq < 1.0)) throw SunriseError("nome not inside the unit disc");
    Complex acc(b), qn(Real(1L, b), Real(b));
    long n = 0;
    for (n = 1;; ++n) {
        qn *= q6;
        long c = 15 * phi6(n + 3) - phi6(n);
        if (c) acc += qn * Real(2L, b) / (Complex(Real(1L, b), Real(b)) - qn) * Real(c, b) / Real(n * n * n, b);
        if (abs(qn) / (n * n * n) < eps) break;
    }
    acc.re += 2 * zeta3(prec + 5) / 3;  // C3
    Complex S = acc * Real(24L, b) - pow(lq, 3) * Real(4L, b);
    // (w f6(z6))^2 with w written at z6: eta2^4 eta6^4 / (eta1^2 eta3^2)
    Complex v = eval_eta_quotient(eq("2^4 6^4 1^-2 3^-2"), q6, prec + 5);
    out.value = v * S;
    out.terms_used = n;
    out.error_estimate = abs(qn) * 10;
    return out;
}

SunriseValue J3(const Real& t, long prec) {
    bool inner = !(abs(t) > 8.0);
    return J3_branch(t, inner ? 1 : 6, prec);
}

HParamReport verify_H_param(long K, const mpq_class& third) {
    if (K < 20) throw SunriseError("verify_H_param needs K >= 20");
    HParamReport rep;
    rep.order = K;
    long W = K + 2;
    QSeries x2 = quotient_expansion(eq("1^4 6^8 2^-8 3^-4"), W) * mpq_class(9);
    QSeries p3 = x2 + mpq_class(3);
    QSeries u = x2 * pow(x2 - mpq_class(9), 2) * inverse(pow(p3, 3));
    QSeries pref = pow(x2 - mpq_class(1), 2) * inverse(p3 * mpq_class(9));
    // coefficients (4/3)_n (5/3)_n / (n! (n+1)!)
    std::vector<mpq_class> c(static_cast<size_t>(K + 1));
    c[0] = 1;
    for (long n = 0; n < K; ++n)
        c[static_cast<size_t>(n + 1)] = c[static_cast<size_t>(n)] * mpq_class(3 * n + 4, 3) * mpq_class(3 * n + 5, 3) /
                                         mpq_class((n + 1) * (n + 2));
    QSeries acc = QSeries::constant(c[static_cast<size_t>(K)], W);
    for (long n = K - 1; n >= 0; --n) acc = acc * u + c[static_cast<size_t>(n)];
    QSeries lhs = (pref * u * acc).truncated(K);

    QSeries A = quotient_expansion(eq("1^14 6^10 2^-22 3^-2"), W);
    QSeries B = quotient_expansion(eq("1^6 6^4 2^-12 3^-2"), W);
    QSeries C = quotient_expansion(eq("1^4 6^8 2^-8 3^-4"), W);
    QSeries F = quotient_expansion(eq("2^6 3^1 1^-3 6^-2"), W);
    QSeries rhs = ((A * F + B * (C + third) * F.derivative()) * mpq_class(1, 2)).truncated(K);

    for (long e = 0; e < K; ++e) {
        mpq_class l = lhs.coeff_at_exponent24(24 * e), r = rhs.coeff_at_exponent24(24 * e);
        if (l != r) {
            rep.first_mismatch = e;
            rep.lhs_coeff = l;
            rep.rhs_coeff = r;
            return rep;
        }
    }
    rep.pass = true;
    return rep;
}

}  // namespace etaq
