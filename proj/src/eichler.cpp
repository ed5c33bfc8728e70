#include "etaq/eichler.hpp"

#include <cmath>

#include "etaq/special.hpp"

namespace etaq {

namespace {


// I0(sqrt(t) x) from its everywhere-convergent series when t < 0
Real i0_scaled(const Real& t, const Real& x, mpfr_prec_t bits) {
    if (t.is_zero()) return Real(1L, bits);
    if (t.sign() > 0) return bessel_i0(Real(sqrt(Real(t, bits)) * Real(x, bits), bits));
    // alternating: lose about sqrt(|t|) x / ln 2 bits to cancellation
    double loss = std::sqrt(-t.to_double()) * x.to_double() * 1.4426950408889634;
    mpfr_prec_t p = bits + static_cast<mpfr_prec_t>(loss) + 32;
    Real u = Real(t, p) * Real(x, p) * Real(x, p) / 4;
    Real term(1L, p), sum(1L, p);
    Real eps = ldexp(Real(1L, p), -static_cast<long>(p));
    for (long k = 1; k < 1000000; ++k) {
        term *= u;
        term /= k * k;
        sum += term;
        if (abs(term) < eps && Real(k * k, p) > abs(u)) break;
    }
    return Real(sum, bits);
}

// Gamma(s, x) for integer s, x > 0
Real gamma_upper(long s, const Real& x) {
    if (s >= 1) return gamma_upper_int(s, x);
    mpfr_prec_t p = x.prec();
    Real e1(p);
    mpfr_eint(e1.get(), (-x).get(), MPFR_RNDN);  // Ei(-x) = -E1(x)
    Real g = -e1;                                   // Gamma(0, x)
    // Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s, downward
    for (long k = -1; k >= s; --k) g = (g - pow(x, k) * exp(-x)) / k;
    return g;
}

Real factorial_r(long n, mpfr_prec_t p) {
    Real r(1L, p);
    for (long k = 2; k <= n; ++k) r *= k;
    return r;
}

CheckLine line(const std::string& name, const Real& lhs, const Real& rhs, long prec, bool conj = false) {
    CheckLine l;
    l.name = name;
    l.lhs = lhs;
    l.rhs = rhs;
    Real scale = max(abs(lhs), abs(rhs));
    l.residual = abs(lhs - rhs);
    if (scale > 1.0) l.residual /= scale;
    l.pass = l.residual < pow10(-prec + 5, lhs.prec());
    l.conjectural = conj;
    return l;
}

long legendre(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

}  // namespace

std::string moment_divergence(const BesselMomentSpec& m, double t) {
    if (m.a < 0 || m.b < 0 || m.c < 0) return "a, b and c must be nonnegative";
    if (m.b == 0) return "no K0 factor: the integrand does not decay";
    double grow = t > 0 ? m.a * std::sqrt(t) : 0.0;
    if (grow > m.b) return "I0 growth beats K0 decay at infinity";
    if (grow == m.b) {
        // (I0 K0)^a x^c ~ x^(c-a) / 2^a, only at t = 1
        if (t != 1.0) return "borderline growth at infinity";
        if (m.c - m.a >= -1) return "integrand decays like x^" + std::to_string(m.c - m.a) + " at infinity";
    }
    return "";
}

Real bessel_moment_t(const Real& t, const BesselMomentSpec& m, long prec) {
    double td = t.to_double();
    if (auto why = moment_divergence(m, td); !why.empty())
        throw EichlerError("M(" + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c) +
                           ") diverges: " + why);
    mpfr_prec_t bits = bits_for_digits(prec + 12);
    bool unit = t == Real(1L, 64);
    double grow = td > 0 ? m.a * std::sqrt(td) : 0.0;
    bool algebraic = grow == static_cast<double>(m.b);

    auto f = [&](const Real& x) {
        Real xx(x, bits);
        Real i0(bits), k0(bits);
        if (unit && m.a > 0) {
            bessel_i0_k0(xx, i0, k0);
        } else {
            k0 = bessel_k0(xx);
            if (m.a > 0) i0 = i0_scaled(t, xx, bits);
        }
        Real v = pow(k0, m.b);
        if (m.a > 0) v *= pow(i0, m.a);
        if (m.c > 0) v *= pow(xx, m.c);
        return v;
    };

    // end of the numerical range
    double target = (prec + 15) * 2.302585092994046;
    double X;
    if (algebraic) {
        X = 1.2 * (prec + 12) + 20;
    } else {
        double rate = m.b - grow;
        X = 2;
        while (rate * X - (m.c - 0.5 * (m.b + (td > 0 ? m.a : 0))) * std::log(X) < target) X *= 1.25;
    }
    double wmax = td < 0 ? std::max(0.5, 2.0 / std::sqrt(-td)) : 8.0;

    Real total(0L, bits);
    total += tanh_sinh(f, Real(0L, bits), Real(1L, bits), bits, 14).value;
    double a = 1;
    while (a < X) {
        double b = std::min(X, a + std::min(a, wmax));
        total += tanh_sinh(f, Real(a, bits), Real(b, bits), bits, 14).value;
        a = b;
    }

    if (algebraic) {
        // I0 K0 ~ (1/2x) sum_k alpha_k x^(-2k), alpha_k = ((2k-1)!!)^3 / ((2k)!! 4^k)
        long A = m.a;
        Real Xr(X, bits);
        long kmax = static_cast<long>(X);
        std::vector<Real> alpha(static_cast<size_t>(kmax + 1), Real(0L, bits));
        alpha[0] = Real(1L, bits);
        for (long k = 1; k <= kmax; ++k) {
            Real r = alpha[static_cast<size_t>(k - 1)];
            r *= (2 * k - 1) * (2 * k - 1);
            r *= 2 * k - 1;
            r /= 2 * k;
            r /= 4;
            alpha[static_cast<size_t>(k)] = r;
        }
        std::vector<Real> beta = alpha;
        for (long j = 1; j < A; ++j) {
            std::vector<Real> nb(static_cast<size_t>(kmax + 1), Real(0L, bits));
            for (long i = 0; i <= kmax; ++i)
                for (long k = 0; i + k <= kmax; ++k)
                    nb[static_cast<size_t>(i + k)] += beta[static_cast<size_t>(i)] * alpha[static_cast<size_t>(k)];
            beta = std::move(nb);
        }
        Real tail(0L, bits), last(1e300, bits);
        for (long k = 0; k <= kmax; ++k) {
            long e = m.c - A - 2 * k + 1;  // exponent after integration
            Real term = beta[static_cast<size_t>(k)] * pow(Xr, e) / (-e);
            if (abs(term) > last) break;
            last = abs(term);
            tail += term;
        }
        total += ldexp(tail, -A);
    }
    return Real(total, bits_for_digits(prec + 5));
}

Real bessel_moment(const BesselMomentSpec& m, long prec) { return bessel_moment_t(Real(1L, 64), m, prec); }

const std::vector<LSeriesForm>& lseries_forms() {
    static const std::vector<LSeriesForm> forms = {
        {"L5", 3, 15, {EtaQuotient({{3, 3}, {5, 3}}), EtaQuotient({{1, 3}, {15, 3}})}, -1, 1},
        {"L6", 4, 6, {EtaQuotient({{1, 2}, {2, 2}, {3, 2}, {6, 2}})}, 1, 1},
        {"L8", 6, 6, {EtaQuotient({{2, 9}, {3, 9}, {1, -3}, {6, -3}}), EtaQuotient({{1, 9}, {6, 9}, {2, -3}, {3, -3}})}, -1, 1},
    };
    return forms;
}

const LSeriesForm& lseries_form(const std::string& name) {
    for (const auto& f : lseries_forms())
        if (f.name == name) return f;
    throw EichlerError("unknown form '" + name + "' (expected L5, L6 or L8)");
}

QSeries lseries_form_series(const LSeriesForm& f, long K) {
    QSeries s = QSeries::zero(K);
    for (const auto& e : f.terms) s = s + quotient_expansion(e, K);
    return s;
}

Real form_on_axis(const LSeriesForm& f, const Real& y, long prec) {
    mpfr_prec_t bits = bits_for_digits(prec + 10);
    Real q = exp(-2 * pi(bits) * Real(y, bits));
    Complex qc(q, Real(bits));
    Real v(0L, bits);
    for (const auto& e : f.terms) v += eval_eta_quotient(e, qc, prec + 5).re;
    return v;
}

Real fricke_residual(const LSeriesForm& f, const Real& y, long prec) {
    mpfr_prec_t bits = bits_for_digits(prec + 10);
    Real Y(y, bits);
    Real N(f.level, bits);
    Real lhs = form_on_axis(f, 1 / (N * Y), prec);
    Real rhs = form_on_axis(f, Y, prec) * pow(N, Real(f.weight, bits) / 2) * pow(Y, f.weight) * f.fricke;
    Real scale = max(abs(lhs), abs(rhs));
    Real d = abs(lhs - rhs);
    return scale.is_zero() ? d : d / scale;
}

Real lseries_value(const LSeriesForm& f, long s, long prec) {
    mpfr_prec_t bits = bits_for_digits(prec + 15);
    return lseries_value(f, s, prec, 1 / sqrt(Real(f.level, bits)));
}

Real lseries_value(const LSeriesForm& f, long s, long prec, const Real& y0in) {
    if (s < 1) throw EichlerError("lseries_value needs s >= 1");
    mpfr_prec_t bits = bits_for_digits(prec + 15);
    Real y0(y0in, bits);
    Real N(f.level, bits);
    // both halves: y0 and 1/(N y0)
    Real y1 = 1 / (N * y0);
    Real ymin = min(y0, y1);
    double rate = 2 * M_PI * ymin.to_double();
    long nmax = static_cast<long>((prec + 20) * 2.302585092994046 / rate) + 10 * f.weight + 20;
    QSeries A = lseries_form_series(f, nmax + 1);
    Real tp = 2 * pi(bits);
    Real first(0L, bits), second(0L, bits);
    long k = f.weight;
    for (long n = 1; n <= nmax; ++n) {
        mpq_class a = A.coeff_at_exponent24(24 * n);
        if (a == 0) continue;
        Real an(a, bits);
        Real x = tp * n;
        first += an * gamma_upper(s, x * y0) / pow(x, s);
        second += an * gamma_upper(k - s, x * y1) / pow(x, k - s);
    }
    // int_0^y0 f(iy) y^(s-1) dy = fricke N^(k/2-s) int_{1/(N y0)}^inf f(iu) u^(k-s-1) du
    Real fac = pow(N, Real(k - 2 * s, bits) / 2) * f.fricke;
    Real integral = first + fac * second;
    return Real(pow(tp, s) / factorial_r(s - 1, bits) * integral, bits_for_digits(prec + 5));
}

Real lseries_euler_product(const LSeriesForm& f, long s, long pmax, long prec) {
    mpfr_prec_t bits = bits_for_digits(prec + 10);
    QSeries A = lseries_form_series(f, pmax + 1);
    Real prod(1L, bits);
    for (long p = 2; p <= pmax; ++p) {
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        Real ap(A.coeff_at_exponent24(24 * p), bits);
        Real P(p, bits);
        Real local = 1 - ap * pow(P, -s);
        if (f.level % p != 0) {
            long chi = f.name == "L5" ? legendre(p, 3) * legendre(p, 5) : 1;
            local += Real(chi, bits) * pow(P, f.weight - 1 - 2 * s);
        }
        prod /= local;
    }
    return prod;
}

QSeries quasi_period_series(const QuasiPeriodSpec& spec, PeriodForm which, long K) {
    if (spec.weight != 4 && spec.weight != 6) throw EichlerError("quasi-periods are defined for weights 4 and 6");
    long K2 = K + 2;
    QSeries f = spec.weight == 4 ? quotient_expansion(EtaQuotient({{1, 2}, {2, 2}, {3, 2}, {6, 2}}), K2)
                                 : quotient_expansion(EtaQuotient({{2, 9}, {3, 9}, {1, -3}, {6, -3}}), K2) +
                                       quotient_expansion(EtaQuotient({{1, 9}, {6, 9}, {2, -3}, {3, -3}}), K2);
    if (which == PeriodForm::holomorphic) return f.truncated(K);
    QSeries w2 = quotient_expansion(EtaQuotient({{2, 4}, {3, 8}, {1, -8}, {6, -4}}), K2) * mpq_class(9);
    QSeries a = w2 - mpq_class(3);
    QSeries g;
    if (spec.weight == 4)
        g = a * a * (w2 * w2 + mpq_class(9)) * inverse(w2 * w2 * mpq_class(8)) * f;
    else
        g = pow(a, 4) * inverse(w2 * w2 * mpq_class(16)) * f;
    return g.truncated(K);
}

Real eichler_period(const QuasiPeriodSpec& spec, PeriodForm which, long s, long prec) {
    if (s < 1 || s > 2) throw EichlerError("eichler_period takes s = 1 or 2");
    mpfr_prec_t bits = bits_for_digits(prec + 15);
    Real y0 = 1 / sqrt(Real(3L, bits));
    Real pis = pi(bits) * y0;
    long nmax = static_cast<long>((prec + 20) * 2.302585092994046 / pis.to_double()) + 60;
    while (true) {
        QSeries a = quasi_period_series(spec, which, nmax + 1);
        Real sum(0L, bits), tailmag(0L, bits);
        for (long n = 1; n <= nmax; ++n) {
            mpq_class c = a.coeff_at_exponent24(24 * n);
            if (c == 0) continue;
            Real an(c, bits);
            if (n % 2) an = -an;  // q = -e^(-pi y)
            Real x = pi(bits) * n;
            Real term;
            if (spec.weight == 4)
                term = an * gamma_upper(s, x * y0) / pow(x, s);
            else
                term = an * (3 * gamma_upper(s + 2, x * y0) / pow(x, s + 2) - gamma_upper(s, x * y0) / pow(x, s));
            sum += term;
            if (n > nmax - 5) tailmag = max(tailmag, abs(term));
        }
        if (tailmag < pow10(-prec - 10, bits) * max(Real(1L, bits), abs(sum)) || nmax > 20000)
            return Real(-sum, bits_for_digits(prec + 5));
        nmax *= 2;
    }
}

Real eichler_period_quadrature(const QuasiPeriodSpec& spec, PeriodForm which, long s, long prec) {
    mpfr_prec_t bits = bits_for_digits(prec + 10);
    Real y0 = 1 / sqrt(Real(3L, bits));
    long K = static_cast<long>((prec + 15) * 2.302585092994046 / (M_PI * y0.to_double())) + 60;
    QSeries a = quasi_period_series(spec, which, K);
    std::vector<Real> c;
    for (long n = 0; n < K; ++n) c.emplace_back(a.coeff_at_exponent24(24 * n), bits);
    auto f = [&](const Real& y) {
        Real q = -exp(-pi(bits) * Real(y, bits));
        Real acc(0L, bits);
        for (long n = K - 1; n >= 0; --n) acc = acc * q + c[static_cast<size_t>(n)];
        Real wgt = s == 1 ? Real(1L, bits) : Real(y, bits);
        if (spec.weight == 6) wgt *= 3 * Real(y, bits) * Real(y, bits) - 1;
        return acc * wgt;
    };
    double Y = (prec + 15) * 2.302585092994046 / M_PI + 5;
    Real total(0L, bits);
    double lo = y0.to_double();
    Real a0 = y0;
    while (true) {
        double hi = std::min(Y, std::floor(lo) + 1.0);
        Real b(hi, bits);
        total += tanh_sinh(f, a0, b, bits, 14).value;
        if (hi >= Y) break;
        lo = hi;
        a0 = b;
    }
    return Real(-total, bits_for_digits(prec + 5));
}

bool CheckReport::all_pass() const {
    for (const auto& l : lines)
        if (!l.pass) return false;
    return true;
}

CheckReport quasiperiod_checks(long prec) {
    CheckReport r;
    r.prec = prec;
    long wp = prec + 10;
    mpfr_prec_t bits = bits_for_digits(wp);
    Real P = pi(bits);
    QuasiPeriodSpec w4{4}, w6{6};
    Real D1 = eichler_period(w4, PeriodForm::holomorphic, 1, wp), D2 = eichler_period(w4, PeriodForm::holomorphic, 2, wp);
    Real E1 = eichler_period(w4, PeriodForm::partner, 1, wp), E2 = eichler_period(w4, PeriodForm::partner, 2, wp);
    Real F1 = eichler_period(w6, PeriodForm::holomorphic, 1, wp), F2 = eichler_period(w6, PeriodForm::holomorphic, 2, wp);
    Real G1 = eichler_period(w6, PeriodForm::partner, 1, wp), G2 = eichler_period(w6, PeriodForm::partner, 2, wp);
    auto M = [&](long a, long b, long c) { return bessel_moment({a, b, c}, wp); };
    Real m151 = M(1, 5, 1), m153 = M(1, 5, 3), m241 = M(2, 4, 1), m243 = M(2, 4, 3);
    Real m171 = M(1, 7, 1), m173 = M(1, 7, 3), m175 = M(1, 7, 5);
    Real m261 = M(2, 6, 1), m263 = M(2, 6, 3), m265 = M(2, 6, 5);
    Real u1 = 32 * m173 - 64 * m175, u2 = 32 * m263 - 64 * m265;

    r.lines.push_back(line("D1 E2 - D2 E1 = 1/(24 pi^3)", D1 * E2 - D2 * E1, 1 / (24 * pow(P, 3)), prec));
    r.lines.push_back(line("D2/2 = M(1,5,1)/pi^4", D2 / 2, m151 / pow(P, 4), prec));
    r.lines.push_back(line("M(1,5,1)/pi^4 = 4 M(1,5,3)/pi^4 + 5 E2/18", m151 / pow(P, 4), 4 * m153 / pow(P, 4) + 5 * E2 / 18, prec));
    r.lines.push_back(line("3 D1/5 = M(2,4,1)/pi^3", 3 * D1 / 5, m241 / pow(P, 3), prec));
    r.lines.push_back(line("M(2,4,1)/pi^3 = 4 M(2,4,3)/pi^3 + E1/3", m241 / pow(P, 3), 4 * m243 / pow(P, 3) + E1 / 3, prec));
    r.lines.push_back(line("det[M(1,7,1) u1; M(2,6,1) u2] = 5 pi^6/192", m171 * u2 - u1 * m261, 5 * pow(P, 6) / 192, prec));
    r.lines.push_back(line("F2/4 = M(1,7,1)/pi^6", F2 / 4, m171 / pow(P, 6), prec));
    r.lines.push_back(line("M(1,7,1)/pi^6 = u1/pi^6 + 35 G2/108", m171 / pow(P, 6), u1 / pow(P, 6) + 35 * G2 / 108, prec, true));
    r.lines.push_back(line("9 F1/28 = M(2,6,1)/pi^5", 9 * F1 / 28, m261 / pow(P, 5), prec));
    r.lines.push_back(line("M(2,6,1)/pi^5 = u2/pi^5 + 5 G1/12", m261 / pow(P, 5), u2 / pow(P, 5) + 5 * G1 / 12, prec, true));
    r.lines.push_back(line("F1 G2 - F2 G1 = 1/(4 pi^5)", F1 * G2 - F2 * G1, 1 / (4 * pow(P, 5)), prec, true));
    return r;
}

CheckReport onshell_sunrise(long L, long prec) {
    CheckReport r;
    r.prec = prec;
    long wp = prec + 10;
    mpfr_prec_t bits = bits_for_digits(wp);
    Real P2 = pi(bits) * pi(bits);
    Real m = bessel_moment({1, L + 1, 1}, wp);
    Real S = ldexp(m, L);
    switch (L) {
    case 3:
        r.lines.push_back(line("S_3(1) = 8 M(1,4,1) = (8 pi^2/5) L5(1)", S, 8 * P2 / 5 * lseries_value(lseries_form("L5"), 1, wp), prec));
        break;
    case 4:
        r.lines.push_back(line("S_4(1) = 16 M(1,5,1) = 8 pi^2 L6(2)", S, 8 * P2 * lseries_value(lseries_form("L6"), 2, wp), prec));
        break;
    case 6:
        r.lines.push_back(line("S_6(1) = 64 M(1,7,1) = 144 pi^2 L8(4)", S, 144 * P2 * lseries_value(lseries_form("L8"), 4, wp), prec));
        break;
    default:
        throw EichlerError("on-shell check is available for L = 3, 4, 6");
    }
    return r;
}

CheckReport lseries_chains(long prec) {
    CheckReport r;
    r.prec = prec;
    long wp = prec + 10;
    mpfr_prec_t bits = bits_for_digits(wp);
    Real P2 = pi(bits) * pi(bits);
    auto L = [&](const char* n, long s) { return lseries_value(lseries_form(n), s, wp); };
    auto M = [&](long a, long b, long c) { return bessel_moment({a, b, c}, wp); };
    Real l51 = L("L5", 1), l52 = L("L5", 2);
    r.lines.push_back(line("L5(1) = 5 M(1,4,1)/pi^2", l51, 5 * M(1, 4, 1) / P2, prec));
    r.lines.push_back(line("L5(2) = 4 M(2,3,1)/3", l52, 4 * M(2, 3, 1) / 3, prec));
    Real l61 = L("L6", 1), l62 = L("L6", 2), l63 = L("L6", 3);
    r.lines.push_back(line("L6(2) = 2 M(1,5,1)/pi^2", l62, 2 * M(1, 5, 1) / P2, prec));
    r.lines.push_back(line("L6(2) = 2 M(3,3,1)/3", l62, 2 * M(3, 3, 1) / 3, prec));
    r.lines.push_back(line("L6(1) = 2 M(2,4,1)/pi^2", l61, 2 * M(2, 4, 1) / P2, prec));
    r.lines.push_back(line("L6(1) = 3 L6(3)/pi^2", l61, 3 * l63 / P2, prec));
    Real l81 = L("L8", 1), l82 = L("L8", 2), l83 = L("L8", 3), l84 = L("L8", 4), l85 = L("L8", 5);
    r.lines.push_back(line("L8(4) = 4 M(1,7,1)/(9 pi^2)", l84, 4 * M(1, 7, 1) / (9 * P2), prec));
    r.lines.push_back(line("L8(4) = 4 M(3,5,1)/9", l84, 4 * M(3, 5, 1) / 9, prec));
    r.lines.push_back(line("L8(4) = pi^2 L8(2)/9", l84, P2 * l82 / 9, prec));
    r.lines.push_back(line("L8(5) = 4 M(2,6,1)/27", l85, 4 * M(2, 6, 1) / 27, prec));
    r.lines.push_back(line("L8(5) = 2 pi^2 M(4,4,1)/21", l85, 2 * P2 * M(4, 4, 1) / 21, prec));
    r.lines.push_back(line("L8(5) = 2 pi^2 L8(3)/21", l85, 2 * P2 * l83 / 21, prec));
    r.lines.push_back(line("L8(5) = pi^4 L8(1)/54", l85, P2 * P2 * l81 / 54, prec));
    return r;
}

}  // namespace etaq
