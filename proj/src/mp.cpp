#include "etaq/mp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace etaq {

Real::Real(const std::string& s, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw std::invalid_argument("not a decimal number: " + s);
    }
}

Real& Real::operator+=(const Real& o) {
    if (o.prec() > prec()) set_prec_keep(o.prec());
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator-=(const Real& o) {
    if (o.prec() > prec()) set_prec_keep(o.prec());
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(const Real& o) {
    if (o.prec() > prec()) set_prec_keep(o.prec());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(const Real& o) {
    if (o.prec() > prec()) set_prec_keep(o.prec());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

double Real::log10abs() const {
    if (is_zero()) return -1e300;
    long e;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log10(std::fabs(m)) + e * 0.30102999566398120;
}

mpz_class Real::round_to_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
}

mpz_class Real::floor_to_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

std::string Real::str(long digits) const {
    if (digits <= 0) digits = digits_for_bits(prec());
    if (digits < 1) digits = 1;
    if (is_zero()) return "0";
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = false;
    if (!m.empty() && m[0] == '-') {
        neg = true;
        m.erase(0, 1);
    }
    while (m.size() > 1 && m.back() == '0' && static_cast<long>(m.size()) > e) m.pop_back();
    std::string out;
    if (e > 0 && e <= digits) {
        if (static_cast<long>(m.size()) <= e) {
            out = m + std::string(static_cast<size_t>(e) - m.size(), '0');
        } else {
            out = m.substr(0, static_cast<size_t>(e)) + "." + m.substr(static_cast<size_t>(e));
        }
    } else if (e <= 0 && e > -8) {
        out = "0." + std::string(static_cast<size_t>(-e), '0') + m;
    } else {
        out = m.substr(0, 1);
        if (m.size() > 1) out += "." + m.substr(1);
        out += "e" + std::to_string(e - 1);
    }
    return neg ? "-" + out : out;
}

std::string Real::fixed(long decimals) const {
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%ldRf", decimals);
    int n = mpfr_snprintf(nullptr, 0, fmt, v_);
    std::vector<char> buf(static_cast<size_t>(n) + 1);
    mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
    return std::string(buf.data());
}

#define ETAQ_BINOP(OP, FN)                                         \
    Real operator OP(const Real& a, const Real& b) {               \
        Real r(pmax(a, b));                                        \
        FN(r.get(), a.get(), b.get(), MPFR_RNDN);                  \
        return r;                                                  \
    }
ETAQ_BINOP(+, mpfr_add)
ETAQ_BINOP(-, mpfr_sub)
ETAQ_BINOP(*, mpfr_mul)
ETAQ_BINOP(/, mpfr_div)
#undef ETAQ_BINOP

Real operator+(const Real& a, long b) { Real r(a.prec()); mpfr_add_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
Real operator-(const Real& a, long b) { Real r(a.prec()); mpfr_sub_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
Real operator*(const Real& a, long b) { Real r(a.prec()); mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
Real operator/(const Real& a, long b) { Real r(a.prec()); mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
Real operator+(long a, const Real& b) { return b + a; }
Real operator-(long a, const Real& b) { Real r(b.prec()); mpfr_si_sub(r.get(), a, b.get(), MPFR_RNDN); return r; }
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(long a, const Real& b) { Real r(b.prec()); mpfr_si_div(r.get(), a, b.get(), MPFR_RNDN); return r; }

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }

#define ETAQ_UNARY(NAME, FN)                          \
    Real NAME(const Real& x) {                        \
        Real r(x.prec());                             \
        FN(r.get(), x.get(), MPFR_RNDN);              \
        return r;                                     \
    }
ETAQ_UNARY(abs, mpfr_abs)
ETAQ_UNARY(sqrt, mpfr_sqrt)
ETAQ_UNARY(exp, mpfr_exp)
ETAQ_UNARY(log, mpfr_log)
ETAQ_UNARY(log1p, mpfr_log1p)
ETAQ_UNARY(sin, mpfr_sin)
ETAQ_UNARY(cos, mpfr_cos)
ETAQ_UNARY(cosh, mpfr_cosh)
ETAQ_UNARY(sinh, mpfr_sinh)
#undef ETAQ_UNARY

Real atan2(const Real& y, const Real& x) {
    Real r(pmax(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}
Real pow(const Real& x, const Real& y) {
    Real r(pmax(x, y));
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
Real pow(const Real& x, long k) {
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN);
    return r;
}
Real pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
Real euler_gamma(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_euler(r.get(), MPFR_RNDN);
    return r;
}
Real ldexp(const Real& x, long e) {
    Real r(x.prec());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}
Real min(const Real& a, const Real& b) { return a < b ? a : b; }
Real max(const Real& a, const Real& b) { return a > b ? a : b; }
Real pow10(long e, mpfr_prec_t bits) {
    Real r(10L, bits);
    mpfr_pow_si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}
Complex& Complex::operator/=(const Complex& o) {
    *this = *this / o;
    return *this;
}

std::string Complex::str(long digits) const {
    std::string s = re.str(digits);
    std::string t = im.str(digits);
    if (!t.empty() && t[0] == '-') return s + " - " + t.substr(1) + "i";
    return s + " + " + t + "i";
}

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return Complex((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
}
Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return Complex(b.re * a, b.im * a); }
Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }
Complex operator+(const Complex& a, const Real& b) { return Complex(a.re + b, a.im); }
Complex operator-(const Complex& a, const Real& b) { return Complex(a.re - b, a.im); }
Complex operator*(const Complex& a, long b) { return Complex(a.re * b, a.im * b); }

Real abs(const Complex& z) {
    Real r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex exp(const Complex& z) {
    Real m = exp(z.re);
    Real s(z.prec()), c(z.prec());
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
    return Complex(m * c, m * s);
}
Complex log(const Complex& z) {
    if (z.is_zero()) throw std::domain_error("log(0)");
    return Complex(log(abs(z)), arg(z));
}
Complex sqrt(const Complex& z) {
    mpfr_prec_t p = z.prec();
    if (z.im.is_zero()) {
        if (z.re.sign() >= 0) return Complex(sqrt(z.re), Real(p));
        return Complex(Real(p), sqrt(-z.re));
    }
    Real m = abs(z);
    Real a = sqrt((m + z.re) / 2);
    Real b = z.im / (2 * a);
    return Complex(a, b);
}
Complex pow(const Complex& z, long k) {
    mpfr_prec_t p = z.prec();
    Complex r(Real(1L, p), Real(p));
    Complex b = z;
    bool inv = k < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    if (inv) return Complex(Real(1L, p), Real(p)) / r;
    return r;
}
Complex pow_frac(const Complex& z, long num, long den) {
    if (den == 1) return pow(z, num);
    if (z.is_zero()) {
        if (num > 0) return Complex(z.prec());
        throw std::domain_error("0 to a negative power");
    }
    Real m = log(abs(z)) * num / den;
    Real t = arg(z) * num / den;
    Real e = exp(m);
    return Complex(e * cos(t), e * sin(t));
}
Complex expi(const Real& theta) {
    Real s(theta.prec()), c(theta.prec());
    mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
    return Complex(c, s);
}

}  // namespace etaq
