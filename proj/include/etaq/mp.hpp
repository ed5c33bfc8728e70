#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <climits>
#include <cstdint>
#include <string>
#include <utility>

namespace etaq {

// decimal digits <-> bits
inline mpfr_prec_t bits_for_digits(long digits) { return static_cast<mpfr_prec_t>(digits * 3.3219280948873623 + 24); }
inline long digits_for_bits(mpfr_prec_t bits) { return static_cast<long>((bits - 24) / 3.3219280948873623); }

class Real {
public:
    Real() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
    explicit Real(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    Real(long x, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x, mpfr_prec_t bits) : Real(static_cast<long>(x), bits) {}
    Real(double x, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const mpz_class& z, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    Real(const mpq_class& q, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    Real(const std::string& s, mpfr_prec_t bits);
    Real(const Real& o, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set(v_, o.v_, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    void set_prec_keep(mpfr_prec_t bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator+=(long k) { mpfr_add_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator-=(long k) { mpfr_sub_si(v_, v_, k, MPFR_RNDN); return *this; }

    Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exponent2() const { return is_zero() ? LONG_MIN / 2 : mpfr_get_exp(v_); }
    // log10 of |x|, approximately; very negative for 0
    double log10abs() const;
    mpz_class round_to_z() const;
    mpz_class floor_to_z() const;

    // fixed number of significant digits, scientific when needed
    std::string str(long digits = 0) const;
    // plain decimal with given digits after the point
    std::string fixed(long decimals) const;

private:
    mpfr_t v_;
};

inline mpfr_prec_t pmax(const Real& a, const Real& b) { return a.prec() > b.prec() ? a.prec() : b.prec(); }

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator*(long a, const Real& b);
Real operator/(long a, const Real& b);
inline Real operator+(const Real& a, int b) { return a + static_cast<long>(b); }
inline Real operator-(const Real& a, int b) { return a - static_cast<long>(b); }
inline Real operator*(const Real& a, int b) { return a * static_cast<long>(b); }
inline Real operator/(const Real& a, int b) { return a / static_cast<long>(b); }
inline Real operator+(int a, const Real& b) { return static_cast<long>(a) + b; }
inline Real operator-(int a, const Real& b) { return static_cast<long>(a) - b; }
inline Real operator*(int a, const Real& b) { return static_cast<long>(a) * b; }
inline Real operator/(int a, const Real& b) { return static_cast<long>(a) / b; }

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }
bool operator<(const Real& a, double b);
bool operator>(const Real& a, double b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long k);
Real cosh(const Real& x);
Real sinh(const Real& x);
Real pi(mpfr_prec_t bits);
Real euler_gamma(mpfr_prec_t bits);
Real ldexp(const Real& x, long e);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
// 10^e at precision
Real pow10(long e, mpfr_prec_t bits);

class Complex {
public:
    Real re, im;

    Complex() = default;
    explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
    Complex(Real r) : re(std::move(r)), im(re.prec()) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(long r, long i, mpfr_prec_t bits) : re(r, bits), im(i, bits) {}

    mpfr_prec_t prec() const { return pmax(re, im); }
    Complex conj() const { return Complex(re, -im); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o) { re *= o; im *= o; return *this; }
    Complex& operator/=(const Real& o) { re /= o; im /= o; return *this; }
    Complex operator-() const { return Complex(-re, -im); }

    std::string str(long digits = 0) const;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);
Complex operator*(const Complex& a, long b);

Real abs(const Complex& z);
Real norm(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long k);
// principal branch z^(num/den)
Complex pow_frac(const Complex& z, long num, long den);
Complex expi(const Real& theta);

}  // namespace etaq
