#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "etaq/mp.hpp"

namespace etaq {

struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sum_k (num[k] / den) q^(offset24/24 + k), known modulo q^(offset24/24 + order)
class QSeries {
public:
    QSeries() : offset24_(0), den_(1) {}
    QSeries(long offset24, std::vector<mpz_class> num, mpz_class den = 1);

    static QSeries zero(long order, long offset24 = 0);
    static QSeries one(long order);
    static QSeries constant(const mpq_class& c, long order);
    static QSeries monomial(const mpq_class& c, long exponent, long order);  // c q^exponent mod q^order
    static QSeries from_rationals(long offset24, const std::vector<mpq_class>& c);

    long offset24() const { return offset24_; }
    long order() const { return static_cast<long>(num_.size()); }
    // absolute truncation exponent in 24ths
    long horizon24() const { return offset24_ + 24 * order(); }
    const std::vector<mpz_class>& numerators() const { return num_; }
    const mpz_class& denominator() const { return den_; }
    mpq_class coeff(long k) const;
    // coefficient of q^e for integer-spaced exponent e = (offset24 + 24 k)/24
    mpq_class coeff_at_exponent24(long e24) const;
    bool is_integral() const { return den_ == 1; }
    std::vector<mpq_class> coeffs() const;
    std::vector<mpz_class> integer_coeffs() const;  // throws unless integral
    bool is_zero() const;
    // first index with nonzero coefficient, or -1
    long valuation_index() const;

    QSeries truncated(long order) const;
    QSeries strip_leading_zeros() const;
    QSeries shifted(long m) const { return QSeries(offset24_ + 24 * m, num_, den_); }
    QSeries derivative() const;  // q d/dq
    QSeries scaled(const mpq_class& c) const;
    // q -> q^d
    QSeries substitute_power(long d) const;
    QSeries negate() const { return scaled(-1); }

    std::string str(long terms = 8) const;

    friend QSeries operator+(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a, const QSeries& b);
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend QSeries operator/(const QSeries& a, const QSeries& b);
    friend bool operator==(const QSeries& a, const QSeries& b);

private:
    void normalize();
    long offset24_;
    std::vector<mpz_class> num_;
    mpz_class den_;
};

QSeries inverse(const QSeries& a);
QSeries pow(const QSeries& a, long k);
QSeries operator+(const QSeries& a, const mpq_class& c);
QSeries operator-(const QSeries& a, const mpq_class& c);
QSeries operator*(const QSeries& a, const mpq_class& c);
QSeries operator*(const mpq_class& c, const QSeries& a);
QSeries operator+(const mpq_class& c, const QSeries& a);
QSeries operator-(const mpq_class& c, const QSeries& a);

enum class ArithOp { add, sub, mul, div, pow, scalar };
QSeries series_arith(const QSeries& a, const QSeries& b, ArithOp op);
QSeries series_arith(const QSeries& a, ArithOp op, const mpq_class& c);

// truncated product of integer polynomials, length min(K, |a|+|b|-1)
std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K);
std::vector<mpz_class> poly_mul_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K);
std::vector<mpz_class> poly_mul_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K);
// inverse of an integer series with leading coefficient +-1
std::vector<mpz_class> poly_inverse_unit(const std::vector<mpz_class>& a, long K);

class EtaQuotient {
public:
    EtaQuotient() = default;
    explicit EtaQuotient(std::map<long, long> r);
    static EtaQuotient parse(const std::string& s);  // "2^1 6^5 1^-5 3^-1"

    const std::map<long, long>& exponents() const { return r_; }
    long exponent(long d) const;
    mpq_class weight() const;
    long offset24() const;
    bool is_unit() const { return r_.empty(); }
    long lcm_level() const;

    EtaQuotient operator*(const EtaQuotient& o) const;
    EtaQuotient operator/(const EtaQuotient& o) const;
    EtaQuotient pow(long k) const;
    bool operator==(const EtaQuotient& o) const { return r_ == o.r_; }
    bool operator<(const EtaQuotient& o) const { return r_ < o.r_; }
    std::string str() const;

private:
    std::map<long, long> r_;
};

QSeries eta_series(long d, long K);
// single-pass expansion of prod eta_d^r_d via the logarithmic-derivative recurrence
QSeries quotient_expansion(const EtaQuotient& e, long K);
// factor-by-factor product of eta_series powers
QSeries quotient_expansion_factored(const EtaQuotient& e, long K);

QSeries theta_series(long a, long b, long K);
QSeries psi_series(long n, long K);
QSeries phi_series(long n, long K);

struct LambertTerm {
    long a;     // numerator monomial q^(a n)
    long sign;  // integer weight
};
// sum_{n>0} n^p (sum_j s_j q^(a_j n)) / (1 - q^(m n))
QSeries lambert_series(const std::vector<LambertTerm>& weights, long m, long p, long K);

struct SeriesValue {
    Complex value;
    Real error;  // estimate of the truncation error
};
SeriesValue eval_series(const QSeries& s, const Complex& q0, long prec_digits);
// q^(sum d r_d / 24) prod_d prod_k (1 - q^(d k))^(r_d); needs an integral leading power
Complex eval_eta_quotient(const EtaQuotient& e, const Complex& q0, long prec_digits);
// order needed so that the omitted tail is below 10^-prec_digits at |q0|
long required_order(const QSeries& s, const Real& absq, long prec_digits);

}  // namespace etaq
