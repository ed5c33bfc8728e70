#include "etaq/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace etaq {

QSeries::QSeries(long offset24, std::vector<mpz_class> num, mpz_class den)
    : offset24_(offset24), num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw SeriesError("zero denominator");
    normalize();
}

void QSeries::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& c : num_) {
        if (g == 1) break;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g != 1) {
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

QSeries QSeries::zero(long order, long offset24) {
    return QSeries(offset24, std::vector<mpz_class>(static_cast<size_t>(std::max(order, 0L))), 1);
}

QSeries QSeries::one(long order) { return constant(1, order); }

QSeries QSeries::constant(const mpq_class& c, long order) { return monomial(c, 0, order); }

QSeries QSeries::monomial(const mpq_class& c, long exponent, long order) {
    std::vector<mpz_class> v(static_cast<size_t>(std::max(order, 0L)));
    if (exponent < 0) throw SeriesError("monomial with negative exponent must carry its offset");
    if (exponent < order) v[static_cast<size_t>(exponent)] = c.get_num();
    return QSeries(0, std::move(v), c.get_den());
}

QSeries QSeries::from_rationals(long offset24, const std::vector<mpq_class>& c) {
    mpz_class l = 1;
    for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> v(c.size());
    for (size_t i = 0; i < c.size(); ++i) v[i] = c[i].get_num() * (l / c[i].get_den());
    return QSeries(offset24, std::move(v), l);
}

mpq_class QSeries::coeff(long k) const {
    if (k < 0 || k >= order()) throw SeriesError("coefficient index outside known range");
    mpq_class r(num_[static_cast<size_t>(k)], den_);
    r.canonicalize();
    return r;
}

mpq_class QSeries::coeff_at_exponent24(long e24) const {
    long d = e24 - offset24_;
    if (d % 24 != 0) return 0;
    long k = d / 24;
    if (k < 0) return 0;
    return coeff(k);
}

std::vector<mpq_class> QSeries::coeffs() const {
    std::vector<mpq_class> r;
    r.reserve(num_.size());
    for (long k = 0; k < order(); ++k) r.push_back(coeff(k));
    return r;
}

std::vector<mpz_class> QSeries::integer_coeffs() const {
    if (den_ != 1) throw SeriesError("series has non-integral coefficients");
    return num_;
}

bool QSeries::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& c) { return c == 0; });
}

long QSeries::valuation_index() const {
    for (size_t i = 0; i < num_.size(); ++i)
        if (num_[i] != 0) return static_cast<long>(i);
    return -1;
}

QSeries QSeries::truncated(long order) const {
    if (order > this->order()) throw SeriesError("cannot extend a truncated series");
    std::vector<mpz_class> v(num_.begin(), num_.begin() + std::max(order, 0L));
    return QSeries(offset24_, std::move(v), den_);
}

QSeries QSeries::strip_leading_zeros() const {
    long v = valuation_index();
    if (v <= 0) return *this;
    std::vector<mpz_class> n(num_.begin() + v, num_.end());
    return QSeries(offset24_ + 24 * v, std::move(n), den_);
}

QSeries QSeries::derivative() const {
    std::vector<mpz_class> v(num_.size());
    for (size_t k = 0; k < num_.size(); ++k) v[k] = num_[k] * (offset24_ + 24 * static_cast<long>(k));
    return QSeries(offset24_, std::move(v), den_ * 24);
}

QSeries QSeries::scaled(const mpq_class& c) const {
    std::vector<mpz_class> v(num_.size());
    for (size_t k = 0; k < num_.size(); ++k) v[k] = num_[k] * c.get_num();
    return QSeries(offset24_, std::move(v), den_ * c.get_den());
}

QSeries QSeries::substitute_power(long d) const {
    if (d < 1) throw SeriesError("substitution power must be positive");
    long K = order() * d;
    std::vector<mpz_class> v(static_cast<size_t>(K));
    for (long k = 0; k < order(); ++k) v[static_cast<size_t>(k * d)] = num_[static_cast<size_t>(k)];
    return QSeries(offset24_ * d, std::move(v), den_);
}

std::string QSeries::str(long terms) const {
    std::ostringstream os;
    bool first = true;
    long shown = 0;
    for (long k = 0; k < order() && shown < terms; ++k) {
        if (num_[static_cast<size_t>(k)] == 0) continue;
        mpq_class c = coeff(k);
        long e24 = offset24_ + 24 * k;
        std::string sign = c < 0 ? "-" : "+";
        mpq_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << " " << sign << " ";
        }
        first = false;
        std::string es;
        if (e24 % 24 == 0) {
            es = std::to_string(e24 / 24);
        } else {
            long g = std::gcd(std::labs(e24), 24L);
            es = "(" + std::to_string(e24 / g) + "/" + std::to_string(24 / g) + ")";
        }
        bool unit = a == 1;
        if (e24 == 0) {
            os << a.get_str();
        } else {
            if (!unit) os << a.get_str() << "*";
            os << "q";
            if (es != "1") os << "^" << es;
        }
        ++shown;
    }
    if (first) os << "0";
    long h = horizon24();
    if (h % 24 == 0)
        os << " + O(q^" << h / 24 << ")";
    else
        os << " + O(q^(" << h << "/24))";
    return os.str();
}

QSeries operator+(const QSeries& a, const QSeries& b) {
    if ((a.offset24_ - b.offset24_) % 24 != 0)
        throw SeriesError("adding series whose exponents differ by a non-integer");
    long off = std::min(a.offset24_, b.offset24_);
    long horizon = std::min(a.horizon24(), b.horizon24());
    long K = std::max(0L, (horizon - off) / 24);
    long sa = (a.offset24_ - off) / 24, sb = (b.offset24_ - off) / 24;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
    mpz_class fa = l / a.den_, fb = l / b.den_;
    std::vector<mpz_class> v(static_cast<size_t>(K));
    for (long i = 0; i < K; ++i) {
        long ia = i - sa, ib = i - sb;
        if (ia >= 0 && ia < a.order()) {
            if (fa == 1)
                v[static_cast<size_t>(i)] += a.num_[static_cast<size_t>(ia)];
            else
                v[static_cast<size_t>(i)] += a.num_[static_cast<size_t>(ia)] * fa;
        }
        if (ib >= 0 && ib < b.order()) {
            if (fb == 1)
                v[static_cast<size_t>(i)] += b.num_[static_cast<size_t>(ib)];
            else
                v[static_cast<size_t>(i)] += b.num_[static_cast<size_t>(ib)] * fb;
        }
    }
    return QSeries(off, std::move(v), l);
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + b.negate(); }

QSeries operator*(const QSeries& a, const QSeries& b) {
    long K = std::min(a.order(), b.order());
    auto v = poly_mul(a.num_, b.num_, K);
    v.resize(static_cast<size_t>(K));
    return QSeries(a.offset24_ + b.offset24_, std::move(v), a.den_ * b.den_);
}

QSeries operator/(const QSeries& a, const QSeries& b) { return a * inverse(b); }

bool operator==(const QSeries& a, const QSeries& b) {
    return a.offset24_ == b.offset24_ && a.den_ == b.den_ && a.num_ == b.num_;
}

QSeries operator+(const QSeries& a, const mpq_class& c) {
    if (a.offset24() % 24 != 0) throw SeriesError("adding a constant to a series with fractional exponents");
    long K = a.offset24() / 24 + a.order();
    if (K <= 0) return a;
    return a + QSeries::constant(c, K);
}
QSeries operator-(const QSeries& a, const mpq_class& c) { return a + mpq_class(-c); }
QSeries operator*(const QSeries& a, const mpq_class& c) { return a.scaled(c); }
QSeries operator*(const mpq_class& c, const QSeries& a) { return a.scaled(c); }
QSeries operator+(const mpq_class& c, const QSeries& a) { return a + c; }
QSeries operator-(const mpq_class& c, const QSeries& a) { return a.negate() + c; }

QSeries inverse(const QSeries& a0) {
    QSeries a = a0.strip_leading_zeros();
    if (a.order() == 0 || a.numerators()[0] == 0) throw SeriesError("division by a series with zero leading coefficient");
    long K = a.order();
    const auto& n = a.numerators();
    const mpz_class& c0 = n[0];
    if (c0 == 1 || c0 == -1) {
        auto v = poly_inverse_unit(n, K);
        for (auto& x : v) x *= a.denominator();
        return QSeries(-a.offset24(), std::move(v), 1);
    }
    // 1/n(q) = V(q/c0)/c0 with V = 1/u, u_k = n_k c0^(k-1)
    std::vector<mpz_class> u(static_cast<size_t>(K));
    mpz_class p = 1;
    u[0] = 1;
    for (long k = 1; k < K; ++k) {
        u[static_cast<size_t>(k)] = n[static_cast<size_t>(k)] * p;
        p *= c0;
    }
    auto V = poly_inverse_unit(u, K);
    // coefficient k: V_k / c0^(k+1); common denominator c0^K
    std::vector<mpz_class> w(static_cast<size_t>(K));
    mpz_class pw = 1;
    for (long k = K - 1; k >= 0; --k) {
        w[static_cast<size_t>(k)] = V[static_cast<size_t>(k)] * pw * a.denominator();
        pw *= c0;
    }
    return QSeries(-a.offset24(), std::move(w), pw);
}

QSeries pow(const QSeries& a0, long k) {
    if (k == 0) {
        QSeries a = a0.strip_leading_zeros();
        return QSeries::one(a.order());
    }
    if (k < 0) return inverse(pow(a0, -k));
    QSeries a = a0.strip_leading_zeros();
    QSeries r;
    bool have = false;
    QSeries b = a;
    while (k) {
        if (k & 1) {
            r = have ? r * b : b;
            have = true;
        }
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

QSeries series_arith(const QSeries& a, const QSeries& b, ArithOp op) {
    switch (op) {
        case ArithOp::add: return a + b;
        case ArithOp::sub: return a - b;
        case ArithOp::mul: return a * b;
        case ArithOp::div: return a / b;
        default: throw SeriesError("operation needs a scalar argument");
    }
}

QSeries series_arith(const QSeries& a, ArithOp op, const mpq_class& c) {
    switch (op) {
        case ArithOp::scalar: return a.scaled(c);
        case ArithOp::pow:
            if (c.get_den() != 1 || !c.get_num().fits_slong_p()) throw SeriesError("power must be a machine integer");
            return pow(a, c.get_num().get_si());
        case ArithOp::add: return a + c;
        case ArithOp::sub: return a - c;
        default: throw SeriesError("operation needs a series argument");
    }
}

std::vector<mpz_class> poly_mul_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K) {
    long na = static_cast<long>(a.size()), nb = static_cast<long>(b.size());
    if (na == 0 || nb == 0) return {};
    long n = std::min(K, na + nb - 1);
    std::vector<mpz_class> r(static_cast<size_t>(std::max(n, 0L)));
    for (long i = 0; i < na && i < n; ++i) {
        const mpz_class& ai = a[static_cast<size_t>(i)];
        if (ai == 0) continue;
        long lim = std::min(nb, n - i);
        for (long j = 0; j < lim; ++j) {
            const mpz_class& bj = b[static_cast<size_t>(j)];
            if (bj == 0) continue;
            mpz_addmul(r[static_cast<size_t>(i + j)].get_mpz_t(), ai.get_mpz_t(), bj.get_mpz_t());
        }
    }
    return r;
}

namespace {

size_t max_bits(const std::vector<mpz_class>& a, long n) {
    size_t m = 0;
    for (long i = 0; i < n; ++i) {
        const mpz_class& x = a[static_cast<size_t>(i)];
        if (x != 0) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return m;
}

void pack(const std::vector<mpz_class>& a, long n, size_t L, mpz_class& out) {
    std::vector<uint64_t> pos(static_cast<size_t>(n) * L, 0), neg(static_cast<size_t>(n) * L, 0);
    bool any_neg = false;
    for (long i = 0; i < n; ++i) {
        const mpz_class& x = a[static_cast<size_t>(i)];
        int s = sgn(x);
        if (s == 0) continue;
        size_t cnt = 0;
        uint64_t* dst = (s > 0 ? pos.data() : neg.data()) + static_cast<size_t>(i) * L;
        mpz_export(dst, &cnt, -1, sizeof(uint64_t), 0, 0, x.get_mpz_t());
        if (s < 0) any_neg = true;
    }
    mpz_import(out.get_mpz_t(), pos.size(), -1, sizeof(uint64_t), 0, 0, pos.data());
    if (any_neg) {
        mpz_class t;
        mpz_import(t.get_mpz_t(), neg.size(), -1, sizeof(uint64_t), 0, 0, neg.data());
        out -= t;
    }
}

}  // namespace

std::vector<mpz_class> poly_mul_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K) {
    long na = std::min<long>(static_cast<long>(a.size()), K), nb = std::min<long>(static_cast<long>(b.size()), K);
    if (na <= 0 || nb <= 0) return {};
    long n = std::min(K, na + nb - 1);
    size_t ba = max_bits(a, na), bb = max_bits(b, nb);
    if (ba == 0 || bb == 0) return std::vector<mpz_class>(static_cast<size_t>(n));
    size_t lg = 1;
    while ((1L << lg) < std::min(na, nb)) ++lg;
    size_t bits = ba + bb + lg + 2;
    size_t L = (bits + 63) / 64;
    mpz_class X, Y;
    pack(a, na, L, X);
    pack(b, nb, L, Y);
    mpz_class Z = X * Y;
    int s = sgn(Z);
    if (s < 0) Z = -Z;
    size_t total = static_cast<size_t>(na + nb) * L + 1;
    std::vector<uint64_t> limbs(total, 0);
    size_t cnt = 0;
    if (s != 0) mpz_export(limbs.data(), &cnt, -1, sizeof(uint64_t), 0, 0, Z.get_mpz_t());
    std::vector<mpz_class> r(static_cast<size_t>(n));
    mpz_class half, full, t;
    mpz_setbit(half.get_mpz_t(), 64 * L - 1);
    mpz_setbit(full.get_mpz_t(), 64 * L);
    int carry = 0;
    for (long i = 0; i < n; ++i) {
        mpz_import(t.get_mpz_t(), L, -1, sizeof(uint64_t), 0, 0, limbs.data() + static_cast<size_t>(i) * L);
        if (carry) t += 1;
        if (t >= half) {
            t -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        r[static_cast<size_t>(i)] = s < 0 ? mpz_class(-t) : t;
    }
    return r;
}

std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, long K) {
    long na = std::min<long>(static_cast<long>(a.size()), K), nb = std::min<long>(static_cast<long>(b.size()), K);
    if (std::min(na, nb) <= 24) return poly_mul_schoolbook(a, b, K);
    return poly_mul_kronecker(a, b, K);
}

std::vector<mpz_class> poly_inverse_unit(const std::vector<mpz_class>& a, long K) {
    if (a.empty() || (a[0] != 1 && a[0] != -1)) throw SeriesError("unit inverse needs leading coefficient +-1");
    std::vector<mpz_class> g{a[0]};
    long m = 1;
    while (m < K) {
        long m2 = std::min(2 * m, K);
        std::vector<mpz_class> head(a.begin(), a.begin() + std::min<long>(m2, static_cast<long>(a.size())));
        auto e = poly_mul(head, g, m2);  // a g = 1 + O(q^m)
        e.resize(static_cast<size_t>(m2));
        // g <- g - g (a g - 1)
        e[0] -= 1;
        std::vector<mpz_class> tail(e.begin() + m, e.end());
        auto corr = poly_mul(g, tail, m2 - m);
        g.resize(static_cast<size_t>(m2));
        for (long i = 0; i < static_cast<long>(corr.size()); ++i) g[static_cast<size_t>(m + i)] -= corr[static_cast<size_t>(i)];
        m = m2;
    }
    g.resize(static_cast<size_t>(K));
    return g;
}

EtaQuotient::EtaQuotient(std::map<long, long> r) {
    for (auto [d, e] : r) {
        if (d < 1) throw SeriesError("eta quotient divisor must be positive");
        if (e != 0) r_[d] = e;
    }
}

EtaQuotient EtaQuotient::parse(const std::string& s) {
    std::istringstream is(s);
    std::string tok;
    std::map<long, long> r;
    while (is >> tok) {
        auto p = tok.find('^');
        long d = std::stol(tok.substr(0, p));
        long e = p == std::string::npos ? 1 : std::stol(tok.substr(p + 1));
        r[d] += e;
    }
    return EtaQuotient(r);
}

long EtaQuotient::exponent(long d) const {
    auto it = r_.find(d);
    return it == r_.end() ? 0 : it->second;
}

mpq_class EtaQuotient::weight() const {
    long s = 0;
    for (auto [d, e] : r_) s += e;
    mpq_class w(s, 2);
    w.canonicalize();
    return w;
}

long EtaQuotient::offset24() const {
    long s = 0;
    for (auto [d, e] : r_) s += d * e;
    return s;
}

long EtaQuotient::lcm_level() const {
    long l = 1;
    for (auto [d, e] : r_) l = std::lcm(l, d);
    return l;
}

EtaQuotient EtaQuotient::operator*(const EtaQuotient& o) const {
    std::map<long, long> r = r_;
    for (auto [d, e] : o.r_) r[d] += e;
    return EtaQuotient(r);
}

EtaQuotient EtaQuotient::operator/(const EtaQuotient& o) const { return *this * o.pow(-1); }

EtaQuotient EtaQuotient::pow(long k) const {
    std::map<long, long> r;
    for (auto [d, e] : r_) r[d] = e * k;
    return EtaQuotient(r);
}

std::string EtaQuotient::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto [d, e] : r_) {
        if (!first) os << " ";
        first = false;
        os << d << "^" << e;
    }
    return first ? std::string("1") : os.str();
}

QSeries eta_series(long d, long K) {
    if (d < 1 || K < 1) throw SeriesError("eta_series needs d >= 1 and K >= 1");
    std::vector<mpz_class> v(static_cast<size_t>(K));
    // sum_m (-1)^m q^(d m (3m-1)/2) over all integers m
    for (long m = 0;; ++m) {
        bool any = false;
        for (long mm : {m, -m - 1}) {
            long e = d * (mm * (3 * mm - 1) / 2);
            if (e < K) {
                v[static_cast<size_t>(e)] += (mm % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    return QSeries(d, std::move(v), 1);
}

QSeries quotient_expansion(const EtaQuotient& e, long K) {
    if (K < 1) throw SeriesError("order must be positive");
    // q F'/F = sum b_n q^n, b_n = -sum_{d | n} r_d d sigma(n/d)
    std::vector<long> sigma(static_cast<size_t>(K), 0);
    for (long i = 1; i < K; ++i)
        for (long j = i; j < K; j += i) sigma[static_cast<size_t>(j)] += i;
    std::vector<long> b(static_cast<size_t>(K), 0);
    for (auto [d, r] : e.exponents())
        for (long n = d; n < K; n += d) b[static_cast<size_t>(n)] -= r * d * sigma[static_cast<size_t>(n / d)];
    std::vector<mpz_class> f(static_cast<size_t>(K));
    f[0] = 1;
    mpz_class acc;
    for (long n = 1; n < K; ++n) {
        acc = 0;
        for (long j = 1; j <= n; ++j) {
            long bj = b[static_cast<size_t>(j)];
            if (bj == 0) continue;
            const mpz_class& fn = f[static_cast<size_t>(n - j)];
            if (bj > 0)
                mpz_addmul_ui(acc.get_mpz_t(), fn.get_mpz_t(), static_cast<unsigned long>(bj));
            else
                mpz_submul_ui(acc.get_mpz_t(), fn.get_mpz_t(), static_cast<unsigned long>(-bj));
        }
        mpz_divexact_ui(f[static_cast<size_t>(n)].get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    }
    return QSeries(e.offset24(), std::move(f), 1);
}

QSeries quotient_expansion_factored(const EtaQuotient& e, long K) {
    QSeries r = QSeries::one(K);
    for (auto [d, k] : e.exponents()) r = r * pow(eta_series(d, K), k);
    return r;
}

QSeries theta_series(long a, long b, long K) {
    if (a < 1 || b < 1) throw SeriesError("theta_series needs a, b >= 1");
    std::vector<mpz_class> v(static_cast<size_t>(K));
    if (K > 0) v[0] = 1;
    for (long n = 1;; ++n) {
        bool any = false;
        for (long m : {n, -n}) {
            long e = a * (m * m + m) / 2 + b * (m * m - m) / 2;
            if (e < K) {
                v[static_cast<size_t>(e)] += (m % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    return QSeries(0, std::move(v), 1);
}

QSeries psi_series(long n, long K) { return quotient_expansion(EtaQuotient({{2 * n, 2}, {n, -1}}), K); }

QSeries phi_series(long n, long K) {
    return quotient_expansion(EtaQuotient({{2 * n, 5}, {n, -2}, {4 * n, -2}}), K);
}

QSeries lambert_series(const std::vector<LambertTerm>& weights, long m, long p, long K) {
    if (K < 1 || p < 0 || m < 1) throw SeriesError("bad lambert series parameters");
    std::vector<mpz_class> v(static_cast<size_t>(K));
    for (const auto& w : weights) {
        if (w.a < 1) throw SeriesError("lambert numerator exponents must be positive");
        // n^p q^(n (a + m t))
        for (long n = 1; n * w.a < K; ++n) {
            mpz_class np;
            mpz_ui_pow_ui(np.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(p));
            np *= w.sign;
            for (long e = n * w.a; e < K; e += n * m) v[static_cast<size_t>(e)] += np;
        }
    }
    return QSeries(0, std::move(v), 1);
}

long required_order(const QSeries& s, const Real& absq, long prec_digits) {
    double lq = std::log10(absq.to_double());
    if (!(lq < 0)) throw SeriesError("|q| must be below 1");
    // crude: coefficient growth from the known part
    double g = 0;
    long K = s.order();
    double lden = std::log10(mpz_class(s.denominator()).get_d());
    for (long k = std::max(1L, K / 2); k < K; ++k) {
        const mpz_class& c = s.numerators()[static_cast<size_t>(k)];
        if (c == 0) continue;
        double lc = static_cast<double>(mpz_sizeinbase(c.get_mpz_t(), 2)) * 0.30103 - lden;
        g = std::max(g, lc / static_cast<double>(k));
    }
    double rate = lq + g;
    if (!(rate < 0)) return -1;
    return static_cast<long>(std::ceil(prec_digits / -rate)) + 2;
}

SeriesValue eval_series(const QSeries& s, const Complex& q0, long prec_digits) {
    mpfr_prec_t bits = bits_for_digits(prec_digits + 10);
    Complex q(Real(q0.re, bits), Real(q0.im, bits));
    Real aq = abs(q);
    if (!(aq < 1.0)) throw SeriesError("eval_series needs |q| < 1");
    long K = s.order();
    Complex acc(bits);
    for (long k = K - 1; k >= 0; --k) {
        acc *= q;
        const mpz_class& c = s.numerators()[static_cast<size_t>(k)];
        if (c != 0) acc.re += Real(c, bits);
    }
    acc /= Real(s.denominator(), bits);
    // tail envelope from the last known terms
    Real err(0L, bits);
    if (!aq.is_zero() && K > 0) {
        long w = std::max(1L, K / 8);
        Real env(0L, bits);
        Real aqk = pow(aq, K - w);
        for (long k = K - w; k < K; ++k) {
            if (k >= 0) {
                Real t = abs(Real(s.numerators()[static_cast<size_t>(k)], bits)) * aqk;
                if (t > env) env = t;
            }
            aqk *= aq;
        }
        env /= Real(s.denominator(), bits);
        // geometric ratio estimate over the second half
        long h = K / 2;
        Real env2(0L, bits);
        Real aqh = pow(aq, std::max(0L, h - w));
        for (long k = std::max(0L, h - w); k < h; ++k) {
            Real t = abs(Real(s.numerators()[static_cast<size_t>(k)], bits)) * aqh;
            if (t > env2) env2 = t;
            aqh *= aq;
        }
        env2 /= Real(s.denominator(), bits);
        Real ratio = aq;
        if (!env2.is_zero() && !env.is_zero() && K - h > 0) {
            Real r = exp(log(env / env2) / (K - h));
            if (r > ratio) ratio = r;
        }
        if (!(ratio < 1.0)) throw SeriesError("series terms are not decaying at this nome");
        err = env * ratio / (1 - ratio);
        if (env.is_zero()) err = aq * 0;
        Real target = pow10(-prec_digits, bits) * max(abs(acc), Real(1L, bits));
        if (err > target) {
            long need = K + static_cast<long>(std::ceil((log(err / target) / -log(ratio)).to_double())) + 1;
            throw SeriesError("order too small: need about K = " + std::to_string(need));
        }
    }
    if (s.offset24() != 0) {
        long g = std::gcd(std::labs(s.offset24()), 24L);
        if (q.is_zero()) {
            if (s.offset24() > 0) return {Complex(bits), err};
            throw SeriesError("negative power at q = 0");
        }
        acc *= pow_frac(q, s.offset24() / g, 24 / g);
    }
    return {acc, err};
}

Complex eval_eta_quotient(const EtaQuotient& e, const Complex& q0, long prec_digits) {
    if (e.offset24() % 24 != 0) throw SeriesError("eta quotient " + e.str() + " has a fractional leading power of q");
    mpfr_prec_t bits = bits_for_digits(prec_digits + 10);
    Complex q(Real(q0.re, bits), Real(q0.im, bits));
    Real aq = abs(q);
    if (!(aq < 1.0)) throw SeriesError("eta quotient evaluation needs |q| < 1");
    Complex acc(Real(1L, bits), Real(bits));
    if (aq.is_zero()) {
        if (e.offset24() > 0) return Complex(bits);
        if (e.offset24() < 0) throw SeriesError("eta quotient has a pole at q = 0");
        return acc;
    }
    Real eps = pow10(-prec_digits - 8, bits);
    for (const auto& [d, r] : e.exponents()) {
        Complex qd = pow(q, d), qk = qd;
        Real aqk = pow(aq, d);
        Complex prod(Real(1L, bits), Real(bits));
        while (aqk > eps) {
            prod *= Complex(Real(1L, bits), Real(bits)) - qk;
            qk *= qd;
            aqk = abs(qk);
        }
        acc *= pow(prod, r);
    }
    return acc * pow(q, e.offset24() / 24);
}

}  // namespace etaq
