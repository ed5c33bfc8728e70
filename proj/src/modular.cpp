#include "etaq/modular.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace etaq {

std::vector<std::pair<long, long>> factorize(long n) {
    std::vector<std::pair<long, long>> f;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

std::vector<long> divisors(long n) {
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n) d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

long euler_phi_l(long n) {
    long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

LevelData level_data(long N) {
    if (N < 1) throw ModularDomainError("level must be positive");
    LevelData L{N, N, 1, 1, 0, 0};
    for (auto [p, e] : factorize(N)) {
        L.index = L.index / p * (p + 1);
        if (p == 2) {
            if (e >= 2) L.nu2 = 0;
        } else {
            L.nu2 *= (p % 4 == 1) ? 2 : 0;
        }
        if (p == 3) {
            if (e >= 2) L.nu3 = 0;
        } else {
            L.nu3 *= (p % 3 == 1) ? 2 : 0;
        }
    }
    for (long d : divisors(N)) L.cusps += euler_phi_l(std::gcd(d, N / d));
    // 12 g = 12 + index - 3 nu2 - 4 nu3 - 6 cusps
    long twelve_g = 12 + L.index - 3 * L.nu2 - 4 * L.nu3 - 6 * L.cusps;
    L.genus = twelve_g / 12;
    return L;
}

long genus0(long N) { return level_data(N).genus; }

mpz_class EllipticCurve::b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
mpz_class EllipticCurve::c4() const { return b2() * b2() - 24 * b4(); }
mpz_class EllipticCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
mpz_class EllipticCurve::discriminant() const {
    return -b2() * b2() * b8() - 8 * b4() * b4() * b4() - 27 * b6() * b6() + 9 * b2() * b4() * b6();
}

std::string EllipticCurve::str() const {
    std::ostringstream o;
    o << "[" << a1 << "," << a2 << "," << a3 << "," << a4 << "," << a6 << "]";
    return o.str();
}

namespace {

// an integral model with invariants c4, c6, if one exists
bool model_from_c4c6(const mpz_class& c4, const mpz_class& c6, EllipticCurve& out) {
    for (long b2v = -5; b2v <= 6; ++b2v) {
        mpz_class b2 = b2v;
        mpz_class t = b2 * b2 - c4;
        if (t % 24 != 0) continue;
        mpz_class b4 = t / 24;
        mpz_class u = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
        if (u % 216 != 0) continue;
        mpz_class b6 = u / 216;
        long a1 = ((b2v % 2) + 2) % 2;
        mpz_class a3 = b6 % 2;
        if (a3 < 0) a3 += 2;
        if ((b2 - a1) % 4 != 0) continue;
        if ((b4 - a1 * a3) % 2 != 0) continue;
        if ((b6 - a3) % 4 != 0) continue;
        out = EllipticCurve{a1, (b2 - a1) / 4, a3, (b4 - a1 * a3) / 2, (b6 - a3) / 4};
        if (out.c4() == c4 && out.c6() == c6) return true;
    }
    return false;
}

}  // namespace

EllipticCurve minimal_model(const EllipticCurve& E) {
    mpz_class D = E.discriminant();
    if (D == 0) throw ModularDomainError("singular curve");
    mpz_class c4 = E.c4(), c6 = E.c6();
    EllipticCurve cur = E;
    bool changed = true;
    while (changed) {
        changed = false;
        mpz_class Dabs = abs(D);
        // primes with p^12 | D are below |D|^(1/12)
        mpz_class root;
        mpz_root(root.get_mpz_t(), Dabs.get_mpz_t(), 12);
        long bound = root.fits_slong_p() ? root.get_si() : 1000000;
        for (long p = 2; p <= bound; ++p) {
            bool prime = true;
            for (long k = 2; k * k <= p; ++k)
                if (p % k == 0) {
                    prime = false;
                    break;
                }
            if (!prime) continue;
            mpz_class p4, p6, p12;
            mpz_ui_pow_ui(p4.get_mpz_t(), static_cast<unsigned long>(p), 4);
            p6 = p4 * p * p;
            p12 = p6 * p6;
            if (D % p12 != 0 || c4 % p4 != 0 || c6 % p6 != 0) continue;
            EllipticCurve m;
            if (!model_from_c4c6(c4 / p4, c6 / p6, m)) continue;
            c4 /= p4;
            c6 /= p6;
            D /= p12;
            cur = m;
            changed = true;
            break;
        }
    }
    if (cur.c4() != c4) {
        EllipticCurve m;
        if (!model_from_c4c6(c4, c6, m)) throw std::logic_error("lost the integral model");
        cur = m;
    }
    return cur;
}

long count_points(const EllipticCurve& E, long p) {
    auto r = [p](const mpz_class& a) {
        mpz_class t;
        mpz_fdiv_r_ui(t.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
        return t.get_si();
    };
    long a1 = r(E.a1), a2 = r(E.a2), a3 = r(E.a3), a4 = r(E.a4), a6 = r(E.a6);
    long count = 1;
    if (p == 2) {
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y)
                if ((y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) % 2 == 0) ++count;
        return count;
    }
    std::vector<signed char> chi(static_cast<size_t>(p), -1);
    chi[0] = 0;
    for (long y = 1; y < p; ++y) chi[static_cast<size_t>(y * y % p)] = 1;
    for (long x = 0; x < p; ++x) {
        long rhs = ((x * x % p * x + a2 * x % p * x + a4 * x + a6) % p + p) % p;
        long lin = (a1 * x + a3) % p;
        long D = (lin * lin + 4 * rhs) % p;
        count += 1 + chi[static_cast<size_t>(D)];
    }
    return count;
}

std::vector<mpz_class> curve_an(const EllipticCurve& E0, long n_max) {
    if (n_max < 1) throw ModularDomainError("n_max must be at least 1");
    EllipticCurve E = minimal_model(E0);
    mpz_class D = E.discriminant();
    std::vector<mpz_class> a(static_cast<size_t>(n_max + 1));
    std::vector<char> done(static_cast<size_t>(n_max + 1), 0);
    a[1] = 1;
    done[1] = 1;
    std::vector<long> spf(static_cast<size_t>(n_max + 1), 0);
    for (long i = 2; i <= n_max; ++i)
        if (!spf[static_cast<size_t>(i)])
            for (long j = i; j <= n_max; j += i)
                if (!spf[static_cast<size_t>(j)]) spf[static_cast<size_t>(j)] = i;
    for (long p = 2; p <= n_max; ++p) {
        if (spf[static_cast<size_t>(p)] != p) continue;
        bool bad = D % p == 0;
        mpz_class ap = p + 1 - count_points(E, p);
        mpz_class prev = 1, cur = ap;
        long pk = p;
        a[static_cast<size_t>(p)] = ap;
        while (pk <= n_max / p) {
            mpz_class nxt = cur * ap;
            if (!bad) nxt -= p * prev;
            pk *= p;
            a[static_cast<size_t>(pk)] = nxt;
            prev = cur;
            cur = nxt;
        }
    }
    for (long n = 2; n <= n_max; ++n) {
        long p = spf[static_cast<size_t>(n)];
        long m = n, pk = 1;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        if (m > 1) a[static_cast<size_t>(n)] = a[static_cast<size_t>(pk)] * a[static_cast<size_t>(m)];
    }
    return std::vector<mpz_class>(a.begin() + 1, a.end());
}

std::vector<CuspOrder> eta_cusp_orders(const EtaQuotient& e, long N) {
    if (N < 1) throw ModularDomainError("level must be positive");
    for (auto [d, r] : e.exponents())
        if (N % d != 0) throw ModularDomainError("eta index " + std::to_string(d) + " does not divide " + std::to_string(N));
    std::vector<CuspOrder> out;
    for (long c : divisors(N)) {
        long g = std::gcd(c, N / c);
        mpq_class s = 0;
        for (auto [d, r] : e.exponents()) {
            long gd = std::gcd(c, d);
            s += mpq_class(gd * gd * r, d);
        }
        mpq_class ord = s * N / (24 * g * c);
        ord.canonicalize();
        out.push_back({c, euler_phi_l(g), ord});
    }
    return out;
}

bool is_modular_function(const EtaQuotient& e, long N) {
    long w = 0, s1 = 0, s2 = 0;
    mpq_class prod = 1;
    for (auto [d, r] : e.exponents()) {
        if (N % d) return false;
        w += r;
        s1 += d * r;
        s2 += (N / d) * r;
    }
    if (w != 0 || s1 % 24 || s2 % 24) return false;
    // prod d^r_d must be a rational square: every prime exponent even
    std::map<long, long> pe;
    for (auto [d, r] : e.exponents())
        for (auto [p, k] : factorize(d)) pe[p] += k * r;
    for (auto [p, k] : pe)
        if (k % 2) return false;
    return true;
}

std::vector<EtaQuotient> enumerate_quotients(long N, long m, long max_exponent) {
    if (m < 0) throw ModularDomainError("pole order bound must be nonnegative");
    auto D = divisors(N);
    size_t n = D.size();
    // Ligozat matrix A[c][d]: order at 1/c per unit exponent of eta_d
    std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n));
    for (size_t i = 0; i < n; ++i) {
        long c = D[i], g = std::gcd(c, N / c);
        for (size_t j = 0; j < n; ++j) {
            long gd = std::gcd(c, D[j]);
            A[i][j] = mpq_class(N * gd * gd, 24 * g * c * D[j]);
            A[i][j].canonicalize();
        }
    }
    // invert by Gauss-Jordan
    std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (A[p][c] == 0) ++p;
        std::swap(A[p], A[c]);
        std::swap(inv[p], inv[c]);
        mpq_class f = 1 / A[c][c];
        for (size_t j = 0; j < n; ++j) {
            A[c][j] *= f;
            inv[c][j] *= f;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || A[i][c] == 0) continue;
            mpq_class g = A[i][c];
            for (size_t j = 0; j < n; ++j) {
                A[i][j] -= g * A[c][j];
                inv[i][j] -= g * inv[c][j];
            }
        }
    }
    std::vector<long> weight(n);
    for (size_t i = 0; i < n; ++i) weight[i] = euler_phi_l(std::gcd(D[i], N / D[i]));
    size_t inf = n - 1;  // D is sorted, D.back() = N
    std::vector<long> v(n, 0);
    std::vector<EtaQuotient> out;
    std::function<void(size_t, long)> rec = [&](size_t i, long budget) {
        if (i == inf) {
            long total = m - budget;
            v[inf] = -total;
            std::map<long, long> r;
            for (size_t j = 0; j < n; ++j) {
                mpq_class x = 0;
                for (size_t k = 0; k < n; ++k)
                    if (v[k]) x += inv[j][k] * v[k];
                if (x.get_den() != 1) return;
                long rj = x.get_num().get_si();
                if (std::labs(rj) > max_exponent) return;
                if (rj) r[D[j]] = rj;
            }
            EtaQuotient e(r);
            if (is_modular_function(e, N)) out.push_back(e);
            return;
        }
        for (long k = 0; k * weight[i] <= budget; ++k) {
            v[i] = k;
            rec(i + 1, budget - k * weight[i]);
        }
        v[i] = 0;
    };
    rec(0, m);
    std::sort(out.begin(), out.end());
    return out;
}

long squarefree_part(long n) {
    if (n < 1) throw ModularDomainError("n must be positive");
    long r = 1;
    for (auto [p, e] : factorize(n))
        if (e % 2) r *= p;
    return r;
}

bool hauptmodul_parity(long n) { return 6 % squarefree_part(n) == 0; }

}  // namespace etaq
