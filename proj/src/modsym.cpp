#include "etaq/modsym.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace etaq {

namespace {

using Vec = std::vector<mpq_class>;

long mod(long a, long n) { return ((a % n) + n) % n; }

// reduced row echelon form in place; returns pivot columns
std::vector<long> rref(std::vector<Vec>& m) {
    std::vector<long> piv;
    if (m.empty()) return piv;
    size_t cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        mpq_class inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c];
            for (size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        piv.push_back(static_cast<long>(c));
        ++r;
    }
    m.resize(r);
    return piv;
}

}  // namespace

std::vector<std::array<long, 4>> merel_matrices(long n) {
    std::vector<std::array<long, 4>> out;
    for (long a = 1; a <= n; ++a) {
        if (n % a == 0)
            for (long c = 0; c < n / a; ++c) out.push_back({a, 0, c, n / a});
        // b >= 1: c = (a d - n) / b with 0 <= c < d, so n / a <= d < n / (a - b)
        for (long b = 1; b < a; ++b) {
            long dmin = (n + a - 1) / a;
            long dmax = (n - 1) / (a - b);
            for (long d = dmin; d <= dmax; ++d) {
                long t = a * d - n;
                if (t % b == 0 && t / b < d) out.push_back({a, b, t / b, d});
            }
        }
    }
    return out;
}

ModularSymbols::ModularSymbols(long N) : N_(N) {
    if (N < 1) throw std::domain_error("level must be positive");
    // P^1(Z/N): canonical representative = smallest (c, d) in its unit orbit
    std::vector<long> units;
    for (long u = 1; u <= N; ++u)
        if (std::gcd(u, N) == 1) units.push_back(u % N);
    table_.assign(static_cast<size_t>(N * N), -1);
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            if (table_[static_cast<size_t>(c * N + d)] >= 0) continue;
            long id = static_cast<long>(syms_.size());
            syms_.push_back({c, d});
            for (long u : units) table_[static_cast<size_t>(mod(u * c, N) * N + mod(u * d, N))] = id;
        }
    long mu = static_cast<long>(syms_.size());

    // two-term relations x + x sigma = 0, (c:d) sigma = (d:-c)
    std::vector<long> gen(static_cast<size_t>(mu), -1), sgn(static_cast<size_t>(mu), 0);
    long ngen = 0;
    std::vector<long> gen_sym;
    for (long x = 0; x < mu; ++x) {
        if (sgn[static_cast<size_t>(x)] != 0 || gen[static_cast<size_t>(x)] == -2) continue;
        long y = index_of(syms_[static_cast<size_t>(x)][1], -syms_[static_cast<size_t>(x)][0]);
        if (y == x) {
            gen[static_cast<size_t>(x)] = -2;  // zero
            continue;
        }
        gen[static_cast<size_t>(x)] = ngen;
        sgn[static_cast<size_t>(x)] = 1;
        gen[static_cast<size_t>(y)] = ngen;
        sgn[static_cast<size_t>(y)] = -1;
        gen_sym.push_back(x);
        ++ngen;
    }

    // three-term relations x + x tau + x tau^2 = 0, (c:d) tau = (d:-c-d)
    std::map<long, std::map<long, mpq_class>> pivrows;  // pivot gen -> (gen -> coefficient), pivot = -sum
    auto reduce = [&](std::map<long, mpq_class> r) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = r.begin(); it != r.end(); ++it) {
                auto pr = pivrows.find(it->first);
                if (pr == pivrows.end()) continue;
                mpq_class f = it->second;
                r.erase(it);
                for (const auto& [g, v] : pr->second) {
                    mpq_class nv = r[g] - f * v;
                    if (nv == 0) r.erase(g);
                    else r[g] = nv;
                }
                changed = true;
                break;
            }
        }
        return r;
    };
    std::vector<char> seen(static_cast<size_t>(mu), 0);
    for (long x = 0; x < mu; ++x) {
        if (seen[static_cast<size_t>(x)]) continue;
        long orbit[3];
        orbit[0] = x;
        for (int k = 1; k < 3; ++k) {
            const auto& s = syms_[static_cast<size_t>(orbit[k - 1])];
            orbit[k] = index_of(s[1], -s[0] - s[1]);
        }
        std::map<long, mpq_class> rel;
        for (long o : orbit) {
            seen[static_cast<size_t>(o)] = 1;
            long g = gen[static_cast<size_t>(o)];
            if (g < 0) continue;
            rel[g] += sgn[static_cast<size_t>(o)];
        }
        for (auto it = rel.begin(); it != rel.end();)
            it = it->second == 0 ? rel.erase(it) : std::next(it);
        rel = reduce(rel);
        if (rel.empty()) continue;
        long p = rel.rbegin()->first;
        mpq_class lead = rel[p];
        rel.erase(p);
        for (auto& [g, v] : rel) v /= lead;
        // p = -sum rel; substitute into existing pivot rows
        for (auto& [q, row] : pivrows) {
            auto hit = row.find(p);
            if (hit == row.end()) continue;
            mpq_class f = hit->second;
            row.erase(hit);
            for (const auto& [g, v] : rel) {
                mpq_class nv = row[g] - f * v;
                if (nv == 0) row.erase(g);
                else row[g] = nv;
            }
        }
        pivrows[p] = rel;
    }
    std::vector<long> free_index(static_cast<size_t>(ngen), -1);
    for (long g = 0; g < ngen; ++g)
        if (!pivrows.count(g)) {
            free_index[static_cast<size_t>(g)] = static_cast<long>(free_.size());
            free_.push_back(gen_sym[static_cast<size_t>(g)]);
        }
    long m = static_cast<long>(free_.size());
    std::vector<Vec> gen_coord(static_cast<size_t>(ngen), Vec(static_cast<size_t>(m)));
    for (long g = 0; g < ngen; ++g) {
        if (free_index[static_cast<size_t>(g)] >= 0) {
            gen_coord[static_cast<size_t>(g)][static_cast<size_t>(free_index[static_cast<size_t>(g)])] = 1;
        } else {
            for (const auto& [h, v] : pivrows[g]) gen_coord[static_cast<size_t>(g)][static_cast<size_t>(free_index[static_cast<size_t>(h)])] = -v;
        }
    }
    coord_.assign(static_cast<size_t>(mu), Vec(static_cast<size_t>(m)));
    for (long x = 0; x < mu; ++x) {
        long g = gen[static_cast<size_t>(x)];
        if (g < 0) continue;
        coord_[static_cast<size_t>(x)] = gen_coord[static_cast<size_t>(g)];
        if (sgn[static_cast<size_t>(x)] < 0)
            for (auto& v : coord_[static_cast<size_t>(x)]) v = -v;
    }

    // boundary map on the basis symbols: g{0, oo} -> [a/c] - [b/d]
    std::vector<std::map<long, long>> bnd(static_cast<size_t>(m));
    for (long i = 0; i < m; ++i) {
        const auto& s = syms_[static_cast<size_t>(free_[static_cast<size_t>(i)])];
        long c = s[0], d = s[1];
        if (c == 0) c = N;
        if (d == 0) d = N;
        while (std::gcd(c, d) != 1) d += N;
        // a d - b c = 1
        mpz_class g, x, y, cz = c, dz = d;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), dz.get_mpz_t(), cz.get_mpz_t());
        mpz_class a = x, b = -y;
        bnd[static_cast<size_t>(i)][cusp_class(a, cz)] += 1;
        bnd[static_cast<size_t>(i)][cusp_class(b, dz)] -= 1;
    }
    long nc = static_cast<long>(cusps_.size());
    // kernel of the boundary map: rref of the boundary matrix transposed
    std::vector<Vec> bm(static_cast<size_t>(nc), Vec(static_cast<size_t>(m)));
    for (long i = 0; i < m; ++i)
        for (auto [k, v] : bnd[static_cast<size_t>(i)]) bm[static_cast<size_t>(k)][static_cast<size_t>(i)] += v;
    auto piv = rref(bm);
    std::vector<char> is_piv(static_cast<size_t>(m), 0);
    for (long p : piv) is_piv[static_cast<size_t>(p)] = 1;
    for (long fcol = 0; fcol < m; ++fcol) {
        if (is_piv[static_cast<size_t>(fcol)]) continue;
        Vec v(static_cast<size_t>(m));
        v[static_cast<size_t>(fcol)] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[static_cast<size_t>(piv[r])] = -bm[r][static_cast<size_t>(fcol)];
        cusp_basis_.push_back(v);
    }
    cusp_pivots_ = rref(cusp_basis_);
}

long ModularSymbols::index_of(long c, long d) const {
    long r = table_[static_cast<size_t>(mod(c, N_) * N_ + mod(d, N_))];
    return r;
}

long ModularSymbols::cusp_class(const mpz_class& p0, const mpz_class& q0) {
    mpz_class p = p0, q = q0;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    mpz_class g = gcd(p, q);
    if (g != 0) {
        p /= g;
        q /= g;
    }
    if (q == 0) p = 1;
    auto sinv = [](const mpz_class& a, const mpz_class& m) {
        if (m == 0) return mpz_class(a);
        if (m == 1) return mpz_class(0);
        mpz_class r;
        mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        return r;
    };
    mpz_class s1 = sinv(p, q);
    for (size_t i = 0; i < cusps_.size(); ++i) {
        const auto& [p2, q2] = cusps_[i];
        mpz_class s2 = sinv(p2, q2);
        mpz_class mdl = gcd(mpz_class(q * q2), mpz_class(N_));
        mpz_class diff = s1 * q2 - s2 * q;
        if (diff % mdl == 0) return static_cast<long>(i);
    }
    cusps_.push_back({p, q});
    return static_cast<long>(cusps_.size()) - 1;
}

ModularSymbols::Vec ModularSymbols::symbol_vector(long idx) const { return coord_[static_cast<size_t>(idx)]; }

ModularSymbols::Vec ModularSymbols::hecke_on_symbol(long idx, const std::vector<std::array<long, 4>>& mats) const {
    Vec out(static_cast<size_t>(dimension()));
    const auto& s = syms_[static_cast<size_t>(idx)];
    std::vector<long> hits(syms_.size(), 0);
    for (const auto& h : mats) {
        long c = s[0] * h[0] + s[1] * h[2];
        long d = s[0] * h[1] + s[1] * h[3];
        long j = index_of(c, d);
        if (j >= 0) ++hits[static_cast<size_t>(j)];
    }
    for (size_t j = 0; j < hits.size(); ++j) {
        if (!hits[j]) continue;
        const auto& v = coord_[j];
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0) out[k] += hits[j] * v[k];
    }
    return out;
}

std::vector<std::vector<mpq_class>> ModularSymbols::hecke_cuspidal(long n) const {
    long m = dimension();
    std::vector<Vec> img(static_cast<size_t>(m));
    std::vector<char> need(static_cast<size_t>(m), 0);
    auto mats = merel_matrices(n);
    for (const auto& b : cusp_basis_)
        for (long k = 0; k < m; ++k)
            if (b[static_cast<size_t>(k)] != 0) need[static_cast<size_t>(k)] = 1;
    for (long k = 0; k < m; ++k)
        if (need[static_cast<size_t>(k)]) img[static_cast<size_t>(k)] = hecke_on_symbol(free_[static_cast<size_t>(k)], mats);
    std::vector<Vec> out;
    for (const auto& b : cusp_basis_) {
        Vec t(static_cast<size_t>(m));
        for (long k = 0; k < m; ++k) {
            if (b[static_cast<size_t>(k)] == 0) continue;
            for (long j = 0; j < m; ++j)
                if (img[static_cast<size_t>(k)][static_cast<size_t>(j)] != 0) t[static_cast<size_t>(j)] += b[static_cast<size_t>(k)] * img[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
        // coordinates in the echelon basis are read off at the pivots
        Vec row(cusp_basis_.size());
        for (size_t i = 0; i < cusp_pivots_.size(); ++i) row[i] = t[static_cast<size_t>(cusp_pivots_[i])];
        out.push_back(row);
    }
    return out;
}

CuspFormBasis cusp_form_basis(long N, long B) {
    ModularSymbols ms(N);
    CuspFormBasis out;
    out.N = N;
    long d = ms.cuspidal_dimension();
    if (d == 0) {
        out.precision = B;
        return out;
    }
    long g = d / 2;
    // Sturm bound for weight 2: index / 6
    long index = N;
    {
        long m = N;
        for (long p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                index = index / p * (p + 1);
                while (m % p == 0) m /= p;
            }
        if (m > 1) index = index / m * (m + 1);
    }
    long Bw = std::max(B, index / 6 + 2);
    // Hecke matrices at primes only; T_n on a vector follows from multiplicativity
    std::vector<long> spf(static_cast<size_t>(Bw), 0);
    for (long i = 2; i < Bw; ++i)
        if (!spf[static_cast<size_t>(i)])
            for (long j = i; j < Bw; j += i)
                if (!spf[static_cast<size_t>(j)]) spf[static_cast<size_t>(j)] = i;
    std::vector<std::vector<Vec>> T(static_cast<size_t>(Bw));
    for (long p = 2; p < Bw; ++p)
        if (spf[static_cast<size_t>(p)] == p) T[static_cast<size_t>(p)] = ms.hecke_cuspidal(p);
    auto apply = [d](const Vec& v, const std::vector<Vec>& A) {
        Vec r(static_cast<size_t>(d));
        for (long i = 0; i < d; ++i) {
            if (v[static_cast<size_t>(i)] == 0) continue;
            for (long j = 0; j < d; ++j)
                if (A[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
                    r[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * A[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        return r;
    };
    // x generic: f_j = sum_n (x T_n)_j q^n spans S_2 when x generates the Hecke module
    for (long seed = 1; seed < 20; ++seed) {
        Vec x(static_cast<size_t>(d));
        unsigned long st = static_cast<unsigned long>(seed) * 2654435761UL + 12345;
        for (long i = 0; i < d; ++i) {
            st = st * 6364136223846793005UL + 1442695040888963407UL;
            x[static_cast<size_t>(i)] = static_cast<long>((st >> 33) % 19) - 9;
        }
        std::vector<Vec> w(static_cast<size_t>(Bw));
        w[1] = x;
        for (long n = 2; n < Bw; ++n) {
            long p = spf[static_cast<size_t>(n)];
            w[static_cast<size_t>(n)] = apply(w[static_cast<size_t>(n / p)], T[static_cast<size_t>(p)]);
            if (n % (p * p) == 0 && N % p != 0) {
                const Vec& u = w[static_cast<size_t>(n / (p * p))];
                for (long j = 0; j < d; ++j) w[static_cast<size_t>(n)][static_cast<size_t>(j)] -= p * u[static_cast<size_t>(j)];
            }
        }
        std::vector<Vec> mat(static_cast<size_t>(d), Vec(static_cast<size_t>(Bw)));
        for (long n = 1; n < Bw; ++n)
            for (long j = 0; j < d; ++j) mat[static_cast<size_t>(j)][static_cast<size_t>(n)] = w[static_cast<size_t>(n)][static_cast<size_t>(j)];
        auto piv = rref(mat);
        if (static_cast<long>(piv.size()) != g) continue;
        out.pivots = piv;
        for (auto& r : mat) {
            r.resize(static_cast<size_t>(B));
            out.rows.push_back(r);
        }
        out.precision = B;
        return out;
    }
    throw std::runtime_error("could not find a Hecke generator for S_2 at level " + std::to_string(N));
}

}  // namespace etaq
