#include "etaq/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "etaq/special.hpp"

namespace etaq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

long inv_mod(long a, long m) {
    long old_r = ((a % m) + m) % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        long q = old_r / r;
        long t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw DomainError("not invertible");
    return ((old_s % m) + m) % m;
}

// units r < c/2 (all units for c <= 2) and s = (N r)^-1 mod c
struct UnitTable {
    std::vector<uint32_t> r, s;
};

void build_units(long c, long N, UnitTable& t) {
    t.r.clear();
    t.s.clear();
    if (c == 1) {
        t.r.push_back(0);
        t.s.push_back(0);
        return;
    }
    long lim = c <= 2 ? c : (c - 1) / 2;
    std::vector<uint64_t> pre;
    for (long r = 1; r <= lim; ++r)
        if (std::gcd(r, c) == 1) t.r.push_back(static_cast<uint32_t>(r));
    size_t m = t.r.size();
    t.s.resize(m);
    // batch inversion via prefix products
    pre.resize(m);
    uint64_t uc = static_cast<uint64_t>(c);
    uint64_t acc = 1;
    for (size_t i = 0; i < m; ++i) {
        acc = (acc * t.r[i]) % uc;
        pre[i] = acc;
    }
    uint64_t inv = static_cast<uint64_t>(inv_mod(static_cast<long>(acc), c));
    uint64_t invN = static_cast<uint64_t>(inv_mod(N % c, c));
    for (size_t i = m; i-- > 0;) {
        uint64_t ri = i == 0 ? inv : (inv * pre[i - 1]) % uc;
        inv = (inv * t.r[i]) % uc;
        t.s[i] = static_cast<uint32_t>((ri * invN) % uc);
    }
}

class UnitCache {
public:
    static constexpr long kMaxCachedC = 2048;
    const UnitTable* get(long N, long c) {
        if (c > kMaxCachedC) return nullptr;
        std::lock_guard<std::mutex> lk(mu_);
        auto& v = tables_[N];
        if (!v) v = std::make_shared<std::vector<std::unique_ptr<UnitTable>>>(kMaxCachedC + 1);
        auto& slot = (*v)[static_cast<size_t>(c)];
        if (!slot) {
            slot = std::make_unique<UnitTable>();
            build_units(c, N, *slot);
        }
        if (tables_.size() > 6) {
            for (auto it = tables_.begin(); it != tables_.end();) {
                if (it->first != N)
                    it = tables_.erase(it);
                else
                    ++it;
            }
        }
        return slot.get();
    }

private:
    std::mutex mu_;
    std::map<long, std::shared_ptr<std::vector<std::unique_ptr<UnitTable>>>> tables_;
};

UnitCache& unit_cache() {
    static UnitCache c;
    return c;
}

inline uint32_t phase(uint64_t Mc, uint64_t nc, uint32_t r, uint32_t s, uint64_t c) {
    // (M r - n s) mod c with Mc = M mod c, nc = (c - n mod c) mod c
    return static_cast<uint32_t>((Mc * r + nc * s) % c);
}

double kloosterman_double(long c, const UnitTable& t, long M, long n, const std::vector<double>& costab) {
    if (c == 1) return 1.0;
    uint64_t uc = static_cast<uint64_t>(c);
    uint64_t Mc = static_cast<uint64_t>(M % c), nc = static_cast<uint64_t>((c - n % c) % c);
    double sum = 0;
    size_t m = t.r.size();
    for (size_t i = 0; i < m; ++i) sum += costab[phase(Mc, nc, t.r[i], t.s[i], uc)];
    return c <= 2 ? sum : 2 * sum;
}

std::vector<long> histogram_from(long c, const UnitTable& t, long M, long n) {
    std::vector<long> cnt(static_cast<size_t>(c), 0);
    if (c == 1) {
        cnt[0] = 1;
        return cnt;
    }
    uint64_t uc = static_cast<uint64_t>(c);
    uint64_t Mc = static_cast<uint64_t>(M % c), nc = static_cast<uint64_t>((c - n % c) % c);
    for (size_t i = 0; i < t.r.size(); ++i) {
        uint32_t j = phase(Mc, nc, t.r[i], t.s[i], uc);
        cnt[j] += 1;
        if (c > 2) cnt[(c - j) % c] += 1;
    }
    return cnt;
}

Real kloosterman_mp(long c, const std::vector<long>& cnt, mpfr_prec_t bits) {
    Real sum(0L, bits);
    if (c == 1) return Real(cnt[0], bits);
    Real two_pi_c = 2 * pi(bits) / c;
    for (long j = 0; j <= c / 2; ++j) {
        long k = cnt[static_cast<size_t>(j)];
        if (j != 0 && 2 * j != c) k += cnt[static_cast<size_t>(c - j)];
        if (k == 0) continue;
        if (j == 0) {
            sum += k;
        } else if (2 * j == c) {
            sum -= k;
        } else {
            sum += cos(two_pi_c * j) * k;
        }
    }
    return sum;
}

long euler_phi(long c) {
    long r = c, m = c;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            r -= r / p;
        }
    }
    if (m > 1) r -= r / m;
    return r;
}

// log of 2 pi I1(x) / (B c)
double log_term_bound(double x, double B, long c) {
    double li1;
    if (x < 50)
        li1 = std::log(std::max(std::cyl_bessel_i(1.0, x), 1e-300));
    else
        li1 = x - 0.5 * std::log(kTwoPi * x);
    return std::log(kTwoPi / (B * static_cast<double>(c))) + li1;
}

struct TermData {
    long M;
    mpq_class coef;
    double coef_d;
    double A;  // 4 pi sqrt(n M / N)
    double B;  // sqrt(n N / M)
    Real A_mp, B_mp;
};

}  // namespace

std::vector<long> kloosterman_histogram(long c, long N, long M, long n) {
    if (c <= 0) throw DomainError("kloosterman needs c > 0");
    if (std::gcd(c, N) != 1) throw DomainError("kloosterman needs gcd(c, N) = 1");
    UnitTable t;
    build_units(c, N, t);
    return histogram_from(c, t, M, n);
}

Real kloosterman(long c, long N, long M, long n, long prec) {
    auto cnt = kloosterman_histogram(c, N, M, n);
    Real k = kloosterman_mp(c, cnt, bits_for_digits(prec + 10));
    if (abs(k).to_double() > static_cast<double>(euler_phi(c)) + 1e-9)
        throw std::logic_error("kloosterman sum exceeds its term count");
    return Real(k, bits_for_digits(prec));
}

RademacherResult rademacher_combination(long N, const std::vector<RadTerm>& terms, long n, long prec,
                                        const TruncationPolicy& policy, const SnapSpec& snap) {
    if (N < 1 || n < 1) throw DomainError("Rademacher sums need N >= 1 and n >= 1");
    if (terms.empty()) throw DomainError("empty combination");
    if (policy.c_max_initial < 16 || policy.stability_blocks < 2) throw DomainError("invalid truncation policy");
    double lead = 0, scale = 0;
    std::vector<TermData> td;
    for (const auto& t : terms) {
        if (t.M < 1) throw DomainError("Rademacher sums need M >= 1");
        TermData d;
        d.M = t.M;
        d.coef = t.coef;
        d.coef_d = t.coef.get_d();
        d.A = 2 * kTwoPi * std::sqrt(static_cast<double>(n) * t.M / N);
        d.B = std::sqrt(static_cast<double>(n) * N / t.M);
        lead = std::max(lead, d.A);
        scale += std::fabs(d.coef_d) * kTwoPi * kTwoPi * static_cast<double>(t.M) / N;
        td.push_back(std::move(d));
    }
    // working precision from the leading term
    long lead_digits = static_cast<long>(lead / std::log(10.0)) + 1;
    mpfr_prec_t wbits = bits_for_digits(lead_digits + prec + 15);
    Real pi_w = pi(wbits);
    for (auto& d : td) {
        mpq_class x(mpz_class(n * d.M), mpz_class(N));
        x.canonicalize();
        Real r = sqrt(Real(x, wbits));
        d.A_mp = 4 * pi_w * r;
        d.B_mp = Real(n, wbits) / r;
    }
    double tail_tol = policy.tail_tolerance * std::max(1.0, scale);
    // absolute accuracy target for individual terms
    double log_eps = -static_cast<double>(prec) * std::log(10.0);
    if (!policy.all_terms_mpfr) log_eps = std::max(log_eps, std::log(tail_tol * 1e-6));

    Real total(0L, wbits);
    long double dsum = 0, dcomp = 0;
    UnitTable local;
    std::vector<double> costab;
    std::deque<double> recent;
    long c_min = policy.c_max_initial;
    if (!policy.fixed_cutoff) {
        long need = static_cast<long>(4 * lead) + 1;
        c_min = std::max(c_min, need);
    }
    c_min = (c_min + policy.block - 1) / policy.block * policy.block;
    long budget = std::max(policy.c_budget, c_min);
    long c = 1;
    RademacherResult res;
    while (true) {
        long c_end = c + policy.block - 1;
        if (policy.fixed_cutoff) c_end = std::min(c_end, policy.c_max_initial);
        long double block_sum = 0;
        for (; c <= c_end; ++c) {
            if (std::gcd(c, N) != 1) continue;
            const UnitTable* ut = unit_cache().get(N, c);
            if (!ut) {
                build_units(c, N, local);
                ut = &local;
            }
            bool tab_ready = false;
            for (const auto& d : td) {
                double x = d.A / static_cast<double>(c);
                // bound on the c-th term with phi(c) Kloosterman terms
                double ltb = std::log(std::fabs(d.coef_d)) + log_term_bound(d.A / static_cast<double>(c), d.B, c) +
                             std::log(static_cast<double>(std::max(1L, euler_phi(c))));
                bool use_mp = policy.all_terms_mpfr || ltb - 34.0 > log_eps;  // double error ~ e^-34 relative
                if (use_mp) {
                    long digits = static_cast<long>((ltb - log_eps) / std::log(10.0)) + 12;
                    mpfr_prec_t b = policy.all_terms_mpfr ? wbits : std::min(wbits, bits_for_digits(std::max(digits, 20L)));
                    auto cnt = histogram_from(c, *ut, d.M, n);
                    Real K = kloosterman_mp(c, cnt, b);
                    Real arg = Real(d.A_mp, b) / c;
                    Real term = 2 * pi(b) * bessel_i1(arg) / (Real(d.B_mp, b) * c) * K;
                    term *= Real(d.coef, b);
                    total += term;
                    block_sum += static_cast<long double>(term.to_double());
                } else {
                    if (!tab_ready) {
                        costab.resize(static_cast<size_t>(c));
                        for (long j = 0; j < c; ++j) costab[static_cast<size_t>(j)] = std::cos(kTwoPi * j / c);
                        tab_ready = true;
                    }
                    double K = kloosterman_double(c, *ut, d.M, n, costab);
                    double i1 = std::cyl_bessel_i(1.0, x);
                    long double term = static_cast<long double>(d.coef_d * kTwoPi * i1 / (d.B * c) * K);
                    long double y = term - dcomp;
                    long double t2 = dsum + y;
                    dcomp = (t2 - dsum) - y;
                    dsum = t2;
                    block_sum += term;
                }
            }
        }
        long c_done = c - 1;
        recent.push_back(std::fabs(static_cast<double>(block_sum)));
        if (static_cast<long>(recent.size()) > policy.stability_blocks) recent.pop_front();

        if (policy.fixed_cutoff && c_done >= policy.c_max_initial) break;
        if (!policy.fixed_cutoff && c_done >= c_min) {
            bool stable = static_cast<long>(recent.size()) == policy.stability_blocks &&
                          std::all_of(recent.begin(), recent.end(), [&](double v) { return v < tail_tol; });
            if (stable) {
                if (snap.mode == SnapMode::none) break;
                Real v = total + Real(static_cast<double>(dsum), wbits);
                Real margin(snap.tolerance, wbits);
                long md = snap.mode == SnapMode::integer ? 1 : snap.max_denominator;
                auto rc = rationalize(v, md, margin);
                if (rc) {
                    res.rational = rc;
                    break;
                }
                if (c_done >= budget) {
                    auto near = rationalize(v, md, Real(1e9, wbits));
                    double dist = near ? near->distance.to_double() : 1.0;
                    throw NotNearInteger("value not within tolerance of a small-denominator rational at n = " + std::to_string(n),
                                         n, dist, v);
                }
                c_min = std::min(budget, 2 * c_done);
            }
        }
        if (!policy.fixed_cutoff && c_done >= budget) {
            Real v = total + Real(static_cast<double>(dsum), wbits);
            throw UnstableTruncation("truncation did not stabilise within the c budget", v, c_done);
        }
    }
    res.value = total + Real(static_cast<double>(dsum), wbits);
    res.c_used = c - 1;
    double te = scale / static_cast<double>(res.c_used);
    for (double v : recent) te = std::max(te, v);
    res.tail_estimate = Real(te, 64);
    return res;
}

RademacherResult rademacher_sum(const RademacherQuery& q) {
    if (q.N < 1 || q.M < 1) throw DomainError("Rademacher sums need N, M >= 1");
    if (q.n < 1) throw DomainError("n = 0 is excluded");
    return rademacher_combination(q.N, {{q.M, 1}}, q.n, q.prec, q.policy);
}

// smallest denominator q whose nearest p/q lies within margin/q^2; a wide
// margin and a large q otherwise certify almost anything
std::optional<RationalCertificate> rationalize(const Real& v, long max_denominator, const Real& margin) {
    if (!(margin.sign() > 0)) throw DomainError("rationalize needs a positive margin");
    if (max_denominator < 1) throw DomainError("rationalize needs max_denominator >= 1");
    mpfr_prec_t b = v.prec();
    for (long q = 1; q <= max_denominator; ++q) {
        Real scaled = v * Real(q, b);
        mpz_class p = scaled.round_to_z();
        mpq_class r(p, q);
        r.canonicalize();
        if (r.get_den() != q) continue;  // seen at a smaller q
        Real d = abs(v - Real(r, b));
        if (d * Real(q * q, b) < margin) return RationalCertificate{r, d};
    }
    return std::nullopt;
}

std::vector<RademacherResult> rademacher_row(long N, long M, const std::vector<long>& n_range, long prec,
                                             const TruncationPolicy& policy, const SnapSpec& snap, int jobs) {
    if (n_range.empty()) throw DomainError("empty n range");
    std::vector<std::optional<RademacherResult>> out(n_range.size());
    std::vector<std::exception_ptr> errs(n_range.size());
    auto work = [&](size_t i) {
        try {
            out[i] = rademacher_combination(N, {{M, 1}}, n_range[i], prec, policy, snap);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    if (jobs <= 1) {
        for (size_t i = 0; i < n_range.size(); ++i) work(i);
    } else {
        std::vector<std::thread> th;
        for (int j = 0; j < jobs; ++j)
            th.emplace_back([&, j] {
                for (size_t i = static_cast<size_t>(j); i < n_range.size(); i += static_cast<size_t>(jobs)) work(i);
            });
        for (auto& t : th) t.join();
    }
    std::vector<RademacherResult> r;
    for (size_t i = 0; i < n_range.size(); ++i) {
        if (errs[i]) std::rethrow_exception(errs[i]);
        r.push_back(std::move(*out[i]));
    }
    return r;
}

namespace {

template <class Out, class Fn>
std::vector<Out> parallel_map(long n_max, int jobs, Fn fn) {
    std::vector<Out> out(static_cast<size_t>(n_max));
    std::vector<std::exception_ptr> errs(static_cast<size_t>(n_max));
    auto work = [&](long n) {
        try {
            out[static_cast<size_t>(n - 1)] = fn(n);
        } catch (...) {
            errs[static_cast<size_t>(n - 1)] = std::current_exception();
        }
    };
    if (jobs <= 1) {
        for (long n = 1; n <= n_max; ++n) work(n);
    } else {
        std::vector<std::thread> th;
        for (int j = 0; j < jobs; ++j)
            th.emplace_back([&, j] {
                for (long n = 1 + j; n <= n_max; n += jobs) work(n);
            });
        for (auto& t : th) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace

std::vector<mpz_class> rademacher_integer_row(long N, const std::vector<RadTerm>& terms, long n_max, long prec,
                                              const TruncationPolicy& policy, int jobs, double tolerance) {
    SnapSpec snap{SnapMode::integer, 1, tolerance};
    return parallel_map<mpz_class>(n_max, jobs, [&](long n) {
        auto r = rademacher_combination(N, terms, n, prec, policy, snap);
        return mpz_class(r.rational->value.get_num());
    });
}

std::vector<mpq_class> rademacher_rational_row(long N, const std::vector<RadTerm>& terms, long n_max, long prec,
                                               long max_denominator, const TruncationPolicy& policy, int jobs,
                                               double tolerance) {
    SnapSpec snap{SnapMode::rational, max_denominator, tolerance};
    return parallel_map<mpq_class>(n_max, jobs, [&](long n) {
        auto r = rademacher_combination(N, terms, n, prec, policy, snap);
        return r.rational->value;
    });
}

}  // namespace etaq
