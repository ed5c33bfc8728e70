#include "etaq/workbench.hpp"

#include <algorithm>
#include <chrono>

namespace etaq {

namespace {

long round_up(long B) { return std::max(64L, (B + 63) / 64 * 64); }

QSeries integer_series(const std::vector<mpz_class>& v, long K) {
    // v[k-1] is the coefficient of q^k
    std::vector<mpz_class> num(static_cast<size_t>(K));
    for (long k = 1; k < K && k <= static_cast<long>(v.size()); ++k) num[static_cast<size_t>(k)] = v[static_cast<size_t>(k - 1)];
    return QSeries(0, num);
}

// first coefficient of s with exponent below K that is nonzero
std::optional<std::pair<long, mpq_class>> first_nonzero(const QSeries& s, long K) {
    for (long k = 0; k < s.order(); ++k) {
        long e24 = s.offset24() + 24 * k;
        if (e24 >= 24 * K) break;
        mpq_class c = s.coeff(k);
        if (c != 0) return std::make_pair(e24 >= 0 ? e24 / 24 : -((-e24 + 23) / 24), c);
    }
    return std::nullopt;
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// same space, reduced at the given columns instead of the leading ones
CuspFormBasis repivot(const CuspFormBasis& b, const std::vector<long>& cols) {
    size_t g = cols.size();
    std::vector<std::vector<mpq_class>> rows = b.rows;
    for (size_t i = 0; i < g; ++i) {
        size_t p = i;
        while (p < g && rows[p][static_cast<size_t>(cols[i])] == 0) ++p;
        if (p == g) throw RegistryError("gap set is not a valid pivot set at level " + std::to_string(b.N));
        std::swap(rows[p], rows[i]);
        mpq_class f = rows[i][static_cast<size_t>(cols[i])];
        for (auto& x : rows[i]) x /= f;
        for (size_t k = 0; k < g; ++k) {
            if (k == i) continue;
            mpq_class h = rows[k][static_cast<size_t>(cols[i])];
            if (h == 0) continue;
            for (size_t m = 0; m < rows[k].size(); ++m) rows[k][m] -= h * rows[i][m];
        }
    }
    CuspFormBasis out = b;
    out.rows = rows;
    out.pivots = cols;
    return out;
}

}  // namespace

mpq_class SubtractionScheme::c(long r, long M) const {
    auto it = coef.find(r);
    if (it == coef.end()) return 0;
    if (M >= precision) throw std::logic_error("scheme coefficient requested beyond its precision");
    return it->second[static_cast<size_t>(M)];
}

std::vector<RadTerm> SubtractionScheme::terms(long M) const {
    std::map<long, mpq_class> t;
    t[M] += 1;
    for (long r : gaps) t[r] -= c(r, M);
    std::vector<RadTerm> out;
    for (auto& [m, v] : t)
        if (v != 0) out.push_back({m, v});
    return out;
}

Workbench::Workbench(Registry reg, WorkbenchOptions opt) : reg_(std::move(reg)), opt_(opt) {}

QSeries Workbench::form_series(const std::string& name, long K) {
    auto it = form_cache_.find(name);
    if (it != form_cache_.end() && it->second.horizon24() >= 24 * K) return truncate_at(it->second, K);
    const FormEntry* f = reg_.form(name);
    if (!f) throw ExprError("unknown form '" + name + "'");
    if (std::find(form_stack_.begin(), form_stack_.end(), name) != form_stack_.end())
        throw ExprError("form '" + name + "' refers to itself");
    QSeries s;
    if (!f->expr.empty()) {
        form_stack_.push_back(name);
        try {
            s = evaluate(f->expr, K);
        } catch (...) {
            form_stack_.pop_back();
            throw;
        }
        form_stack_.pop_back();
    } else {
        s = integer_series(curve_an(*f->curve, std::max(1L, K - 1)), K);
    }
    form_cache_[name] = s;
    return s;
}

std::vector<mpz_class> Workbench::cuspform_coeffs(const std::string& name, long n_max) {
    QSeries s = form_series(name, n_max + 1);
    std::vector<mpz_class> out;
    for (long n = 1; n <= n_max; ++n) {
        mpq_class c = coefficient_at(s, n);
        if (c.get_den() != 1) throw ExprError("form '" + name + "' has a non-integral coefficient at q^" + std::to_string(n));
        out.push_back(c.get_num());
    }
    return out;
}

const FormEntry* Workbench::level_form(long N) const {
    if (const SchemeEntry* s = reg_.scheme(N); s && s->coef.size() == 1 && s->coef.count(1)) {
        const std::string& e = s->coef.at(1);
        if (e.rfind("form(", 0) == 0 && e.back() == ')') return reg_.form(e.substr(5, e.size() - 6));
    }
    return nullptr;
}

const CuspFormBasis& Workbench::echelon(long N, long B) {
    auto it = basis_cache_.find(N);
    if (it != basis_cache_.end() && it->second.precision >= B) return it->second;
    CuspFormBasis b = cusp_form_basis(N, round_up(B));
    const SchemeEntry* e = reg_.scheme(N);
    if (e && !e->gaps.empty()) {
        std::vector<long> gaps = e->gaps;
        std::sort(gaps.begin(), gaps.end());
        if (gaps.size() != b.pivots.size())
            throw RegistryError("level " + std::to_string(N) + " lists " + std::to_string(gaps.size()) + " gaps, S_2 has dimension " +
                                std::to_string(b.pivots.size()));
        if (gaps != b.pivots) b = repivot(b, gaps);
    }
    basis_cache_[N] = std::move(b);
    return basis_cache_[N];
}

SubtractionScheme Workbench::scheme(long N, long B) {
    auto it = scheme_cache_.find(N);
    if (it != scheme_cache_.end() && it->second.precision >= B) return it->second;
    long Bp = round_up(B);
    SubtractionScheme sch;
    sch.N = N;
    sch.precision = Bp;
    const SchemeEntry* e = reg_.scheme(N);
    if (e && !e->coef.empty()) {
        sch.source = "registry";
        for (const auto& [r, text] : e->coef) {
            QSeries s = evaluate(text, Bp);
            std::vector<mpq_class> c(static_cast<size_t>(Bp));
            for (long M = 1; M < Bp; ++M) c[static_cast<size_t>(M)] = coefficient_at(s, M);
            sch.gaps.push_back(r);
            sch.coef[r] = std::move(c);
        }
    } else if (level_data(N).genus == 0) {
        sch.source = "none";
    } else {
        sch.source = "modular symbols";
        const CuspFormBasis& b = echelon(N, Bp);
        for (size_t i = 0; i < b.pivots.size(); ++i) {
            sch.gaps.push_back(b.pivots[i]);
            sch.coef[b.pivots[i]] = std::vector<mpq_class>(b.rows[i].begin(), b.rows[i].begin() + Bp);
        }
    }
    scheme_cache_[N] = sch;
    return sch;
}

std::vector<mpz_class> Workbench::subtracted_series(long N, long M, long n_max) {
    if (N < 1 || M < 1 || n_max < 1) throw DomainError("N, M and n_max must be positive");
    auto key = std::make_pair(N, M);
    auto it = gbar_cache_.find(key);
    if (it != gbar_cache_.end() && static_cast<long>(it->second.size()) >= n_max)
        return std::vector<mpz_class>(it->second.begin(), it->second.begin() + n_max);
    SubtractionScheme sch = scheme(N, M + 1);
    auto terms = sch.terms(M);
    std::vector<mpz_class> v;
    if (terms.empty())
        v.assign(static_cast<size_t>(n_max), 0);
    else
        v = rademacher_integer_row(N, terms, n_max, opt_.prec, opt_.policy, opt_.jobs, opt_.tolerance);
    gbar_cache_[key] = v;
    return v;
}

QSeries Workbench::gbar(long N, long M, long K) { return integer_series(subtracted_series(N, M, std::max(1L, K - 1)), K); }

QSeries Workbench::rsum(long N, long M, long K) {
    auto key = std::make_pair(N, M);
    long n_max = std::max(1L, K - 1);
    auto it = rsum_cache_.find(key);
    if (it == rsum_cache_.end() || static_cast<long>(it->second.size()) < n_max) {
        // R = G-bar + sum_r c_r(M) R_r: only the gap sums need rational snapping
        SubtractionScheme sch = scheme(N, M + 1);
        bool is_gap = std::find(sch.gaps.begin(), sch.gaps.end(), M) != sch.gaps.end();
        std::vector<mpq_class> row(static_cast<size_t>(n_max));
        if (is_gap) {
            row = rademacher_rational_row(N, {{M, 1}}, n_max, opt_.prec, opt_.max_denominator, opt_.policy, opt_.jobs);
        } else {
            auto g = subtracted_series(N, M, n_max);
            for (long n = 0; n < n_max; ++n) row[static_cast<size_t>(n)] = g[static_cast<size_t>(n)];
            for (long r : sch.gaps) {
                mpq_class cr = sch.c(r, M);
                if (cr == 0) continue;
                QSeries sr = rsum(N, r, K);
                for (long n = 1; n <= n_max; ++n) row[static_cast<size_t>(n - 1)] += cr * coefficient_at(sr, n);
            }
        }
        rsum_cache_[key] = row;
        it = rsum_cache_.find(key);
    }
    std::vector<mpq_class> c(static_cast<size_t>(K));
    for (long n = 1; n < K; ++n) c[static_cast<size_t>(n)] = it->second[static_cast<size_t>(n - 1)];
    return QSeries::from_rationals(0, c);
}

QSeries Workbench::scheme_series(long N, long r, long K) {
    const CuspFormBasis& b = echelon(N, K);
    for (size_t i = 0; i < b.pivots.size(); ++i)
        if (b.pivots[i] == r) {
            std::vector<mpq_class> c(b.rows[i].begin(), b.rows[i].begin() + K);
            return QSeries::from_rationals(0, c);
        }
    throw ExprError("C(" + std::to_string(N) + "," + std::to_string(r) + "): " + std::to_string(r) +
                    " is not a gap of S_2 at level " + std::to_string(N));
}

SeriesContext Workbench::context() {
    SeriesContext ctx;
    ctx.gbar = [this](long N, long M, long K) { return gbar(N, M, K); };
    ctx.rsum = [this](long N, long M, long K) { return rsum(N, M, K); };
    ctx.scheme = [this](long N, long r, long K) { return scheme_series(N, r, K); };
    ctx.form = [this](const std::string& n, long K) { return form_series(n, K); };
    return ctx;
}

QSeries Workbench::evaluate(const std::string& text, long K) {
    SeriesContext ctx = context();
    return eval_expression(text, K, ctx);
}

VerifyReport Workbench::verify_identity(const std::string& text, long K) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.order = K;
    r.method = scan_expression(text).numeric() ? "rademacher" : "exact";
    QSeries s = evaluate(text, K);
    auto bad = first_nonzero(s, K);
    r.pass = !bad;
    if (bad) {
        r.first_mismatch = bad->first;
        r.mismatch = bad->second;
    }
    r.seconds = since(t0);
    return r;
}

VerifyReport Workbench::verify_identity(const IdentityEntry& e, long K) {
    VerifyReport r = verify_identity(e.expr, K);
    r.id = e.id;
    r.cite = e.cite;
    return r;
}

VerifyReport Workbench::verify_curve(const CurveEntry& c, long K, CurveMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    bool use_eta = mode == CurveMode::eta || (mode == CurveMode::automatic && c.eta_expressible());
    std::string xs = use_eta && !c.X_eta.empty() ? c.X_eta : c.X;
    std::string ys = use_eta && !c.Y_eta.empty() ? c.Y_eta : c.Y;
    bool num = scan_expression(xs).numeric() || scan_expression(ys).numeric();
    SeriesContext ctx = context();
    ctx.vars["X"] = eval_expression(xs, K, ctx);
    ctx.vars["Y"] = eval_expression(ys, K, ctx);
    QSeries p = eval_expression(c.poly, K, ctx);
    VerifyReport r;
    r.id = c.id;
    r.cite = c.cite;
    r.order = K;
    r.method = !num ? "exact" : (use_eta && (!c.X_eta.empty() || !c.Y_eta.empty()) ? "mixed" : "rademacher");
    auto bad = first_nonzero(p, K);
    r.pass = !bad;
    if (bad) {
        r.first_mismatch = bad->first;
        r.mismatch = bad->second;
    }
    r.detail = "X = " + xs + ", Y = " + ys;
    r.seconds = since(t0);
    return r;
}

VerifyReport Workbench::check_scheme(long N, long B) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.id = "scheme." + std::to_string(N);
    r.order = B;
    r.method = "exact";
    r.pass = true;
    auto fail = [&](const std::string& why) {
        if (r.pass) r.detail = why;
        r.pass = false;
    };
    const SchemeEntry* e = reg_.scheme(N);
    if (e) r.cite = e->cite;
    const CuspFormBasis& b = echelon(N, B);
    long g = level_data(N).genus;
    if (static_cast<long>(b.pivots.size()) != g) fail("modular symbols give dimension " + std::to_string(b.pivots.size()));
    if (const LevelEntry* L = reg_.level(N); L && L->genus && *L->genus != g) fail("registry genus differs");
    if (e) {
        std::vector<long> gaps = e->gaps;
        if (gaps.empty())
            for (const auto& [k, v] : e->coef) gaps.push_back(k);
        std::sort(gaps.begin(), gaps.end());
        if (!gaps.empty() && gaps != b.pivots) fail("gaps differ from the echelon pivots");
        for (const auto& [rr, text] : e->coef) {
            QSeries s = evaluate(text, B);
            QSeries t = scheme_series(N, rr, B);
            if (auto bad = first_nonzero(truncate_at(s - t, B), B)) {
                fail("c_" + std::to_string(rr) + " differs at M = " + std::to_string(bad->first));
                if (!r.first_mismatch) r.first_mismatch = bad->first;
            }
        }
        if (!e->span.empty()) {
            // every listed form lies in S_2 and together they span it
            std::vector<std::vector<mpq_class>> rows;
            for (const auto& text : e->span) {
                QSeries s = evaluate(text, B);
                std::vector<mpq_class> v(static_cast<size_t>(B));
                for (long M = 1; M < B; ++M) v[static_cast<size_t>(M)] = coefficient_at(s, M);
                rows.push_back(v);
                for (size_t i = 0; i < b.pivots.size(); ++i) {
                    mpq_class f = v[static_cast<size_t>(b.pivots[i])];
                    for (long M = 0; M < B; ++M) v[static_cast<size_t>(M)] -= f * b.rows[i][static_cast<size_t>(M)];
                }
                for (long M = 0; M < B; ++M)
                    if (v[static_cast<size_t>(M)] != 0) {
                        fail(text + " is not in S_2(" + std::to_string(N) + ")");
                        break;
                    }
            }
            // rank by elimination
            long rank = 0;
            for (long col = 0; col < B && rank < static_cast<long>(rows.size()); ++col) {
                size_t p = static_cast<size_t>(rank);
                while (p < rows.size() && rows[p][static_cast<size_t>(col)] == 0) ++p;
                if (p == rows.size()) continue;
                std::swap(rows[p], rows[static_cast<size_t>(rank)]);
                for (size_t i = static_cast<size_t>(rank) + 1; i < rows.size(); ++i) {
                    if (rows[i][static_cast<size_t>(col)] == 0) continue;
                    mpq_class f = rows[i][static_cast<size_t>(col)] / rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
                    for (long k = col; k < B; ++k) rows[i][static_cast<size_t>(k)] -= f * rows[static_cast<size_t>(rank)][static_cast<size_t>(k)];
                }
                ++rank;
            }
            if (rank != g) fail("listed forms span dimension " + std::to_string(rank));
        }
        SubtractionScheme sch = scheme(N, B);
        for (const auto& cl : e->claims) {
            for (long rr : sch.gaps) {
                mpq_class want = cl.coef.count(rr) ? cl.coef.at(rr) : mpq_class(0);
                if (sch.c(rr, cl.M) != want)
                    fail("c_" + std::to_string(rr) + "(" + std::to_string(cl.M) + ") = " + sch.c(rr, cl.M).get_str() + ", expected " + want.get_str());
            }
            for (const auto& [rr, v] : cl.coef)
                if (std::find(sch.gaps.begin(), sch.gaps.end(), rr) == sch.gaps.end()) fail(std::to_string(rr) + " is not a gap");
        }
    }
    r.seconds = since(t0);
    return r;
}

VerifyReport Workbench::check_form(const FormEntry& f, long n_max) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.id = f.name;
    r.cite = f.cite;
    r.order = n_max + 1;
    r.method = "exact";
    r.pass = true;
    QSeries s = form_series(f.name, n_max + 1);
    if (!f.expr.empty() && f.curve) {
        QSeries c = integer_series(curve_an(*f.curve, n_max), n_max + 1);
        if (auto bad = first_nonzero(truncate_at(s - c, n_max + 1), n_max + 1)) {
            r.pass = false;
            r.first_mismatch = bad->first;
            r.mismatch = bad->second;
            r.detail = "expression and curve L-series differ";
        }
    }
    if (!f.head.empty() && f.head_order > 0) {
        long K = std::min(f.head_order, n_max + 1);
        QSeries h = evaluate(f.head, K);
        if (auto bad = first_nonzero(truncate_at(s, K) - h, K)) {
            r.pass = false;
            r.first_mismatch = bad->first;
            r.mismatch = bad->second;
            r.detail = "printed expansion differs";
        }
    }
    if (coefficient_at(s, 1) != 1) {
        r.pass = false;
        r.detail = "not normalized";
    }
    r.seconds = since(t0);
    return r;
}

std::vector<mpz_class> Workbench::tally_series(long N, long m_max) {
    const TallyEntry* t = reg_.tally(N);
    if (!t) throw RegistryError("no tally generating function for N = " + std::to_string(N));
    if (m_max < 0) throw DomainError("m must be nonnegative");
    QSeries s = evaluate(t->T, m_max + 1);
    std::vector<mpz_class> out;
    for (long m = 0; m <= m_max; ++m) {
        mpq_class c = coefficient_at(s, m);
        if (c.get_den() != 1 || c < 0) throw RegistryError("tally T_" + std::to_string(N) + " has a coefficient that is not a count");
        out.push_back(c.get_num());
    }
    return out;
}

mpz_class Workbench::tally(long N, long m) { return tally_series(N, m).back(); }

mpq_class tally36_closed_form(long M) {
    mpq_class n = M;
    mpq_class p = (n + 1) * (n + 3) * (n + 5) * (n + 7) * (n + 9) * (n + 11) * ((n + 6) * (n + 6) - 7) / 1935360 - 1;
    mpq_class q2 = (2 * (n + 6) * (n + 6) - 5) / mpq_class(512);
    mpq_class q3 = (n + 3) * (n + 9) / mpq_class(9);
    mpq_class q4 = q2 + (n + 4) * (n + 8) / mpq_class(16);
    mpq_class q;
    switch (M % 12) {
        case 0: q = q3 + q4 + 5; break;
        case 2: case 10: q = q2; break;
        case 3: case 9: q = q3; break;
        case 4: case 8: q = q4; break;
        case 6: q = q2 + q3 + 1; break;
        default: q = 0;
    }
    mpq_class c = p + q / 12 + 1;
    c.canonicalize();
    return c;
}

}  // namespace etaq
