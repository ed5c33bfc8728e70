#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etaq/expr.hpp"
#include "etaq/modsym.hpp"
#include "etaq/rademacher.hpp"
#include "etaq/registry.hpp"

namespace etaq {

struct WorkbenchOptions {
    long prec = 50;
    int jobs = 1;
    TruncationPolicy policy;
    double tolerance = 0.05;  // integer snapping
    long max_denominator = 64;
};

// R-bar_{N,M} = R_{N,M} - sum_r c_r(M) R_{N,r}
struct SubtractionScheme {
    long N = 0;
    std::vector<long> gaps;
    std::string source;  // "registry", "modular symbols" or "none"
    long precision = 0;  // c_r(M) known for M < precision
    std::map<long, std::vector<mpq_class>> coef;

    mpq_class c(long r, long M) const;
    std::vector<RadTerm> terms(long M) const;
};

struct VerifyReport {
    std::string id;
    bool pass = false;
    long order = 0;
    std::optional<long> first_mismatch;  // exponent of the first nonzero coefficient
    mpq_class mismatch = 0;
    std::string method;  // "exact", "rademacher", "mixed"
    std::string cite;
    std::string detail;
    double seconds = 0;
};

enum class CurveMode { automatic, recipe, eta };

class Workbench {
public:
    explicit Workbench(Registry reg, WorkbenchOptions opt = {});

    const Registry& registry() const { return reg_; }
    const WorkbenchOptions& options() const { return opt_; }

    // q-expansion of a named cusp form, known modulo q^K
    QSeries form_series(const std::string& name, long K);
    // C_1 .. C_nmax; the curve L-series when the form has no expression
    std::vector<mpz_class> cuspform_coeffs(const std::string& name, long n_max);
    // the cusp form of a genus-1 level
    const FormEntry* level_form(long N) const;

    const CuspFormBasis& echelon(long N, long B);
    SubtractionScheme scheme(long N, long B);
    std::vector<mpz_class> subtracted_series(long N, long M, long n_max);

    QSeries gbar(long N, long M, long K);
    QSeries rsum(long N, long M, long K);
    // sum_M c_r(M) q^M from the modular-symbols echelon basis
    QSeries scheme_series(long N, long r, long K);

    SeriesContext context();
    QSeries evaluate(const std::string& text, long K);

    VerifyReport verify_identity(const std::string& text, long K);
    VerifyReport verify_identity(const IdentityEntry& e, long K);
    VerifyReport verify_curve(const CurveEntry& c, long K, CurveMode mode = CurveMode::automatic);
    // registry subtraction data against the modular-symbols basis
    VerifyReport check_scheme(long N, long B);
    // expression against curve L-series and the printed head
    VerifyReport check_form(const FormEntry& f, long n_max);

    std::vector<mpz_class> tally_series(long N, long m_max);
    mpz_class tally(long N, long m);

private:
    Registry reg_;
    WorkbenchOptions opt_;
    std::map<std::string, QSeries> form_cache_;
    std::map<long, CuspFormBasis> basis_cache_;
    std::map<long, SubtractionScheme> scheme_cache_;
    std::map<std::pair<long, long>, std::vector<mpz_class>> gbar_cache_;
    std::map<std::pair<long, long>, std::vector<mpq_class>> rsum_cache_;
    std::vector<std::string> form_stack_;
};

// c(M) + 1 = p(M) + q_r(M)/12 + 1 for the N = 36 tally
mpq_class tally36_closed_form(long M);

}  // namespace etaq
