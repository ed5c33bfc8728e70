#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "etaq/qseries.hpp"

namespace etaq {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Series expressions:
//   numbers, q (alias x), + - * / ^, parentheses, implicit multiplication
//   eta(d) psi(n) phi(n) theta(a,b) sigma(k)
//   G(N,M) R(N,M) C(N,r) form(name)  resolved through the context; C(N,r) = sum_M c_r(M) q^M
//   D(f) = q d/dq f, U(f,m), subst(f,d), restrict(f,m,r1,...), rev(f,n), coeffshift(f,k)
// Statements are separated by ';'.  "name := expr" binds a variable; a final "a = b" yields a - b.
struct SeriesContext {
    std::function<QSeries(long N, long M, long K)> gbar;
    std::function<QSeries(long N, long M, long K)> rsum;
    std::function<QSeries(long N, long r, long K)> scheme;
    std::function<QSeries(const std::string& name, long K)> form;
    std::map<std::string, QSeries> vars;
};

// evaluates text so that every exponent below K is known; the result is truncated at exponent K
QSeries eval_expression(const std::string& text, long K, SeriesContext& ctx);

// names of G/R/form references, for callers that want to know what an expression needs
struct ExprRefs {
    std::vector<std::pair<long, long>> gbar, rsum;
    std::vector<std::string> forms;
    bool numeric() const { return !gbar.empty() || !rsum.empty(); }
};
ExprRefs scan_expression(const std::string& text);

// coefficient of q^e of a series whose exponents are integral, zero past the start, error past the horizon
mpq_class coefficient_at(const QSeries& s, long e);

// truncate to the absolute exponent horizon K (exponents < K kept)
QSeries truncate_at(const QSeries& s, long K);

}  // namespace etaq
