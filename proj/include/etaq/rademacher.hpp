#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "etaq/mp.hpp"

namespace etaq {

struct TruncationPolicy {
    long c_max_initial = 512;
    long stability_blocks = 3;
    double tail_tolerance = 1e-3;
    long block = 64;
    long c_budget = 1L << 14;
    // every term at working precision, summing exactly up to c_max_initial
    bool fixed_cutoff = false;
    bool all_terms_mpfr = false;
};

struct RadTerm {
    long M;
    mpq_class coef;
};

struct RademacherQuery {
    long N = 1;
    long M = 1;
    long n = 1;
    long prec = 50;
    TruncationPolicy policy;
};

struct RationalCertificate {
    mpq_class value;
    Real distance;
};

struct RademacherResult {
    Real value;
    long c_used = 0;
    Real tail_estimate;
    std::optional<RationalCertificate> rational;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnstableTruncation : std::runtime_error {
    Real partial;
    long c_used;
    UnstableTruncation(const std::string& m, Real p, long c) : std::runtime_error(m), partial(std::move(p)), c_used(c) {}
};

struct NotNearInteger : std::runtime_error {
    long n;
    double distance;
    Real value;
    NotNearInteger(const std::string& m, long n_, double d, Real v)
        : std::runtime_error(m), n(n_), distance(d), value(std::move(v)) {}
};

Real kloosterman(long c, long N, long M, long n, long prec);
// phase histogram: cnt[j] = #{r : M r - n s = j mod c}
std::vector<long> kloosterman_histogram(long c, long N, long M, long n);

RademacherResult rademacher_sum(const RademacherQuery& q);

enum class SnapMode { none, integer, rational };
struct SnapSpec {
    SnapMode mode = SnapMode::none;
    long max_denominator = 1;
    double tolerance = 0.05;
};

// sum_i coef_i R_{N,M_i}(n) in one pass over c
RademacherResult rademacher_combination(long N, const std::vector<RadTerm>& terms, long n, long prec,
                                        const TruncationPolicy& policy, const SnapSpec& snap = {});

std::optional<RationalCertificate> rationalize(const Real& v, long max_denominator, const Real& margin);

std::vector<RademacherResult> rademacher_row(long N, long M, const std::vector<long>& n_range, long prec,
                                             const TruncationPolicy& policy = {}, const SnapSpec& snap = {},
                                             int jobs = 1);

// integer-snapped coefficients of sum_i coef_i R_{N,M_i}(n), n = 1..n_max
std::vector<mpz_class> rademacher_integer_row(long N, const std::vector<RadTerm>& terms, long n_max, long prec,
                                              const TruncationPolicy& policy = {}, int jobs = 1,
                                              double tolerance = 0.05);
std::vector<mpq_class> rademacher_rational_row(long N, const std::vector<RadTerm>& terms, long n_max, long prec,
                                               long max_denominator, const TruncationPolicy& policy = {},
                                               int jobs = 1, double tolerance = 0.01);

}  // namespace etaq
