#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etaq/modular.hpp"

namespace etaq {

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LevelEntry {
    long N = 0;
    std::optional<long> genus;
    std::optional<mpz_class> R1;
    std::string hauptmodul, oeis;
    std::vector<long> zero_primes;  // Table-3 style explicit list
    long zero_mod = 0;              // or a congruence rule
    std::vector<long> zero_residues;
    bool rational = false;
    std::string cite;
};

struct SequenceEntry {
    std::string id, expr;
    mpz_class D = 1;
    std::vector<mpz_class> terms;  // coefficients of q^1, q^2, ... divided by D
    std::string cite;
};

struct FormEntry {
    std::string name;
    long N = 0;
    std::string expr;
    std::optional<EllipticCurve> curve;
    std::string head;
    long head_order = 0;
    std::string cite;
};

struct SchemeClaim {
    long M;
    std::map<long, mpq_class> coef;  // c_r(M) for every gap r; absent gaps are zero
};

struct SchemeEntry {
    long N = 0;
    std::map<long, std::string> coef;  // r -> expression for sum_M c_r(M) q^M
    std::vector<long> gaps;
    std::vector<std::string> span;
    std::vector<SchemeClaim> claims;
    std::string cite;
};

struct CurveEntry {
    std::string id;
    long N = 0;
    long genus = 0;
    std::string poly, X, Y, X_eta, Y_eta;
    std::string cite;
    bool eta_expressible() const { return !X_eta.empty() && !Y_eta.empty(); }
};

struct IdentityEntry {
    std::string id, group, expr, cite;
    long order = 0;  // 0: caller's choice
};

struct TallyEntry {
    long N = 0;
    std::string T;
    std::map<long, mpz_class> checks;
    std::string cite;
};

class Registry {
public:
    static Registry load(const std::string& path);
    static Registry parse(const std::string& text, const std::string& origin = "<string>");
    // --registry flag, then ETAQ_REGISTRY, then the bundled file
    static std::string resolve_path(const std::string& flag = "");

    const std::vector<LevelEntry>& levels() const { return levels_; }
    const std::vector<SequenceEntry>& sequences() const { return sequences_; }
    const std::vector<FormEntry>& forms() const { return forms_; }
    const std::vector<SchemeEntry>& schemes() const { return schemes_; }
    const std::vector<CurveEntry>& curves() const { return curves_; }
    const std::vector<IdentityEntry>& identities() const { return identities_; }
    const std::vector<TallyEntry>& tallies() const { return tallies_; }

    const LevelEntry* level(long N) const;
    const FormEntry* form(const std::string& name) const;
    const SchemeEntry* scheme(long N) const;
    const CurveEntry* curve(const std::string& id) const;
    const IdentityEntry* identity(const std::string& id) const;
    const TallyEntry* tally(long N) const;
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::vector<LevelEntry> levels_;
    std::vector<SequenceEntry> sequences_;
    std::vector<FormEntry> forms_;
    std::vector<SchemeEntry> schemes_;
    std::vector<CurveEntry> curves_;
    std::vector<IdentityEntry> identities_;
    std::vector<TallyEntry> tallies_;
};

}  // namespace etaq
