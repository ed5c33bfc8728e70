#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

namespace etaq {

// weight-2 modular symbols for Gamma0(N) over Q, via Manin symbols (c:d) in P^1(Z/N)
class ModularSymbols {
public:
    explicit ModularSymbols(long N);

    long level() const { return N_; }
    long manin_count() const { return static_cast<long>(syms_.size()); }
    long dimension() const { return static_cast<long>(free_.size()); }
    long cusp_count() const { return static_cast<long>(cusps_.size()); }
    long cuspidal_dimension() const { return static_cast<long>(cusp_basis_.size()); }

    // matrix of T_n on the cuspidal subspace (rows = images of basis vectors)
    std::vector<std::vector<mpq_class>> hecke_cuspidal(long n) const;

private:
    using Vec = std::vector<mpq_class>;
    long index_of(long c, long d) const;
    Vec symbol_vector(long idx) const;
    Vec hecke_on_symbol(long idx, const std::vector<std::array<long, 4>>& mats) const;
    long cusp_class(const mpz_class& p, const mpz_class& q);

    long N_;
    std::vector<std::array<long, 2>> syms_;
    std::vector<long> table_;  // (c mod N, d mod N) -> symbol index or -1
    std::vector<long> free_;   // symbol indices forming a basis of the quotient
    std::vector<Vec> coord_;   // symbol index -> coordinates in the quotient
    std::vector<std::array<mpz_class, 2>> cusps_;
    std::vector<Vec> cusp_basis_;  // cuspidal subspace, rows in quotient coordinates, reduced echelon
    std::vector<long> cusp_pivots_;
};

// Heilbronn-Merel matrices of determinant n: ad - bc = n, a > b >= 0, d > c >= 0
std::vector<std::array<long, 4>> merel_matrices(long n);

// Q-basis of S_2(Gamma0(N)) in reduced echelon form; rows[i][k] is the coefficient of q^k, k < B
struct CuspFormBasis {
    long N = 0;
    std::vector<long> pivots;  // leading exponent of each row (the gaps at infinity)
    std::vector<std::vector<mpq_class>> rows;
    long precision = 0;
};
CuspFormBasis cusp_form_basis(long N, long B);

}  // namespace etaq
