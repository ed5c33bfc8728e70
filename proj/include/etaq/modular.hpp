#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <vector>

#include "etaq/qseries.hpp"

namespace etaq {

struct ModularDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

std::vector<long> divisors(long n);
long euler_phi_l(long n);
std::vector<std::pair<long, long>> factorize(long n);

// index of Gamma0(N) in SL2(Z), elliptic point counts and cusp count
struct LevelData {
    long N, index, nu2, nu3, cusps, genus;
};
LevelData level_data(long N);
long genus0(long N);

struct EllipticCurve {
    mpz_class a1, a2, a3, a4, a6;

    mpz_class b2() const { return a1 * a1 + 4 * a2; }
    mpz_class b4() const { return 2 * a4 + a1 * a3; }
    mpz_class b6() const { return a3 * a3 + 4 * a6; }
    mpz_class b8() const;
    mpz_class c4() const;
    mpz_class c6() const;
    mpz_class discriminant() const;
    std::string str() const;
};

// global minimal model (Kraus test on c4, c6 prime by prime)
EllipticCurve minimal_model(const EllipticCurve& E);
// #E(F_p) including the point at infinity, for the given integral model
long count_points(const EllipticCurve& E, long p);
// a_1 .. a_nmax of the L-series; element k-1 holds a_k
std::vector<mpz_class> curve_an(const EllipticCurve& E, long n_max);

// order of an eta quotient at the cusps 1/c of Gamma0(N), c | N (c = N is infinity, c = 1 is zero)
struct CuspOrder {
    long c;      // denominator of the cusp class
    long count;  // number of cusps with this denominator
    mpq_class order;
};
std::vector<CuspOrder> eta_cusp_orders(const EtaQuotient& e, long N);
// weight 0 and the Newman conditions for a function on Gamma0(N)
bool is_modular_function(const EtaQuotient& e, long N);

// weight-0 eta quotients on Gamma0(N), holomorphic away from infinity, pole order at most m there
std::vector<EtaQuotient> enumerate_quotients(long N, long m, long max_exponent = 24);

// parity of the coefficients of the level-6 Hauptmodul: odd iff the square-free part of n divides 6
bool hauptmodul_parity(long n);
long squarefree_part(long n);

}  // namespace etaq
