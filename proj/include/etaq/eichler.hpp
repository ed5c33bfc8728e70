#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "etaq/mp.hpp"
#include "etaq/qseries.hpp"

namespace etaq {

struct EichlerError : std::domain_error {
    using std::domain_error::domain_error;
};

// M(a,b,c) = int_0^inf I0(x)^a K0(x)^b x^c dx
struct BesselMomentSpec {
    long a = 0, b = 0, c = 0;
};

// reason the moment diverges, empty when it converges
std::string moment_divergence(const BesselMomentSpec& m, double t = 1.0);
Real bessel_moment(const BesselMomentSpec& m, long prec);
// int_0^inf I0(sqrt(t) x)^a K0(x)^b x^c dx; entire in t for a = 1, so t < 0 is fine
Real bessel_moment_t(const Real& t, const BesselMomentSpec& m, long prec);

struct LSeriesForm {
    std::string name;  // "L5", "L6", "L8"
    long weight = 0;
    long level = 0;
    std::vector<EtaQuotient> terms;  // f = sum of these
    int printed_sign = 0;            // the sign shown next to the Fricke relation
    // f(i/(N y)) = fricke * N^(k/2) y^k f(i y)
    int fricke = 0;
};

const LSeriesForm& lseries_form(const std::string& name);
const std::vector<LSeriesForm>& lseries_forms();
QSeries lseries_form_series(const LSeriesForm& f, long K);
// f(i y) at real y
Real form_on_axis(const LSeriesForm& f, const Real& y, long prec);
// f(i/(N y)) - fricke N^(k/2) y^k f(i y), relative to the larger side
Real fricke_residual(const LSeriesForm& f, const Real& y, long prec);

// (2 pi)^s / Gamma(s) int_0^inf f(iy) y^(s-1) dy, split at y0 (default 1/sqrt N)
Real lseries_value(const LSeriesForm& f, long s, long prec);
Real lseries_value(const LSeriesForm& f, long s, long prec, const Real& y0);
// prod_{p <= pmax} of the local factors at s
Real lseries_euler_product(const LSeriesForm& f, long s, long pmax, long prec);

// weight 4: f46 and g46 = (w^2-3)^2 (w^4+9) / (8 w^4) f46
// weight 6: f66 and g66 = (w^2-3)^4 / (16 w^4) f66
struct QuasiPeriodSpec {
    long weight = 4;
};
enum class PeriodForm { holomorphic, partner };

QSeries quasi_period_series(const QuasiPeriodSpec& spec, PeriodForm which, long K);
// -int_{1/sqrt 3}^inf form((1+iy)/2) weighting y^(s-1) dy, weighting 1 (weight 4) or 3y^2-1 (weight 6)
Real eichler_period(const QuasiPeriodSpec& spec, PeriodForm which, long s, long prec);
// same integral by tanh-sinh on the q-series, as a cross-check
Real eichler_period_quadrature(const QuasiPeriodSpec& spec, PeriodForm which, long s, long prec);

struct CheckLine {
    std::string name;
    Real lhs, rhs, residual;
    bool pass = false;
    bool conjectural = false;
};
struct CheckReport {
    long prec = 0;
    std::vector<CheckLine> lines;
    bool all_pass() const;
};

CheckReport quasiperiod_checks(long prec);
// S_L(1) = 2^L M(1, L+1, 1) against the critical L-value, L in {3, 4, 6}
CheckReport onshell_sunrise(long L, long prec);
// the critical-value chains for L5, L6, L8
CheckReport lseries_chains(long prec);

}  // namespace etaq
