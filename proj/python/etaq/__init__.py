"""Python front end to the etaq C++ library.

Exact coefficients come back as fractions.Fraction, high precision reals as mpmath numbers
at the requested number of digits.
"""

import os
from fractions import Fraction
from pathlib import Path

import mpmath

# the wheel carries its own copy of the registry
_bundled = Path(__file__).with_name("registry.json")
if "ETAQ_REGISTRY" not in os.environ and _bundled.exists():
    os.environ["ETAQ_REGISTRY"] = str(_bundled)

from . import _etaq  # noqa: E402
from ._etaq import DomainError, EichlerError, ModularDomainError, SunriseError, genus  # noqa: E402

__all__ = [
    "DomainError", "EichlerError", "ModularDomainError", "SunriseError",
    "Series", "eta_quotient", "eta_weight", "evaluate", "genus", "kloosterman", "rademacher",
    "tally", "verify_identity", "verify_curve", "sunrise2", "sunrise3", "bessel_moment", "lseries",
    "lseries_checks", "quasiperiod_checks",
]


class Series:
    """Truncated q-series q^(offset24/24) * sum c_k q^k."""

    def __init__(self, raw):
        self.offset24 = raw["offset24"]
        self.coeffs = [Fraction(c) for c in raw["coeffs"]]

    @property
    def order(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"Series(offset24={self.offset24}, [{head}{', ...' if len(self) > 6 else ''}])"


def _mpf(s, digits):
    with mpmath.workdps(digits + 5):
        return mpmath.mpf(s)


def _num(x):
    # keep exact decimal text when given a str, Fraction or int
    if isinstance(x, Fraction) and x.denominator != 1:
        with mpmath.workdps(120):
            return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 110)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, mpmath.mp.dps)
    return str(x)


def eta_quotient(spec, order):
    """Expansion of a product of eta(d tau)^r, spec like "2^1 6^5 1^-5 3^-1"."""
    return Series(_etaq.eta_quotient(spec, order))


def eta_weight(spec):
    return Fraction(_etaq.eta_weight(spec))


def evaluate(expr, order, registry=""):
    return Series(_etaq.evaluate(expr, order, registry))


def kloosterman(c, N, M, n, digits=30):
    return _mpf(_etaq.kloosterman(c, N, M, n, digits), digits)


def rademacher(N, M, n, digits=50, fixed_cutoff=False):
    r = dict(_etaq.rademacher(N, M, n, digits, fixed_cutoff))
    r["value"] = _mpf(r["value"], digits)
    r["tail"] = float(r["tail"])
    if r["rational"] is not None:
        r["rational"] = Fraction(r["rational"])
    return r


def tally(N, m, registry=""):
    return int(_etaq.tally(N, m, registry))


def verify_identity(id_or_expr, order=500, registry=""):
    return dict(_etaq.verify_identity(id_or_expr, order, registry))


def verify_curve(id, order=200, registry=""):
    return dict(_etaq.verify_curve(id, order, registry))


def _complex(raw, digits):
    with mpmath.workdps(digits + 5):
        return mpmath.mpc(mpmath.mpf(raw["re"]), mpmath.mpf(raw["im"]))


def sunrise2(w2, digits=30):
    """Two-loop equal-mass sunrise at external momentum squared w2 (mass 1)."""
    return _complex(_etaq.sunrise2(_num(w2), digits), digits)


def sunrise3(t, digits=30):
    """Three-loop banana integral at t."""
    return _complex(_etaq.sunrise3(_num(t), digits), digits)


def bessel_moment(a, b, c, t=1, digits=30):
    """int_0^inf I0(sqrt t x)^a K0(x)^b x^c dx."""
    return _mpf(_etaq.bessel_moment(a, b, c, _num(t), digits), digits)


def lseries(form, s, digits=30):
    return _mpf(_etaq.lseries(form, s, digits), digits)


def lseries_checks(digits=30):
    return [dict(x) for x in _etaq.lseries_checks(digits)]


def quasiperiod_checks(digits=30):
    return [dict(x) for x in _etaq.quasiperiod_checks(digits)]
