from fractions import Fraction

import mpmath
import pytest

import etaq


def test_hauptmodul_head():
    h = etaq.eta_quotient("2^1 6^5 1^-5 3^-1", 8)
    assert h.offset24 == 24
    assert [int(c) for c in h.coeffs[:5]] == [1, 5, 19, 61, 174]
    assert etaq.eta_weight("2^1 6^5 1^-5 3^-1") == 0


def test_genus():
    assert etaq.genus(11) == 1
    assert etaq.genus(169) == 8
    with pytest.raises(ValueError):
        etaq.genus(0)


def test_rademacher_near_integer():
    r = etaq.rademacher(6, 1, 2, digits=30)
    assert abs(r["value"] - 360) < 0.1
    assert r["c_used"] > 0


def test_rademacher_symmetry():
    a = etaq.rademacher(10, 2, 3, digits=30, fixed_cutoff=True)["value"] / 2
    b = etaq.rademacher(10, 3, 2, digits=30, fixed_cutoff=True)["value"] / 3
    assert abs(a - b) < mpmath.mpf(10) ** -20


def test_sunrise_special_value():
    v = etaq.sunrise2(1, digits=30)
    with mpmath.workdps(30):
        assert abs(v - mpmath.pi**2 / 4) < mpmath.mpf(10) ** -25


def test_banana_origin():
    v = etaq.sunrise3(0, digits=30)
    with mpmath.workdps(30):
        assert abs(v - 7 * mpmath.zeta(3)) < mpmath.mpf(10) ** -25


def test_bessel_moment_against_mpmath():
    got = etaq.bessel_moment(0, 2, 1, digits=20)
    assert abs(got - Fraction(1, 2)) < 1e-18


def test_registry_identity_and_tally():
    assert etaq.tally(21, 50) == 2938
    rep = etaq.verify_identity("eta(1)^24 = eta(1)^24", order=50)
    assert rep["pass"]
    rep = etaq.verify_identity("eta(1)^24 = eta(1)^24 + q^7", order=50)
    assert not rep["pass"] and rep["first_mismatch"] == 7


def test_curve():
    rep = etaq.verify_curve("N64", order=200)
    assert rep["pass"]
