import math

import pytest

from logplate import data as data_mod
from logplate import modes, profiles, symbols
from logplate.profiles import ProfileKind

TH = symbols.compute_thresholds()
GAUSS2 = data_mod.parse_pair("gaussian:alpha=1", "gaussian:alpha=1", 2)
ZERO2 = data_mod.parse_pair("zero_mass:alpha=1", "zero_mass:alpha=1", 2)


def test_phi1_at_time_zero():
    p = symbols.FreqPoint.from_radius(0.37)
    assert profiles.phi1(GAUSS2, p, 0.0) == pytest.approx(GAUSS2.mass_sum)


def test_phi1_vanishes_for_zero_mass_data():
    for r in (0.0, 0.5, 2.0):
        for t in (0.0, 1.0, 100.0):
            assert profiles.phi1(ZERO2, symbols.FreqPoint.from_radius(r), t) == 0.0


def test_phi1_exponent_value():
    p = symbols.FreqPoint.from_radius(1.0)
    got = profiles.phi1(GAUSS2, p, 2.0)
    expo = 2.0 * math.log(2.0) * (1.0 + math.log(2.0))
    assert expo == pytest.approx(2.3472003889562933, abs=1e-15)
    assert got.real == pytest.approx(2.0 * math.pi * math.exp(-expo), rel=1e-14)


def test_phi1_pointwise_bound():
    for r in (0.1, 0.7, 2.0, 20.0):
        p = symbols.FreqPoint.from_radius(r)
        for t in (0.5, 5.0, 50.0):
            val = abs(profiles.phi1(GAUSS2, p, t))
            assert val <= abs(GAUSS2.mass_sum) * (1.0 + r * r) ** (-t) * (1 + 1e-12)


def test_phi2_at_time_zero_returns_initial_value():
    for r in (0.3, 1.0, 4.0):
        p = symbols.FreqPoint.from_radius(r)
        assert profiles.phi2(GAUSS2, p, 0.0) == pytest.approx(GAUSS2.u0.value(r))
    p0 = symbols.FreqPoint.from_radius(0.0)
    assert profiles.phi2(GAUSS2, p0, 0.0) == pytest.approx(GAUSS2.u0.value(0.0))


def test_phi2_unit_log_weight_quarter_period():
    # L = 1, u0 = 0, u1 = 1: phi2(pi/2) = e^{-pi/4} sin(pi/2)
    d = data_mod.RadialSpectrum(
        data_mod.gaussian(1.0, amplitude=0.0, n=2), data_mod.gaussian(1.0, n=2)
    )
    p = symbols.FreqPoint.from_radius(symbols.R_UNIT)
    u1v = d.u1.value(symbols.R_UNIT)
    got = profiles.phi2(d, p, math.pi / 2.0)
    assert got.real == pytest.approx(math.exp(-math.pi / 4.0) * u1v, rel=1e-12)


def test_phi2_underflows_to_zero_near_zero_frequency():
    p = symbols.FreqPoint.from_radius(1e-8)
    assert profiles.phi2(GAUSS2, p, 1.0) == 0.0
    p0 = symbols.FreqPoint.from_radius(0.0)
    assert profiles.phi2(GAUSS2, p0, 3.0) == 0.0


def test_phi2_envelope_bounds():
    for r in (0.2, 0.9, symbols.R_UNIT, 5.0):
        p = symbols.FreqPoint.from_radius(r)
        u0v = abs(GAUSS2.u0.value(r))
        u1v = abs(GAUSS2.u1.value(r))
        for t in (0.5, 4.0, 30.0):
            val = abs(profiles.phi2(GAUSS2, p, t))
            env = math.exp(-t / (2.0 * p.lam))
            if p.lam <= 1.0:
                assert val <= env * (t * u1v + u0v) * (1 + 1e-12)
            assert val <= u1v / math.sqrt(p.lam) + u0v + 1e-12


def test_profile_diff_at_time_zero():
    p = symbols.FreqPoint.from_radius(0.6)
    got = profiles.profile_diff(GAUSS2, p, 0.0, ProfileKind.PHI_SUM)
    assert got == pytest.approx(-GAUSS2.mass_sum, rel=1e-14)


def test_profile_diff_zero_data():
    d = data_mod.RadialSpectrum(
        data_mod.gaussian(1.0, amplitude=0.0, n=2), data_mod.gaussian(1.0, amplitude=0.0, n=2)
    )
    p = symbols.FreqPoint.from_radius(0.4)
    for kind in ProfileKind:
        assert profiles.profile_diff(d, p, 3.0, kind) == 0.0


def test_profile_diff_additivity():
    for r in (0.1, 0.8, 2.0):
        p = symbols.FreqPoint.from_radius(r)
        for t in (0.0, 1.5, 12.0):
            d_sum = profiles.profile_diff(GAUSS2, p, t, ProfileKind.PHI_SUM)
            d_one = profiles.profile_diff(GAUSS2, p, t, ProfileKind.PHI1)
            d_two = profiles.profile_diff(GAUSS2, p, t, ProfileKind.PHI2)
            p_one = profiles.phi1(GAUSS2, p, t)
            p_two = profiles.phi2(GAUSS2, p, t)
            assert d_sum == pytest.approx(d_one - p_two, abs=1e-13)
            assert d_sum == pytest.approx(d_two - p_one, abs=1e-13)


def test_diff_below_decay_envelope_plus_profile():
    # |u - phi1| <= |u| + |phi1|, with |u| controlled by the pointwise
    # factor-6 decay bound
    p = symbols.FreqPoint.from_radius(0.2)
    t = 100.0
    w = symbols.mult_weight(p, TH)
    u0v = GAUSS2.u0.value(p.r)
    u1v = GAUSS2.u1.value(p.r)
    amp_bound = math.sqrt(
        6.0 * math.exp(-0.5 * w * t) * (u1v**2 / p.lam + u0v**2)
    )
    got = abs(profiles.profile_diff(GAUSS2, p, t, ProfileKind.PHI1))
    assert got <= amp_bound + abs(profiles.phi1(GAUSS2, p, t))


def test_profile_value_dispatch():
    p = symbols.FreqPoint.from_radius(0.9)
    t = 2.5
    total = profiles.profile_value(GAUSS2, p, t, ProfileKind.PHI_SUM)
    assert total == profiles.phi1(GAUSS2, p, t) + profiles.phi2(GAUSS2, p, t)


def test_negative_time_rejected():
    p = symbols.FreqPoint.from_radius(1.0)
    with pytest.raises(ValueError):
        profiles.phi1(GAUSS2, p, -1.0)
    with pytest.raises(ValueError):
        profiles.phi2(GAUSS2, p, -1.0)
