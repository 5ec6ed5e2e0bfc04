import math

import numpy as np
import pytest

from phimem.parasitics import (
    CoreGeometry,
    FilterSpec,
    inductance,
    inductance_scaled,
    lowpass,
    mh_to_henry,
    scaling_study,
)

# hand arithmetic: A = 0.5 cm^2, l = 1.5*pi cm, 0.4*pi*1000*(0.5/(1.5*pi))*1e-5 = (4/3)e-3 mH
L_REF_MH = 4.0 / 3.0 * 1e-3
L_PRINTED_MH = 0.4 * math.pi * 1000 / 3 * 1e-5  # 4.18879e-3


def geom(**kw):
    base = dict(outer_D=2.0, inner_d=1.0, height_h=1.0, permeability_mu=1000.0, turns_N=1)
    base.update(kw)
    return CoreGeometry(**base)


def test_geometry_derived_quantities():
    g = geom()
    assert g.cross_section_cm2 == 0.5
    assert g.path_length_cm == pytest.approx(4.71238898038469, rel=1e-14)
    assert g.path_length_m == pytest.approx(0.0471238898038469, rel=1e-14)


def test_inductance_reference_core():
    assert inductance(geom()) == pytest.approx(L_REF_MH, rel=1e-12)


def test_inductance_turns_squared():
    assert inductance(geom(turns_N=2)) == pytest.approx(4 * inductance(geom()), rel=1e-15)


def test_inductance_zero_permeability():
    assert inductance(geom(permeability_mu=0.0)) == 0.0


@pytest.mark.parametrize("s", [0.5, 2.0, 10.0])
def test_inductance_linear_in_size(s):
    g = geom(outer_D=3.1, inner_d=1.7, height_h=0.6, permeability_mu=250.0, turns_N=3)
    assert inductance(g.scaled(s)) == pytest.approx(s * inductance(g), rel=1e-13)


@pytest.mark.parametrize("mu", [1.0, 37.0, 5000.0])
def test_inductance_linear_in_mu(mu):
    assert inductance(geom(permeability_mu=mu)) == pytest.approx(mu / 1000.0 * inductance(geom()), rel=1e-14)


@pytest.mark.parametrize("kw", [dict(outer_D=1.0), dict(inner_d=0.0), dict(height_h=0.0), dict(turns_N=0), dict(turns_N=1.5)])
def test_geometry_invariants(kw):
    with pytest.raises(ValueError):
        geom(**kw)


def test_scaled_reference_values():
    s = inductance_scaled(1000.0, 1, 1.0)
    assert s.substituted_mH == pytest.approx(L_REF_MH, rel=1e-12)
    assert s.printed_mH == pytest.approx(L_PRINTED_MH, rel=1e-15)
    assert s.printed_mH / s.substituted_mH == pytest.approx(math.pi, rel=1e-12)


@pytest.mark.parametrize("mu, N, h", [(1000.0, 1, 1.0), (3.5, 2, 0.3), (1.0, 7, 1e-5)])
def test_fixed_aspect_substitution_identity(mu, N, h):
    s = inductance_scaled(mu, N, h)
    assert s.substituted_mH == pytest.approx(0.4 * mu * N**2 * (h / 3) * 1e-5, rel=1e-12)


def test_scaled_halving_h_halves_both():
    a, b = inductance_scaled(800.0, 1, 0.4), inductance_scaled(800.0, 1, 0.2)
    assert b.substituted_mH == pytest.approx(a.substituted_mH / 2, rel=1e-14)
    assert b.printed_mH == pytest.approx(a.printed_mH / 2, rel=1e-14)


def test_scaled_nanoscale_is_negligible():
    s = inductance_scaled(1000.0, 1, 1e-7)
    assert s.substituted_mH == pytest.approx(1.3333e-10, rel=1e-4)
    assert s.substituted_mH < 1e-9


def test_scaling_study_rows():
    rows = scaling_study(1000.0, 1, 1e-7, 1.0, 8)
    assert len(rows) == 8
    hs = np.array([r[0] for r in rows])
    assert hs[0] == pytest.approx(1e-7) and hs[-1] == pytest.approx(1.0)
    for h, l1, l2 in rows:
        assert l1 == pytest.approx(L_REF_MH * h, rel=1e-12)
        assert l2 / l1 == pytest.approx(math.pi, rel=1e-12)


def test_mh_to_henry():
    assert mh_to_henry(1.0) == 1e-3


def test_filter_invariants():
    with pytest.raises(ValueError):
        FilterSpec(0.0)
    with pytest.raises(ValueError):
        FilterSpec(1.0, order=2)


def test_lowpass_dc_gain():
    y = lowpass(np.full(50, 3.25), 1e-3, FilterSpec(10.0))
    np.testing.assert_array_equal(y, np.full(50, 3.25))


def test_lowpass_impulse_matches_unrolled_recurrence():
    dt, fc = 1e-3, 20.0
    a = dt / (dt + 1 / (2 * math.pi * fc))
    x = np.zeros(40)
    x[0] = 1.0
    expected = [1.0]
    for n in range(1, 40):
        expected.append(expected[-1] + a * (x[n] - expected[-1]))
    np.testing.assert_allclose(lowpass(x, dt, FilterSpec(fc)), expected, rtol=1e-13, atol=1e-16)
    np.testing.assert_allclose(expected[1:5], (1 - a) ** np.arange(1, 5), rtol=1e-13)


def test_lowpass_preconditions():
    with pytest.raises(ValueError):
        lowpass([1.0], 1e-3, FilterSpec(1.0))
    with pytest.raises(ValueError):
        lowpass([1.0, 2.0], 0.0, FilterSpec(1.0))


def steady_amplitude_ratio(f, fc, samples_per_period):
    dt = 1.0 / (f * samples_per_period)
    n = samples_per_period * (int(20 * max(1.0, f / fc)) + 40)
    t = np.arange(n) * dt
    y = lowpass(np.sin(2 * math.pi * f * t), dt, FilterSpec(fc))
    tail = y[-samples_per_period * 5 :]
    return 0.5 * (tail.max() - tail.min())


RATIOS = [0.1, 0.3, 1.0, 3.0, 10.0]


@pytest.mark.parametrize("spp", [100, 400])
def test_lowpass_amplitude_matches_first_order_response(spp):
    for r in RATIOS:
        got = steady_amplitude_ratio(r, 1.0, spp)
        assert got == pytest.approx(1 / math.sqrt(1 + r * r), rel=0.02)


def test_lowpass_amplitude_at_fifty_points_per_period():
    worst = max(abs(steady_amplitude_ratio(r, 1.0, 50) * math.sqrt(1 + r * r) - 1) for r in RATIOS)
    assert worst < 0.035


def test_lowpass_attenuation_monotone_in_frequency():
    amps = [steady_amplitude_ratio(r, 1.0, 100) for r in [0.1, 0.2, 0.5, 1, 2, 5, 10, 20]]
    assert all(b < a for a, b in zip(amps, amps[1:]))
