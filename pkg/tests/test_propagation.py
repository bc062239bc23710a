import cmath
import math

import numpy as np
import pytest

from lossy_twinbeam import (
    VACUUM,
    GainOverflowError,
    MediumParams,
    MomentState,
    ParameterError,
    asymptotic_growth_rate,
    closed_form_trajectory,
    integrate,
    propagate_closed_form,
)


def lossless_na(xi, dk, z):
    # textbook phase-mismatched gain, analytic in g^2 so it covers both regimes
    g = cmath.sqrt(xi**2 - 0.25 * dk**2)
    if abs(g) < 1e-12:
        return (xi * z) ** 2
    return ((xi / g) ** 2 * cmath.sinh(g * z) ** 2).real


@pytest.mark.parametrize("dk", [0.0, 0.7, 1.99, 2.0, 3.5, 11.5])
def test_lossless_mismatched_gain(dk):
    p = MediumParams(xi=1.0, delta_k=dk, length=2.5)
    for z in np.linspace(0.1, 2.5, 9):
        got = propagate_closed_form(VACUUM, p, z).n_a
        assert got == pytest.approx(lossless_na(1.0, dk, z), rel=1e-9, abs=1e-14)


def test_free_decay_without_pump():
    p = MediumParams(xi=0.0, delta_k=1.0, gamma_a=0.3, gamma_b=2.0, length=3.0)
    s0 = MomentState(4.0, 2.0, 0.5 + 0.5j)
    s = propagate_closed_form(s0, p)
    assert s.n_a == pytest.approx(4.0 * math.exp(-0.9), rel=1e-12)
    assert s.n_b == pytest.approx(2.0 * math.exp(-6.0), rel=1e-12)
    assert abs(s.m) == pytest.approx(abs(s0.m) * math.exp(-1.15 * 3.0), rel=1e-12)


def test_manley_rowe_without_loss():
    p = MediumParams(xi=1.3, delta_k=0.8, length=2.0)
    s0 = MomentState(3.0, 0.5, 0.2 - 0.1j)
    traj = integrate(s0, p, 400)
    np.testing.assert_allclose(traj.n_a - traj.n_b, 2.5, rtol=0, atol=1e-9)


@pytest.mark.parametrize("model", ["quantum", "classical"])
def test_stepped_matches_closed_form(model):
    p = MediumParams(xi=1.0, delta_k=1.2, gamma_a=0.4, gamma_b=3.0, length=1.5)
    s0 = MomentState(0.2, 0.1, 0.05j)
    traj = integrate(s0, p, 3000, model=model)
    exact = closed_form_trajectory(traj.z[::300], s0, p, model=model)
    np.testing.assert_allclose(traj.values[::300], exact.values, rtol=1e-10, atol=1e-13)


def test_trajectory_pointwise_consistency():
    p = MediumParams(xi=1.0, delta_k=11.5, gamma_b=22.7, length=2.0)
    z = np.array([0.0, 0.3, 1.1, 2.0])
    traj = closed_form_trajectory(z, VACUUM, p)
    assert len(traj) == 4
    for zi, state in zip(z, traj.states):
        ref = propagate_closed_form(VACUUM, p, zi)
        np.testing.assert_allclose(state.as_vector(), ref.as_vector(), rtol=1e-13, atol=1e-16)
    assert traj.final == traj.states[-1]


def test_overflow_reports_location():
    p = MediumParams(xi=10.0, length=5.0)
    with pytest.raises(GainOverflowError, match=r"z = 1\.4[0-9]*"):
        integrate(VACUUM, p, 1000)


def test_overflow_cap_is_configurable():
    p = MediumParams(xi=1.0, length=3.0)
    with pytest.raises(GainOverflowError):
        integrate(VACUUM, p, 100, cap=10.0)
    assert integrate(VACUUM, p, 100).final.n_a < 1e12


def test_bad_inputs():
    with pytest.raises(ParameterError):
        integrate(VACUUM, MediumParams(), 1)
    with pytest.raises(ParameterError):
        integrate(VACUUM, MediumParams(), 10, model="semiclassical")
    with pytest.raises(ParameterError):
        propagate_closed_form(VACUUM, MediumParams(), -1.0)


def test_growth_rate_in_gain_band():
    for dk in (0.0, 1.0, 1.9):
        expected = 2 * math.sqrt(1 - dk**2 / 4)
        assert asymptotic_growth_rate(MediumParams(delta_k=dk)) == pytest.approx(expected, abs=1e-12)
    assert abs(asymptotic_growth_rate(MediumParams(delta_k=11.5))) < 1e-12


def test_growth_rate_predicts_late_time_slope():
    p = MediumParams(xi=1.0, delta_k=11.5, gamma_b=22.7, length=310.0)
    a = propagate_closed_form(VACUUM, p, 300.0).n_a
    b = propagate_closed_form(VACUUM, p, 310.0).n_a
    assert math.log(b / a) / 10.0 == pytest.approx(asymptotic_growth_rate(p), rel=1e-6)
