import numpy as np
import pytest

from lossy_twinbeam import (
    VACUUM,
    MediumParams,
    MomentState,
    NonFiniteStateError,
    ParameterError,
    build_affine_generator,
    moment_rhs,
)


def hand_rhs(na, nb, m, xi, dk, ga, gb, quantum=True):
    gbar = 0.5 * (ga + gb)
    drive = 1.0 if quantum else 0.0
    return (
        -2 * xi * m.imag - ga * na,
        -2 * xi * m.imag - gb * nb,
        dk * m.imag - gbar * m.real,
        -dk * m.real - gbar * m.imag - xi * (na + nb + drive),
    )


@pytest.mark.parametrize("quantum", [True, False])
def test_rhs_matches_component_formulas(quantum):
    rng = np.random.default_rng(1)
    for _ in range(20):
        na, nb = rng.uniform(0, 5, 2)
        m = complex(*rng.normal(size=2))
        xi, dk, ga, gb = rng.uniform(0, 3), rng.normal(scale=5), rng.uniform(0, 4), rng.uniform(0, 30)
        p = MediumParams(xi, dk, ga, gb)
        got = moment_rhs(MomentState(na, nb, m), p, quantum).as_vector()
        np.testing.assert_allclose(got, hand_rhs(na, nb, m, xi, dk, ga, gb, quantum), atol=1e-13)


def test_vacuum_derivative_is_pure_drive():
    d = moment_rhs(VACUUM, MediumParams(xi=0.7, delta_k=3.0, gamma_b=2.0))
    assert (d.n_a, d.n_b, d.m) == (0.0, 0.0, -0.7j)
    c = moment_rhs(VACUUM, MediumParams(xi=0.7), quantum=False)
    assert c.as_vector().tolist() == [0.0, 0.0, 0.0, 0.0]


def test_augmented_generator_layout():
    gen = build_affine_generator(MediumParams(xi=2.0, delta_k=1.0, gamma_a=0.5, gamma_b=1.5))
    aug = gen.augmented()
    assert aug.shape == (5, 5)
    np.testing.assert_array_equal(aug[:4, :4], gen.matrix)
    np.testing.assert_array_equal(aug[:4, 4], gen.drive)
    assert not aug[4].any()
    np.testing.assert_array_equal(gen.drive, [0, 0, 0, -2.0])


@pytest.mark.parametrize(
    "kwargs",
    [
        {"xi": -1.0},
        {"gamma_a": -0.1},
        {"gamma_b": -2.0},
        {"length": 0.0},
        {"delta_k": float("nan")},
        {"xi": float("inf")},
    ],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ParameterError):
        MediumParams(**kwargs)


def test_params_with_revalidates():
    p = MediumParams()
    assert p.with_(gamma_b=3.0).gamma_b == 3.0
    with pytest.raises(ParameterError):
        p.with_(gamma_b=-3.0)


def test_state_vector_round_trip():
    s = MomentState(1.5, 0.25, complex(-0.3, 0.8))
    assert MomentState.from_vector(s.as_vector()) == s


def test_nonfinite_state_names_field():
    with pytest.raises(NonFiniteStateError, match="n_b"):
        MomentState(0.0, float("nan"), 0j).check_finite()
