import math
import os
import subprocess
import sys

import numpy as np
import pytest

from lossy_twinbeam import _core, covariance_from_moments, MomentState, tmsv_covariance
from states import pure_state, random_covariance

BACKENDS = [pytest.param(_core.python_backend, id="python")]
if _core.compiled_backend is not None:
    BACKENDS.append(pytest.param(_core.compiled_backend, id="compiled"))


def feasible(sigma, r, psi, s_a, s_b, slack=1e-9):
    return np.linalg.eigvalsh(np.asarray(sigma) - pure_state(r, psi, s_a, s_b))[0] >= -slack


@pytest.mark.parametrize("kern", BACKENDS)
def test_rk4_scalar_decay_and_growth(kern):
    matrix = np.diag([0.5, -1.0, 0.0, 0.0])
    drive = np.array([0.0, 1.0, 2.0, 0.0])
    out, overflow = kern.rk4_affine(matrix, drive, np.array([1.0, 0.0, 0.0, 3.0]), 0.01, 200, 1e12)
    out = np.asarray(out)
    assert overflow == -1 and out.shape == (201, 4)
    z = 2.0
    np.testing.assert_allclose(out[-1], [math.exp(0.5 * z), 1 - math.exp(-z), 2 * z, 3.0], rtol=1e-9)


@pytest.mark.parametrize("kern", BACKENDS)
def test_rk4_overflow_index(kern):
    matrix = np.diag([10.0, 0.0, 0.0, 0.0])
    out, overflow = kern.rk4_affine(matrix, np.zeros(4), np.array([1.0, 0, 0, 0]), 0.01, 1000, 1e6)
    # n_a = e^(10 z) crosses 1e6 at z = 1.38
    assert overflow == 139


@pytest.mark.parametrize("kern", BACKENDS)
def test_squeezing_of_pure_tmsv(kern):
    for r in (0.2, 0.9):
        sigma = np.asarray(tmsv_covariance(r, phase=0.0))
        got = kern.pure_state_squeezing(sigma, 0.0, 0.0, 0.0, 1e-9)
        assert got == pytest.approx(r, abs=1e-6)


@pytest.mark.parametrize("kern", BACKENDS)
def test_squeezing_is_minimal_and_feasible(kern):
    sigma = np.asarray(covariance_from_moments(MomentState(3.0, 2.0, 1.5j)))
    rng = np.random.default_rng(4)
    checked = 0
    for _ in range(200):
        psi, s_a, s_b = rng.uniform(0, 2 * np.pi), rng.normal(scale=0.2), rng.normal(scale=0.2)
        r = kern.pure_state_squeezing(sigma, psi, s_a, s_b, 1e-12)
        if r >= kern.INFEASIBLE:
            continue
        checked += 1
        assert feasible(sigma, r, psi, s_a, s_b)
        if r > 1e-6:
            assert not feasible(sigma, r - 1e-6, psi, s_a, s_b, slack=0.0)
    assert checked > 10


@pytest.mark.parametrize("kern", BACKENDS)
def test_infeasible_shape_flagged(kern):
    sigma = np.eye(4)
    assert kern.pure_state_squeezing(sigma, 0.0, 1.0, 0.0, 1e-12) >= kern.INFEASIBLE


@pytest.mark.skipif(_core.compiled_backend is None, reason="extension not built")
def test_backends_agree():
    rng = np.random.default_rng(9)
    for _ in range(300):
        sigma = random_covariance(rng)
        args = (rng.uniform(0, 2 * np.pi), rng.normal(scale=0.7), rng.normal(scale=0.7), 1e-12)
        a = _core.python_backend.pure_state_squeezing(sigma, *args)
        b = _core.compiled_backend.pure_state_squeezing(sigma, *args)
        assert a == pytest.approx(b, abs=1e-9)
    matrix = rng.normal(size=(4, 4))
    drive, y0 = rng.normal(size=4), rng.normal(size=4)
    pa, _ = _core.python_backend.rk4_affine(matrix, drive, y0, 0.003, 500, 1e12)
    pb, _ = _core.compiled_backend.rk4_affine(matrix, drive, y0, 0.003, 500, 1e12)
    np.testing.assert_allclose(np.asarray(pa), np.asarray(pb), rtol=1e-13, atol=1e-13)


def test_pure_python_switch():
    env = dict(os.environ, LOSSY_TWINBEAM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import lossy_twinbeam as t; print(t.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
