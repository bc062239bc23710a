"""Backend selection for the hot kernels.

The compiled extension is preferred; the pure-Python module is used when it
is missing or when ``LOSSY_TWINBEAM_PURE_PYTHON=1`` is set before import.
"""

import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("LOSSY_TWINBEAM_PURE_PYTHON") != "1":
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

rk4_affine = backend.rk4_affine
pure_state_squeezing = backend.pure_state_squeezing
INFEASIBLE = python_backend.INFEASIBLE
