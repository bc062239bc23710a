"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from lossy_twinbeam import MediumParams, MomentState, build_affine_generator, covariance_from_moments
from lossy_twinbeam import _core
from lossy_twinbeam.gaussian import standard_form


def cases():
    gen = build_affine_generator(MediumParams(xi=1.0, delta_k=11.5, gamma_b=22.7))
    y0 = np.zeros(4)
    sigma = standard_form(covariance_from_moments(MomentState(5.0, 0.3, 1.3j)))
    return {
        "rk4_affine (10k steps)": lambda k: k.rk4_affine(gen.matrix, gen.drive, y0, 1e-4, 10_000, 1e12),
        "pure_state_squeezing": lambda k: k.pure_state_squeezing(sigma, 0.1, -0.2, -0.05, 1e-11),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _core.python_backend}
    if _core.compiled_backend is not None:
        backends["compiled"] = _core.compiled_backend
    else:
        print("compiled extension not built; timing the Python fallback only")
    print(f"{'kernel':<26}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases().items():
        times = {}
        for name, kern in backends.items():
            t = timeit.Timer(lambda: fn(kern))
            n, _ = t.autorange()
            times[name] = min(t.repeat(args.repeat, n)) / n
        row = f"{label:<26}" + "".join(f"{times[n] * 1e6:>11.1f} us" for n in backends)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>9.0f}x"
        print(row)


if __name__ == "__main__":
    main()
