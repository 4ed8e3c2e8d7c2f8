"""Compare the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Kernel timings call both modules directly. The end-to-end timings run a
protocol sweep in a subprocess per backend, since the backend is fixed at
import time.
"""

import argparse
import importlib
import os
import subprocess
import sys
import timeit
from functools import partial

import numpy as np

from hera import _pykernels
from hera.field import field_make

END_TO_END = """
import time, numpy as np
from hera.field import FieldMatrix
from hera.kernels import BACKEND
from hera.scheme import assign_points, params_validate
from hera.simnet import run_protocol
params = params_validate(3, 2, 2, 6, 6, 6)
t0 = time.perf_counter()
asg = assign_points(params, seed=0)
rng = np.random.default_rng(0)
for seed in range(50):
    A = FieldMatrix.random(params.spec, 6, 6, rng)
    B = FieldMatrix.random(params.spec, 6, 6, rng)
    assert run_protocol(params, asg, A, B, seed=seed).decoded == A @ B
print(BACKEND, time.perf_counter() - t0)
"""


def kernel_cases(rng):
    f9, f16 = field_make(3, 2), field_make(2, 4)
    yield "matmul 27x27 @ 27x36 (F9)", f9, "matmul", (rng.integers(0, 9, (27, 27)), rng.integers(0, 9, (27, 36)))
    yield "matmul 64x64 @ 64x64 (F16)", f16, "matmul", (rng.integers(0, 16, (64, 64)), rng.integers(0, 16, (64, 64)))
    yield "rref 23x27 (F9)", f9, "rref", (rng.integers(0, 9, (23, 27)),)
    yield "rref 58x64 (F16)", f16, "rref", (rng.integers(0, 16, (58, 64)),)
    yield "rank_many 2000 x 3x3 (F9)", f9, "rank_many", (rng.integers(0, 9, (2000, 3, 3)),)


def call(mod, name, spec, args):
    if name == "matmul":
        return mod.matmul(*args, spec.add, spec.mul)
    if name == "rref":
        m = args[0]
        return mod.rref(m, spec.add, spec.mul, spec.neg, spec.inv, m.shape[1])
    return mod.rank_many(args[0], spec.add, spec.mul, spec.neg, spec.inv)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    try:
        compiled = importlib.import_module("hera._kernels")
    except ImportError:
        sys.exit("compiled extension not built; run `pip install --no-build-isolation -e .` first")

    rng = np.random.default_rng(0)
    print(f"{'kernel':32} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, spec, name, args in kernel_cases(rng):
        a = call(_pykernels, name, spec, args)
        b = call(compiled, name, spec, args)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if name == "rref" else np.array_equal(a, b)
        assert same, f"backends disagree on {label}"
        tp, tc = (min(timeit.repeat(partial(call, mod, name, spec, args), number=1, repeat=opts.repeat))
                  for mod in (_pykernels, compiled))
        print(f"{label:32} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:8.1f}x")

    print("\nend to end: q=3 L=2 T=2, 6x6 @ 6x6, assignment search + 50 runs")
    for pure in ("0", "1"):
        env = dict(os.environ, HERA_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"  {backend:8} {float(seconds):.3f} s")


if __name__ == "__main__":
    main()
