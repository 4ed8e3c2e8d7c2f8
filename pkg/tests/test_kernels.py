import importlib

import numpy as np
import pytest

from hera import _pykernels, kernels
from hera.field import field_make

BACKENDS = [pytest.param(_pykernels, id="python")]
try:
    BACKENDS.append(pytest.param(importlib.import_module("hera._kernels"), id="cython"))
except ImportError:
    BACKENDS.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))


def test_selected_backend_is_reported():
    assert kernels.BACKEND in {"cython", "python"}


@pytest.mark.parametrize("mod", BACKENDS)
@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 4)])
def test_backends_agree(mod, p, k):
    spec = field_make(p, k)
    rng = np.random.default_rng(p * 10 + k)
    t = (spec.add, spec.mul)
    for _ in range(25):
        r, inner, c = rng.integers(1, 7, size=3)
        a = rng.integers(0, spec.order, size=(r, inner))
        b = rng.integers(0, spec.order, size=(inner, c))
        assert np.array_equal(mod.matmul(a, b, *t), _pykernels.matmul(a, b, *t))
        m = rng.integers(0, spec.order, size=(r, c + 2))
        if rng.random() < 0.5 and r > 1:
            m[-1] = m[0]
        w1, p1 = mod.rref(m, spec.add, spec.mul, spec.neg, spec.inv, int(c))
        w2, p2 = _pykernels.rref(m, spec.add, spec.mul, spec.neg, spec.inv, int(c))
        assert np.array_equal(w1, w2) and list(p1) == list(p2)
    stack = rng.integers(0, spec.order, size=(30, 3, 3))
    stack[::3, 2] = stack[::3, 0]
    r1 = mod.rank_many(stack, spec.add, spec.mul, spec.neg, spec.inv)
    r2 = _pykernels.rank_many(stack, spec.add, spec.mul, spec.neg, spec.inv)
    assert np.array_equal(r1, r2)
    assert (r1[::3] <= 2).all()


@pytest.mark.parametrize("mod", BACKENDS)
def test_rref_does_not_touch_input(mod):
    spec = field_make(3, 2)
    m = np.array([[1, 2, 3], [4, 5, 6]], dtype=np.int64)
    before = m.copy()
    mod.rref(m, spec.add, spec.mul, spec.neg, spec.inv, 3)
    assert np.array_equal(m, before)
