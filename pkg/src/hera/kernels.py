"""Backend selection for the finite-field matrix kernels.

The compiled extension is used when it was built; otherwise the numpy
implementation is. Set ``HERA_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from hera import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("HERA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from hera import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

matmul = _impl.matmul
rref = _impl.rref
rank_many = _impl.rank_many

__all__ = ["BACKEND", "matmul", "rank_many", "rref"]
