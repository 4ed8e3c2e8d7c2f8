"""The two worked configurations: q=2 with (L, T) = (2, 1) and q=3 with (L, T) = (2, 2).

Points are given as (enc(alpha), enc(beta)) with the built-in moduli, where
the modulus root z plays the role of the primitive element delta.
"""

from __future__ import annotations

from hera.curve import curve_enumerate
from hera.scheme import (
    PointAssignment,
    SchemeParams,
    _resolve_order,
    build_assignment,
    params_validate,
)

# F4 = GF(2)[z]/(z^2+z+1): 0, 1, z=2, z^2=z+1=3.
# P00, P01, P1z (data, data, mask), then tail Pz z^2, Pz^2 z, Pz^2 z^2;
# zero points P1z^2 and Pzz fill in canonical order.
F4_POINTS = [(0, 0), (0, 1), (1, 2), (2, 3), (3, 2), (3, 3)]

# F9 = GF(3)[z]/(z^2+2z+2); a + b z encodes as a + 3b.
# (0,0), (0,z+1), (1,2), (z,1) are data/masks; (2,2), (z+1,2), (z+2,z+2), (2z,1) the tail.
F9_POINTS = [(0, 0), (0, 4), (1, 2), (3, 1), (2, 2), (4, 2), (5, 5), (6, 1)]


def _case(q: int, L: int, T: int, points, a: int, b: int | None, c: int) -> tuple[SchemeParams, PointAssignment]:
    params = params_validate(q, L, T, a, b if b is not None else L, c)
    table = curve_enumerate(params.spec)
    order = _resolve_order(params, table, points)
    return params, build_assignment(params, table, order)


def f4_case(a: int = 1, b: int | None = None, c: int = 1) -> tuple[SchemeParams, PointAssignment]:
    return _case(2, 2, 1, F4_POINTS, a, b, c)


def f9_case(a: int = 1, b: int | None = None, c: int = 1) -> tuple[SchemeParams, PointAssignment]:
    """Built without the T-MDS audit: the g-mask basis fails it on this point set."""
    return _case(3, 2, 2, F9_POINTS, a, b, c)
