"""Bessel functions of the first kind (orders 0-2) and the pump-pull ratio.

Backed by scipy.special; the convergent power series stays in the test suite
as the independent oracle (both a 40-term float series and an mpmath route),
which is what justifies delegating the production path here.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .errors import ValidationError

#: largest |x| this artifact ever evaluates (photon numbers n <= 4 give
#: x = 4*sqrt(n) <= 8; the bound leaves wide margin)
X_LIMIT = 40.0

_BESSEL = {0: _sp.j0, 1: _sp.j1, 2: lambda x: _sp.jv(2, x)}


def bessel_j(order: int, x: float) -> float:
    """J_order(x) for order in {0, 1, 2}, |x| <= 40."""
    if order not in _BESSEL:
        raise ValidationError(f"Bessel order must be 0, 1 or 2, got {order!r}", order=repr(order))
    x = float(x)
    if not np.isfinite(x):
        raise ValidationError("Bessel argument must be finite", x=repr(x))
    if abs(x) > X_LIMIT:
        raise ValidationError(f"Bessel argument |x| = {abs(x):g} outside supported range [0, {X_LIMIT:g}]",
                              x=x)
    return float(_BESSEL[order](x))


def j1_ratio(n) -> float | np.ndarray:
    """J1(4*sqrt(n))/(4*sqrt(n)) continuously extended: 1/2 at n = 0.

    Accepts scalars or arrays of n >= 0.  Below n = 1e-8 a 3-term Taylor
    expansion in n replaces the ratio (removable 0/0).
    """
    arr = np.asarray(n, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ValidationError("photon number must be finite and >= 0", n=repr(n))
    small = arr < 1e-8
    x = 4.0 * np.sqrt(np.where(small, 1.0, arr))  # placeholder arg where small
    with np.errstate(invalid="ignore"):
        ratio = _sp.j1(x) / x
    taylor = 0.5 - arr + (2.0 / 3.0) * arr ** 2
    out = np.where(small, taylor, ratio)
    if np.ndim(n) == 0:
        return float(out)
    return out
