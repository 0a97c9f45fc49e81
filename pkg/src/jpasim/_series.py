"""Power-series engine for the sine-nonlinearity ratio families.

Everything downstream (pump steady state, linearized gain coefficients, cubic
signal coefficients, large-signal envelope right-hand sides) consumes one of
five closely related power series in the normalized photon number n.  With
x = 4*sqrt(n):

    detuning_shift  S(n) = J1(x)/x - 1/2          (pump frequency pull)
    pull_linear     T(n) = (J0(x) - 1)/2          (signal self-coupling pull)
    idler_factor    U(n) = J2(x)/(2n)             (signal-idler coupling, U(0)=1)
    quad_factor     W(n) = J1(x)/(2*sqrt(n))      (quadratic signal terms, W(0)=1)
    cube_factor     X(n) = J0(x)                  (cubic signal terms, X(0)=1)

All five are entire functions of n, and all five coefficient sequences are
scaled derivatives of the master sequence a_k of S:

    S(n) = sum_{k>=1} a_k n^k,   a_1 = -1,  a_{k+1} = a_k * (-4)/((k+1)(k+2))
    T:  t_k = (k+1) a_k                    (T = d/dn [n S])
    U:  u_k = -k a_k          (coefficient of n^{k-1};  U = -S')
    W:  w_k = -k(k+1)/2 a_k   (coefficient of n^{k-1})
    X:  x_k = -k^2(k+1)/2 a_k (coefficient of n^{k-1})

Finite truncation order N keeps terms k = 1..N; order=inf keeps all (the tail
beyond K_MAX = 60 is below 1e-56 for |n| <= 16 and is dropped).  Evaluation is
Horner via numpy polyval, so arguments may be real or complex scalars or
arrays; complex arguments arise in the doubled-phase-space envelope equations
where the effective photon number leaves the real axis.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError

K_MAX = 60

# |argument| beyond which the dropped tail of the 60-term series is no longer
# negligible; callers treat crossing it as divergence, not as a request for
# more terms (physical operating range is |n| <~ 4).
ARG_LIMIT = 16.0


def _master_coefficients() -> np.ndarray:
    a = np.empty(K_MAX + 1)
    a[0] = 0.0
    a[1] = -1.0
    for k in range(1, K_MAX):
        a[k + 1] = a[k] * (-4.0) / ((k + 1) * (k + 2))
    return a


_A = _master_coefficients()          # a_0..a_K_MAX, a_0 = 0
_K = np.arange(K_MAX + 1, dtype=float)

# Ascending coefficient arrays, index == power of n.
_S_COEF = _A.copy()                                   # sum a_k n^k
_T_COEF = (_K + 1.0) * _A                             # sum (k+1) a_k n^k
# The next three are series in n^{k-1}: shift the index down by one.
_U_COEF = (-_K * _A)[1:]                              # sum -k a_k n^{k-1}
_W_COEF = (-_K * (_K + 1.0) / 2.0 * _A)[1:]
_X_COEF = (-_K * _K * (_K + 1.0) / 2.0 * _A)[1:]

INF_ORDER = math.inf


def check_order(order) -> float:
    """Validate a truncation order: positive integer or math.inf."""
    if order == INF_ORDER:
        return INF_ORDER
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise ValidationError(f"nonlinearity order must be a positive integer or inf, got {order!r}",
                              order=repr(order))
    if order < 1:
        raise ValidationError(f"nonlinearity order must be >= 1, got {order}", order=order)
    return int(order)


def _prefix(order, full: np.ndarray, powers_offset: int) -> np.ndarray:
    """Coefficient slice implementing truncation after term k = order."""
    if order == INF_ORDER:
        return full
    keep = min(int(order), K_MAX) + 1 - powers_offset
    return full[:keep]


def _polyval(coef: np.ndarray, z):
    # np.polynomial convention: coef ascending; supports complex z and arrays
    return np.polynomial.polynomial.polyval(z, coef)


def detuning_shift(n, order=INF_ORDER):
    """S(n): frequency pull of the pumped resonator; S(0) = 0, S'(0) = -1."""
    return _polyval(_prefix(order, _S_COEF, 0), n)


def detuning_shift_derivs(n, order=INF_ORDER):
    """(S, S', S'', S''') at real n — used by the fold/cusp Newton system."""
    coef = _prefix(order, _S_COEF, 0)
    d1 = np.polynomial.polynomial.polyder(coef, 1)
    d2 = np.polynomial.polynomial.polyder(coef, 2)
    d3 = np.polynomial.polynomial.polyder(coef, 3)
    return (_polyval(coef, n), _polyval(d1, n), _polyval(d2, n), _polyval(d3, n))


def pull_linear(n, order=INF_ORDER):
    """T(n): pull entering the signal self-coupling coefficient; T = d/dn[n S]."""
    return _polyval(_prefix(order, _T_COEF, 0), n)


def idler_factor(n, order=INF_ORDER):
    """U(n): signal-idler coupling factor, continuously extended to U(0) = 1."""
    return _polyval(_prefix(order, _U_COEF, 1), n)


def quad_factor(n, order=INF_ORDER):
    """W(n): quadratic signal-term factor, W(0) = 1."""
    return _polyval(_prefix(order, _W_COEF, 1), n)


def cube_factor(n, order=INF_ORDER):
    """X(n): cubic signal-term factor, X(0) = 1."""
    return _polyval(_prefix(order, _X_COEF, 1), n)


def terms_needed(arg_bound: float, tol: float = 1e-18) -> int:
    """Smallest term count whose first dropped master term is < tol at |n| = arg_bound.

    Used by the envelope integrator to shorten Horner loops when the effective
    photon number stays small.  Falls back to K_MAX at the argument limit.
    """
    if arg_bound > ARG_LIMIT:
        raise ValidationError(
            f"series argument bound {arg_bound:g} exceeds trusted range {ARG_LIMIT:g}",
            arg_bound=arg_bound)
    b = max(arg_bound, 1e-3)
    t = 1.0
    for k in range(1, K_MAX):
        t = abs(_A[k]) * b ** k
        if t < tol:
            return k
    return K_MAX


def detuning_shift_trunc(m, k_terms: int):
    """S evaluated with an explicit term count (complex-capable fast path)."""
    return _polyval(_S_COEF[: k_terms + 1], m)
