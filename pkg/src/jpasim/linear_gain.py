"""Small-signal (linearized) gain of the pumped resonator.

Linearizing the intra-resonator field about the pump steady state couples a
signal at detuning +delta to an idler at -delta.  The resulting reflection
gain g and idler conversion m follow from two complex coefficients:

    l1 = i*(Omega - 1 - T_N(n)) - 1/(2Q)     (self term: detuning + damping)
    l2 = -i*(alpha^2 * K/omega0) * U_N(n)    (parametric coupling)

where T_N and U_N are order-N pull/coupling factors of the photon number n.
Signal gain at detuning delta (units of the resonance frequency):

    g(delta) = -(1/Q) * (conj(l1) + i*delta) / den - 1
    m(delta) =  (1/Q) * l2 / den
    den      = (l1 + i*delta) * (conj(l1) + i*delta) - l2 * conj(l2)

Power gain G = |g|^2.  Frequency sweeps pick the smallest stable pump branch
at each Omega, and the sweep maximum is refined by parabolic interpolation of
log-gain to 1e-6 resolution in Omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _series
from .device import DerivedParams
from .errors import ConvergenceError, NumericalError, PoleError, ValidationError
from .steady_state import PumpDrive, SteadyState, default_branch, solve_photon_number

_POLE_EPS = 1e-15


@dataclass(frozen=True)
class LinearCoefficients:
    """Self term l1 and parametric coupling l2 of the linearized dynamics."""

    l1: complex
    l2: complex


@dataclass(frozen=True)
class LinearGain:
    """Signal/idler response at one detuning."""

    delta: float
    g: complex
    m: complex

    @property
    def G(self) -> float:
        return abs(self.g) ** 2

    @property
    def G_db(self) -> float:
        return 10.0 * math.log10(self.G)


def linear_coefficients(params: DerivedParams, drive: PumpDrive,
                        state: SteadyState) -> LinearCoefficients:
    """l1, l2 for a pump steady state (order taken from the drive)."""
    n = state.n
    if not (math.isfinite(n) and n >= 0):
        raise ValidationError("photon number must be finite and >= 0", n=repr(n))
    order = drive.order
    t = float(_series.pull_linear(n, order))
    u = float(_series.idler_factor(n, order))
    l1 = 1j * (drive.omega_rel - 1.0 - t) - 1.0 / (2.0 * params.Q)
    l2 = -1j * (state.alpha ** 2 * params.kerr_ratio) * u
    return LinearCoefficients(l1=complex(l1), l2=complex(l2))


def gain(co: LinearCoefficients, Q: float, delta: float = 0.0) -> LinearGain:
    """Reflection gain g and idler conversion m at signal detuning delta."""
    if not math.isfinite(delta):
        raise ValidationError("delta must be finite", delta=repr(delta))
    a = co.l1 + 1j * delta
    b = co.l1.conjugate() + 1j * delta
    den = a * b - co.l2 * co.l2.conjugate()
    if abs(den) < _POLE_EPS:
        raise PoleError("linearized response pole: pump at parametric threshold",
                        l1=co.l1, l2=co.l2, delta=delta, den_abs=abs(den))
    g = -(1.0 / Q) * b / den - 1.0
    m = (1.0 / Q) * co.l2 / den
    return LinearGain(delta=delta, g=complex(g), m=complex(m))


def photon_gain_balance(lg: LinearGain) -> float:
    """|g|^2 - |m|^2 - 1; zero for ideal phase-insensitive amplification."""
    return abs(lg.g) ** 2 - abs(lg.m) ** 2 - 1.0


@dataclass(frozen=True)
class GainCurve:
    """Small-signal gain versus pump frequency at fixed r and delta."""

    omega_rel: np.ndarray
    G_db: np.ndarray
    n: np.ndarray
    g: np.ndarray
    m: np.ndarray
    r: float
    delta: float
    order: float


def _point(params: DerivedParams, omega: float, r: float, order,
           delta: float, phase: float) -> tuple[LinearGain, float]:
    drive = PumpDrive(r=r, omega_rel=omega, phase=phase, order=order)
    state = default_branch(solve_photon_number(params, drive))
    co = linear_coefficients(params, drive, state)
    return gain(co, params.Q, delta), state.n


def _gain_db_at(params: DerivedParams, omega: float, r: float, order,
                delta: float, phase: float) -> tuple[float, float]:
    lg, n = _point(params, omega, r, order, delta, phase)
    return lg.G_db, n


def gain_sweep(params: DerivedParams, r: float, omega_range, delta: float = 0.0,
               order=math.inf, phase: float = 0.0, points: int = 400) -> GainCurve:
    """Sweep pump frequency; smallest stable branch selected at every point.

    Pole hits (pump exactly at threshold) are recorded as +inf dB and carry
    g = m = inf markers; they never participate in max refinement.
    """
    order = _series.check_order(order)
    lo, hi = float(omega_range[0]), float(omega_range[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo < hi):
        raise ValidationError("omega_range must be finite with 0 < lo < hi",
                              omega_range=(lo, hi))
    omegas = np.linspace(lo, hi, points)
    g_db = np.empty(points)
    n_arr = np.empty(points)
    g_arr = np.empty(points, dtype=complex)
    m_arr = np.empty(points, dtype=complex)
    for i, w in enumerate(omegas):
        try:
            lg, n_arr[i] = _point(params, float(w), r, order, delta, phase)
            g_db[i], g_arr[i], m_arr[i] = lg.G_db, lg.g, lg.m
        except PoleError:
            g_db[i] = math.inf
            g_arr[i] = m_arr[i] = complex(math.inf, 0.0)
            n_arr[i] = math.nan
    return GainCurve(omega_rel=omegas, G_db=g_db, n=n_arr, g=g_arr, m=m_arr,
                     r=r, delta=delta, order=order)


@dataclass(frozen=True)
class GainMaximum:
    omega_rel: float
    G_db: float
    n: float


def max_gain(params: DerivedParams, curve: GainCurve,
             resolution: float = 1e-6) -> GainMaximum:
    """Refine the sweep maximum by successive 3-point parabolic fits."""
    finite = np.where(np.isfinite(curve.G_db), curve.G_db, -np.inf)
    if not np.any(np.isfinite(finite)):
        raise NumericalError("no finite gain points in sweep (all at pole)")
    i = int(np.argmax(finite))
    i = min(max(i, 1), curve.omega_rel.size - 2)
    xs = [float(curve.omega_rel[j]) for j in (i - 1, i, i + 1)]
    ys = [float(finite[j]) for j in (i - 1, i, i + 1)]

    def eval_db(w: float) -> float:
        try:
            return _gain_db_at(params, w, curve.r, curve.order, curve.delta, 0.0)[0]
        except PoleError:
            return -math.inf          # poles are excluded from refinement

    for _ in range(80):
        if xs[2] - xs[0] <= resolution:
            break
        d21 = (ys[1] - ys[0]) / (xs[1] - xs[0])
        d32 = (ys[2] - ys[1]) / (xs[2] - xs[1])
        curvature = (d32 - d21) / (xs[2] - xs[0])
        if curvature >= 0.0 or not math.isfinite(curvature):
            w_new = 0.5 * (xs[0] + xs[2])      # degenerate fit: bisect
        else:
            w_new = 0.5 * (xs[0] + xs[1]) - d21 / (2.0 * curvature)
            w_new = min(max(w_new, xs[0] + 0.1 * (xs[1] - xs[0])),
                        xs[2] - 0.1 * (xs[2] - xs[1]))
        if abs(w_new - xs[1]) < 0.05 * (xs[2] - xs[0]):
            # stalled near the middle: shrink the wider flank instead
            w_new = 0.5 * (xs[0] + xs[1]) if xs[1] - xs[0] > xs[2] - xs[1] \
                else 0.5 * (xs[1] + xs[2])
        y_new = eval_db(w_new)
        triple = sorted(zip(xs + [w_new], ys + [y_new]))
        k = int(np.argmax([y for _, y in triple]))
        k = min(max(k, 1), len(triple) - 2)
        xs = [triple[k - 1][0], triple[k][0], triple[k + 1][0]]
        ys = [triple[k - 1][1], triple[k][1], triple[k + 1][1]]
    w_best = xs[int(np.argmax(ys))]
    g_best, n_best = _gain_db_at(params, w_best, curve.r, curve.order, curve.delta, 0.0)
    return GainMaximum(omega_rel=float(w_best), G_db=float(g_best), n=float(n_best))


def peak_gain(params: DerivedParams, r: float, omega_range, delta: float = 0.0,
              order=math.inf, points: int = 400) -> GainMaximum:
    """Convenience: sweep then refine."""
    return max_gain(params, gain_sweep(params, r, omega_range, delta, order,
                                       points=points))


def bandwidth_fwhm(curve: GainCurve) -> float:
    """Full width (in Omega) where power gain crosses half its sweep maximum."""
    g_lin = 10.0 ** (curve.G_db / 10.0)
    i = int(np.argmax(g_lin))
    half = 0.5 * g_lin[i]
    w = curve.omega_rel

    def cross(step: int) -> float:
        j = i
        while 0 <= j + step < curve.G_db.size and g_lin[j + step] > half:
            j += step
        k = j + step
        if k < 0 or k >= curve.G_db.size:
            raise NumericalError("half-maximum crossing outside sweep range",
                                 side="left" if step < 0 else "right")
        frac = (half - g_lin[j]) / (g_lin[k] - g_lin[j])
        return float(w[j] + frac * (w[k] - w[j]))

    return cross(+1) - cross(-1)


def match_pump_power(params: DerivedParams, order, target_db: float, omega_range,
                     tol_db: float = 0.01, max_iter: int = 80) -> float:
    """Pump amplitude r whose peak zero-detuning gain equals target_db.

    Bisection on r against the refined sweep maximum; the pump threshold
    (where gain diverges) bounds the search from above.
    """
    order = _series.check_order(order)
    if not (math.isfinite(target_db) and target_db > 0.0):
        raise ValidationError("target gain must be finite and > 0 dB",
                              target_db=target_db)
    from .steady_state import find_cusp
    r_top = find_cusp(params, order).r

    def peak_db(r: float) -> float:
        try:
            return peak_gain(params, r, omega_range, 0.0, order, points=240).G_db
        except PoleError:
            return math.inf

    lo, g_lo = 0.0, 0.0
    hi = 0.9 * r_top
    g_hi = peak_db(hi)
    grow = 0
    while g_hi < target_db:
        grow += 1
        if grow > 60:
            raise ConvergenceError("target gain unreachable below pump threshold",
                                   target_db=target_db, r_reached=hi, g_db=g_hi)
        lo, g_lo = hi, g_hi
        hi = r_top - 0.5 * (r_top - hi)
        g_hi = peak_db(hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g_mid = peak_db(mid)
        if abs(g_mid - target_db) < tol_db and hi - lo < 1e-5:
            return mid
        if g_mid < target_db:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    raise ConvergenceError("pump-power match did not converge",
                           target_db=target_db, bracket=(lo, hi),
                           g_bracket=(g_lo, g_hi))
