"""Pump steady state of the driven nonlinear resonator.

Solves the amplitude response equation

    F(n) = [1/(4Q^2) + (1 - Omega + S_N(n))^2] * n - r^2/(sqrt(27) Q^3) = 0

for the normalized photon number n, where S_N is the frequency-pull series
truncated at order N (order=inf uses the closed Bessel form).  Also classifies
branch stability (dF/dn > 0), maps the bistable region over an (Omega, r)
grid, and locates the bifurcation point where the bistable wedge closes
(F = F_n = F_nn = 0).

Normalization: r scales the input pump amplitude to the critical value of the
order-1 (Kerr) theory, so the order-1 wedge tip sits exactly at
(Omega, r) = (1 - sqrt(3)/(2Q), 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _series
from .device import DerivedParams
from .errors import ConvergenceError, NumericalError, ValidationError
from .special import j1_ratio

SQRT27 = math.sqrt(27.0)

#: photon-number search ceiling: phase oscillation amplitude 4*sqrt(n) <= 8 rad
N_MAX_DEFAULT = 4.0

_SCAN_POINTS = 4000


@dataclass(frozen=True)
class PumpDrive:
    """Normalized pump specification.

    r         : input amplitude relative to the order-1 critical amplitude, >= 0
    omega_rel : pump frequency over resonance frequency, > 0
    phase     : input pump phase, radians
    order     : nonlinearity truncation order, positive int or math.inf
    """

    r: float
    omega_rel: float
    phase: float = 0.0
    order: float = math.inf

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValidationError(f"pump amplitude r must be finite and >= 0, got {self.r!r}", r=self.r)
        if not (math.isfinite(self.omega_rel) and self.omega_rel > 0):
            raise ValidationError(f"omega_rel must be finite and > 0, got {self.omega_rel!r}",
                                  omega_rel=self.omega_rel)
        if not math.isfinite(self.phase):
            raise ValidationError("pump phase must be finite", phase=repr(self.phase))
        _series.check_order(self.order)


@dataclass(frozen=True)
class SteadyState:
    """One steady-state branch: photon number, pump amplitude, stability."""

    n: float
    alpha: complex
    stable: bool
    branch_count: int


def detuning_term(n, order=math.inf):
    """Frequency-pull sum S_N(n); order=inf evaluates the closed Bessel form."""
    order = _series.check_order(order)
    arr = np.asarray(n, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ValidationError("photon number must be finite and >= 0", n=repr(n))
    if order == math.inf:
        out = j1_ratio(n) - 0.5
    else:
        out = _series.detuning_shift(arr, order)
        if np.ndim(n) == 0:
            out = float(out)
    return out


def _drive_strength(r: float, Q: float) -> float:
    return r * r / (SQRT27 * Q ** 3)


def _residual_grid(n: np.ndarray, omega_rel: float, r: float, Q: float, order) -> np.ndarray:
    """F(n) on an array, using the same S evaluation as the polished solve."""
    if order == math.inf:
        s = j1_ratio(n) - 0.5
    else:
        s = _series.detuning_shift(n, order)
    d = 1.0 - omega_rel + s
    return (1.0 / (4.0 * Q * Q) + d * d) * n - _drive_strength(r, Q)


def _residual_scalar(n: float, omega_rel: float, r: float, Q: float, order) -> float:
    return float(_residual_grid(np.asarray(n, dtype=float), omega_rel, r, Q, order))


def _residual_slope(n: float, omega_rel: float, Q: float, order) -> float:
    """dF/dn via the series derivatives (valid for every order incl. inf)."""
    s, s1, _, _ = _series.detuning_shift_derivs(n, order)
    d = 1.0 - omega_rel + s
    return float(d * d + 1.0 / (4.0 * Q * Q) + 2.0 * n * d * s1)


def _scan_grid(n_max: float) -> np.ndarray:
    # geometric segment resolves the near-zero root at weak drive; linear
    # segment covers the fold region
    n_geom = _SCAN_POINTS * 3 // 8
    geom = np.geomspace(1e-12, 0.01, n_geom)
    lin = np.linspace(0.01, n_max, _SCAN_POINTS - n_geom + 1)[1:]
    return np.concatenate([geom, lin])


def solve_photon_number(params: DerivedParams, drive: PumpDrive,
                        n_max: float = N_MAX_DEFAULT) -> list[SteadyState]:
    """All steady-state roots n in (0, n_max], ascending, stability-tagged."""
    Q = params.Q
    if drive.r == 0.0 or _drive_strength(drive.r, Q) == 0.0:
        # r so small that r^2/(sqrt(27) Q^3) underflows: response is zero
        return [SteadyState(n=0.0, alpha=0.0 + 0.0j, stable=True, branch_count=1)]

    grid = _scan_grid(n_max)
    f = _residual_grid(grid, drive.omega_rel, drive.r, Q, drive.order)
    roots: list[float] = []
    # F(0) = -drive strength < 0 for r > 0, so a leading sign flip means a root
    # below the first grid point
    if f[0] > 0.0:
        roots.append(brentq(_residual_scalar, 0.0, grid[0],
                            args=(drive.omega_rel, drive.r, Q, drive.order),
                            xtol=1e-15, rtol=8.9e-16))
    flips = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    for i in flips:
        roots.append(brentq(_residual_scalar, grid[i], grid[i + 1],
                            args=(drive.omega_rel, drive.r, Q, drive.order),
                            xtol=1e-15, rtol=8.9e-16))
    # exact zeros on grid nodes (measure-zero, but keep the count honest)
    for i in np.nonzero(f == 0.0)[0]:
        roots.append(float(grid[i]))

    roots = sorted(roots)
    deduped: list[float] = []
    for x in roots:
        if not deduped or x - deduped[-1] > 1e-10 * max(1.0, x):
            deduped.append(x)
    if len(deduped) > 3:
        raise NumericalError(
            f"{len(deduped)} steady-state roots found; expected at most 3 "
            "(n_max too large or pathological truncation order)",
            roots=deduped, omega_rel=drive.omega_rel, r=drive.r, order=repr(drive.order))
    count = len(deduped)
    return [SteadyState(n=x,
                        alpha=pump_amplitude(params, drive, x, _check=False),
                        stable=_residual_slope(x, drive.omega_rel, Q, drive.order) > 0.0,
                        branch_count=count)
            for x in deduped]


def default_branch(states: list[SteadyState]) -> SteadyState:
    """Smallest stable branch: the one reached by adiabatic power-up."""
    for s in states:
        if s.stable:
            return s
    raise NumericalError("no stable steady-state branch", n_values=[s.n for s in states])


def pump_amplitude(params: DerivedParams, drive: PumpDrive, n: float,
                   _check: bool = True) -> complex:
    """Complex intra-resonator pump amplitude for a steady-state root n."""
    if not (math.isfinite(n) and n >= 0):
        raise ValidationError("photon number must be finite and >= 0", n=repr(n))
    Q = params.Q
    d = 1.0 - drive.omega_rel + float(detuning_term(n, drive.order))
    denom = 1.0 / (2.0 * Q) + 1j * d
    amp_in = drive.r * params.alpha_in_crit / math.sqrt(Q * params.omega0)
    alpha = amp_in * complex(math.cos(drive.phase), math.sin(drive.phase)) / denom
    if _check:
        n_back = abs(alpha) ** 2 * (-params.kerr_ratio)
        if abs(n_back - n) > 1e-6 * max(1.0, n):
            raise ValidationError(
                "photon number inconsistent with pump amplitude (not a steady-state root?)",
                n=n, n_back=n_back, omega_rel=drive.omega_rel, r=drive.r)
    return alpha


def reflection_s11(drive: PumpDrive, n: float, Q: float) -> complex:
    """Pump reflection coefficient; unit modulus for the lossless resonator."""
    d = 1.0 - drive.omega_rel + float(detuning_term(n, drive.order))
    return (0.5 - 1j * Q * d) / (0.5 + 1j * Q * d)


@dataclass(frozen=True)
class StabilityDiagram:
    omega_grid: np.ndarray
    r_grid: np.ndarray
    branch_count: np.ndarray  # shape (len(omega_grid), len(r_grid))


def stability_diagram(params: DerivedParams, omega_grid, r_grid,
                      order=math.inf, n_max: float = N_MAX_DEFAULT) -> StabilityDiagram:
    """Branch count over an (Omega, r) grid, via the same scan as the solver."""
    order = _series.check_order(order)
    omega_grid = np.asarray(omega_grid, dtype=float)
    r_grid = np.asarray(r_grid, dtype=float)
    for name, g in (("omega_grid", omega_grid), ("r_grid", r_grid)):
        if g.size == 0 or np.any(~np.isfinite(g)) or np.any(np.diff(g) <= 0):
            raise ValidationError(f"{name} must be non-empty, finite and strictly increasing",
                                  grid=name)
    Q = params.Q
    n = _scan_grid(n_max)
    if order == math.inf:
        s = j1_ratio(n) - 0.5
    else:
        s = _series.detuning_shift(n, order)
    d = 1.0 - omega_grid[:, None] + s[None, :]
    base = (1.0 / (4.0 * Q * Q) + d * d) * n[None, :]     # (n_omega, n_scan)
    counts = np.empty((omega_grid.size, r_grid.size), dtype=int)
    for j, r in enumerate(r_grid):
        if r == 0.0:
            counts[:, j] = 1
            continue
        f = base - _drive_strength(float(r), Q)
        sign = np.sign(f)
        c = np.sum(sign[:, :-1] * sign[:, 1:] < 0, axis=1) + (f[:, 0] > 0.0)
        counts[:, j] = c
    bad = np.nonzero(counts > 3)
    if bad[0].size:
        i, j = bad[0][0], bad[1][0]
        raise NumericalError("more than 3 steady-state roots in stability scan",
                             omega_rel=float(omega_grid[i]), r=float(r_grid[j]),
                             count=int(counts[i, j]))
    return StabilityDiagram(omega_grid=omega_grid, r_grid=r_grid, branch_count=counts)


@dataclass(frozen=True)
class CuspPoint:
    """Wedge-tip of the bistable region: F = F_n = F_nn = 0."""

    omega_rel: float
    r: float
    n: float
    iterations: int
    residual_fn: float
    residual_fnn: float


def _cusp_system(n: float, omega_rel: float, Q: float, order):
    s, s1, s2, s3 = _series.detuning_shift_derivs(n, order)
    d = 1.0 - omega_rel + s
    f_n = d * d + 1.0 / (4.0 * Q * Q) + 2.0 * n * d * s1
    f_nn = 4.0 * d * s1 + 2.0 * n * s1 * s1 + 2.0 * n * d * s2
    f_nnn = 6.0 * s1 * s1 + 6.0 * d * s2 + 6.0 * n * s1 * s2 + 2.0 * n * d * s3
    dfn_dw = -2.0 * (d + n * s1)
    dfnn_dw = -(4.0 * s1 + 2.0 * n * s2)
    return f_n, f_nn, f_nnn, dfn_dw, dfnn_dw


def find_cusp(params: DerivedParams, order=math.inf, max_iter: int = 60) -> CuspPoint:
    """Solve F = F_n = F_nn = 0 by damped Newton on (F_n, F_nn) in (n, Omega).

    Seeded at the analytic order-1 tip (n, Omega) = (1/(sqrt(3) Q),
    1 - sqrt(3)/(2Q)); r then follows from F = 0.  Residual targets 1e-12.
    """
    order = _series.check_order(order)
    Q = params.Q
    n = 1.0 / (math.sqrt(3.0) * Q)
    omega = 1.0 - math.sqrt(3.0) / (2.0 * Q)
    it = 0
    for it in range(1, max_iter + 1):
        f_n, f_nn, f_nnn, dfn_dw, dfnn_dw = _cusp_system(n, omega, Q, order)
        if abs(f_n) < 1e-14 and abs(f_nn) < 1e-13:
            break
        jac = np.array([[f_nn, dfn_dw], [f_nnn, dfnn_dw]], dtype=float)
        try:
            dn, domega = np.linalg.solve(jac, [-f_n, -f_nn])
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian in bifurcation-point Newton",
                                   n=n, omega_rel=omega, order=repr(order)) from exc
        lam = 1.0
        while lam > 1e-8 and n + lam * dn <= 0.0:
            lam *= 0.5
        n += lam * dn
        omega += lam * domega
    f_n, f_nn, *_ = _cusp_system(n, omega, Q, order)
    if abs(f_n) > 1e-10 or abs(f_nn) > 1e-10:
        raise ConvergenceError("bifurcation-point Newton did not converge",
                               n=n, omega_rel=omega, residual_fn=f_n,
                               residual_fnn=f_nn, iterations=it, order=repr(order))
    s = float(detuning_term(n, order)) if order == math.inf \
        else float(_series.detuning_shift(n, order))
    d = 1.0 - omega + s
    r = math.sqrt((1.0 / (4.0 * Q * Q) + d * d) * n * SQRT27 * Q ** 3)
    return CuspPoint(omega_rel=float(omega), r=float(r), n=float(n),
                     iterations=it, residual_fn=float(f_n), residual_fnn=float(f_nn))
