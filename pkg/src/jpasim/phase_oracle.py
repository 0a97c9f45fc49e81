"""Independent lab-frame validator for the rotating-frame steady state.

Integrates the full classical junction-phase equation

    phi'' + (1/Q) phi' + sin(phi) = i_p cos(Omega tau)

with fixed-step RK4 from rest, extracts the steady-state fundamental
amplitude phi_a at the drive frequency, and compares the implied photon
number n_cl = (phi_a/4)^2 against the rotating-frame response solver.  The
drive conversion i_p = 8 r / (3^(3/4) Q^(3/2)) comes from harmonic balance
of sin(phi_a cos) -> 2 J1(phi_a) and is itself validated by this comparison.

Period-doubling / non-periodic behaviour is flagged (never silently
averaged): the component at Omega/2 exceeding 1e-3 of phi_a, or consecutive
drive periods disagreeing beyond 1e-3 in amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .device import DerivedParams
from .errors import DivergenceError, ValidationError
from .steady_state import PumpDrive, solve_photon_number

_THREE_34 = 3.0 ** 0.75


def pump_current_from_r(r: float, Q: float) -> float:
    """Drive amplitude i_p (units of the critical current) for scaled pump r."""
    if not (math.isfinite(r) and r >= 0):
        raise ValidationError("r must be finite and >= 0", r=repr(r))
    if not (math.isfinite(Q) and Q > 0):
        raise ValidationError("Q must be finite and > 0", Q=repr(Q))
    return 8.0 * r / (_THREE_34 * Q ** 1.5)


@dataclass(frozen=True)
class PhaseSimConfig:
    """Lab-frame integration controls.

    samples_per_period : base carrier resolution; the actual per-drive-period
                         count is round(spp * max(Omega, 1) / Omega) so the
                         fastest of (carrier, drive) keeps spp samples
    settle             : transient time; default 60*Q
    window_periods     : drive periods measured; even so the Omega/2 bin is exact
    """

    samples_per_period: int = 200
    settle: Optional[float] = None
    window_periods: int = 64

    def __post_init__(self):
        if not (isinstance(self.samples_per_period, int) and self.samples_per_period >= 16):
            raise ValidationError("samples_per_period must be an int >= 16",
                                  samples_per_period=repr(self.samples_per_period))
        if self.settle is not None and not (math.isfinite(self.settle) and self.settle >= 0):
            raise ValidationError("settle must be finite and >= 0", settle=repr(self.settle))
        if not (isinstance(self.window_periods, int) and self.window_periods >= 2
                and self.window_periods % 2 == 0):
            raise ValidationError("window_periods must be an even int >= 2",
                                  window_periods=repr(self.window_periods))


@dataclass(frozen=True)
class PhaseResponse:
    """Steady-state harmonic content of the driven junction phase."""

    omega_rel: float
    i_p: float
    phi_a: float                  # fundamental amplitude at Omega
    phase: float                  # phi ~ phi_a * cos(Omega tau + phase)
    n_cl: float                   # (phi_a/4)^2
    subharmonic_ratio: float      # |Omega/2 component| / phi_a
    period_drift: float           # consecutive-period amplitude rel. difference
    period_doubled: bool
    nonperiodic: bool

    @property
    def flagged(self) -> bool:
        return self.period_doubled or self.nonperiodic


def _integrate_lanes(i_p: float, omegas: np.ndarray, Q: float,
                     sim: PhaseSimConfig) -> list[PhaseResponse]:
    """Lockstep RK4 across drive-frequency lanes, each on its own time grid."""
    W = omegas.size
    spp = np.maximum(np.round(sim.samples_per_period * np.maximum(omegas, 1.0)
                              / omegas).astype(int), 16)
    dt = 2.0 * math.pi / (omegas * spp)
    settle = 60.0 * Q if sim.settle is None else sim.settle
    n_settle = np.ceil(settle / dt).astype(int)
    # start each window at a lane's own period boundary after its settle count
    n_settle = (np.ceil(n_settle / spp) * spp).astype(int)
    n_window = sim.window_periods * spp
    n_total_max = int(np.max(n_settle + n_window))

    phi = np.zeros(W)
    dphi = np.zeros(W)
    # window accumulators (fundamental, half-frequency, per-period)
    acc = np.zeros(W, dtype=complex)
    acc_half = np.zeros(W, dtype=complex)
    per_acc = np.zeros(W, dtype=complex)
    prev_per = np.full(W, np.nan, dtype=complex)
    drift = np.zeros(W)
    lane_idx = np.arange(W)

    def rhs(tau, y0, y1):
        return y1, -y1 / Q - np.sin(y0) + i_p * np.cos(omegas * tau)

    for i in range(n_total_max):
        tau = i * dt
        in_window = (i >= n_settle) & (i < n_settle + n_window)
        if np.any(in_window):
            ph = np.exp(1j * omegas * tau)
            w_phi = np.where(in_window, phi, 0.0)
            acc += w_phi * ph
            acc_half += w_phi * np.exp(0.5j * omegas * tau)
            per_acc += w_phi * ph
            # finalize a drive period for lanes crossing their boundary
            j = i + 1 - n_settle
            ending = in_window & (j % spp == 0) & (j > 0)
            if np.any(ending):
                cur = per_acc[ending] * 2.0 / spp[ending]
                prev = prev_per[ending]
                have_prev = ~np.isnan(prev.real)
                if np.any(have_prev):
                    a_cur = np.abs(cur[have_prev])
                    a_prev = np.abs(prev[have_prev])
                    rel = np.abs(a_cur - a_prev) / np.maximum(
                        np.maximum(a_cur, a_prev), 1e-300)
                    ids = lane_idx[ending][have_prev]
                    np.maximum.at(drift, ids, rel)
                prev_per[ending] = cur
                per_acc[ending] = 0.0
        # RK4 step
        k1p, k1v = rhs(tau, phi, dphi)
        k2p, k2v = rhs(tau + 0.5 * dt, phi + 0.5 * dt * k1p, dphi + 0.5 * dt * k1v)
        k3p, k3v = rhs(tau + 0.5 * dt, phi + 0.5 * dt * k2p, dphi + 0.5 * dt * k2v)
        k4p, k4v = rhs(tau + dt, phi + dt * k3p, dphi + dt * k3v)
        phi = phi + (dt / 6.0) * (k1p + 2.0 * (k2p + k3p) + k4p)
        dphi = dphi + (dt / 6.0) * (k1v + 2.0 * (k2v + k3v) + k4v)
        if i % 256 == 0 or i == n_total_max - 1:
            peak = float(np.max(np.abs(phi)))
            if not math.isfinite(peak) or peak > 1e4:
                raise DivergenceError("junction phase diverged (running state?)",
                                      tau=float(np.max(tau)), peak=peak, i_p=i_p)

    out = []
    for k in range(W):
        c = acc[k] * 2.0 / n_window[k]
        c_half = acc_half[k] * 2.0 / n_window[k]
        phi_a = abs(c)
        sub = abs(c_half) / phi_a if phi_a > 0 else 0.0
        doubled = sub > 1e-3
        nonper = drift[k] > 1e-3
        out.append(PhaseResponse(
            omega_rel=float(omegas[k]), i_p=i_p, phi_a=float(phi_a),
            phase=float(-np.angle(c)) if phi_a > 0 else 0.0,
            n_cl=float((phi_a / 4.0) ** 2),
            subharmonic_ratio=float(sub), period_drift=float(drift[k]),
            period_doubled=bool(doubled), nonperiodic=bool(nonper)))
    return out


def ring_down_rate(phi0: float, Q: float, spans: float = 20.0,
                   samples_per_period: int = 200) -> float:
    """Amplitude decay rate of the unforced junction, from a log-envelope fit.

    Integrates phi'' + phi'/Q + sin(phi) = 0 from (phi0, 0) over spans*Q time
    units and fits log|peak| against peak time.  For small phi0 this recovers
    the linear envelope rate 1/(2Q).
    """
    if not (math.isfinite(phi0) and 0 < abs(phi0) < math.pi):
        raise ValidationError("phi0 must be finite with 0 < |phi0| < pi",
                              phi0=repr(phi0))
    if not (math.isfinite(Q) and Q > 0):
        raise ValidationError("Q must be finite and > 0", Q=repr(Q))
    dt = 2.0 * math.pi / samples_per_period
    steps = int(spans * Q / dt)
    phi, dphi = phi0, 0.0
    peaks_t, peaks = [], []
    prev_sign = 0.0
    for i in range(steps):
        k1p, k1v = dphi, -dphi / Q - math.sin(phi)
        p2, v2 = phi + 0.5 * dt * k1p, dphi + 0.5 * dt * k1v
        k2p, k2v = v2, -v2 / Q - math.sin(p2)
        p3, v3 = phi + 0.5 * dt * k2p, dphi + 0.5 * dt * k2v
        k3p, k3v = v3, -v3 / Q - math.sin(p3)
        p4, v4 = phi + dt * k3p, dphi + dt * k3v
        k4p, k4v = v4, -v4 / Q - math.sin(p4)
        phi += (dt / 6.0) * (k1p + 2.0 * (k2p + k3p) + k4p)
        dphi += (dt / 6.0) * (k1v + 2.0 * (k2v + k3v) + k4v)
        # sign change of the velocity marks an envelope touch
        if dphi * prev_sign < 0.0:
            peaks_t.append(i * dt)
            peaks.append(abs(phi))
        prev_sign = dphi
    if len(peaks) < 4:
        raise DivergenceError("too few envelope peaks for a decay fit",
                              peaks=len(peaks))
    t = np.asarray(peaks_t)
    a = np.log(np.asarray(peaks))
    slope = np.polyfit(t, a, 1)[0]
    return -float(slope)


def integrate_phase_eq(i_p: float, omega_rel: float, Q: float,
                       sim: Optional[PhaseSimConfig] = None) -> PhaseResponse:
    """Steady-state response of the classical phase equation at one frequency."""
    if not (math.isfinite(i_p) and i_p >= 0):
        raise ValidationError("i_p must be finite and >= 0", i_p=repr(i_p))
    if not (math.isfinite(omega_rel) and omega_rel > 0):
        raise ValidationError("omega_rel must be finite and > 0",
                              omega_rel=repr(omega_rel))
    if not (math.isfinite(Q) and Q > 0):
        raise ValidationError("Q must be finite and > 0", Q=repr(Q))
    sim = sim or PhaseSimConfig()
    return _integrate_lanes(i_p, np.array([omega_rel], dtype=float), Q, sim)[0]


@dataclass(frozen=True)
class ComparisonRow:
    omega_rel: float
    phi_a: float
    n_cl: float
    n_rwa: float
    rel_dev: float
    flagged: bool


@dataclass(frozen=True)
class ResonanceComparison:
    rows: tuple
    max_rel_dev: float
    any_flagged: bool
    r: float
    i_p: float


def compare_resonance_curves(params: DerivedParams, r: float, omega_grid,
                             sim: Optional[PhaseSimConfig] = None) -> ResonanceComparison:
    """Lab-frame resonance curve against the rotating-frame photon number.

    In the bistable strip the from-rest lab trajectory lands on one branch;
    the deviation is therefore taken against the closest member of the
    rotating-frame root set (branch identity is not asserted).
    """
    omegas = np.asarray(omega_grid, dtype=float)
    if omegas.size == 0 or np.any(~np.isfinite(omegas)) or np.any(omegas <= 0):
        raise ValidationError("omega_grid must be non-empty, finite and > 0")
    from .steady_state import find_cusp
    r_top = find_cusp(params, math.inf).r
    if not (0.0 <= r < r_top):
        raise ValidationError(
            "r must sit below the bistability onset for a comparable sweep",
            r=r, r_cusp=r_top)
    sim = sim or PhaseSimConfig()
    Q = params.Q
    i_p = pump_current_from_r(r, Q)
    responses = _integrate_lanes(i_p, omegas, Q, sim)
    rows = []
    worst = 0.0
    any_flag = False
    for resp in responses:
        states = solve_photon_number(
            params, PumpDrive(r=r, omega_rel=resp.omega_rel, order=math.inf))
        n_set = [s.n for s in states]
        if r == 0.0:
            n_best, dev = 0.0, 0.0 if resp.n_cl == 0.0 else resp.n_cl
        else:
            devs = [abs(resp.n_cl - x) / x for x in n_set]
            k = int(np.argmin(devs))
            n_best, dev = n_set[k], devs[k]
        worst = max(worst, dev)
        any_flag = any_flag or resp.flagged
        rows.append(ComparisonRow(omega_rel=resp.omega_rel, phi_a=resp.phi_a,
                                  n_cl=resp.n_cl, n_rwa=n_best, rel_dev=dev,
                                  flagged=resp.flagged))
    return ResonanceComparison(rows=tuple(rows), max_rel_dev=worst,
                               any_flagged=any_flag, r=r, i_p=i_p)
