"""Large-signal envelope dynamics and gain saturation.

The signal (u) and its conjugate partner (v) evolve as independent complex
variables — a doubled phase space in which the physical configuration
v = u* is an invariant manifold.  Only the u-equation is driven
(a_in(tau) = a_in_mag * e^{-i*delta*tau} / sqrt(Q)); the v-drive is kept at
zero so the idler enters unseeded and the extracted gain is phase-insensitive
even at delta = 0.

Four right-hand sides share the integrator:

    linear        du = l1 u + l2 v + f(tau)
    cubic         linear + c1 u^2 + 2 c2 u v + 3 c3 u^2 v
    cubic_c3_only cubic with c1 = c2 = 0
    full_sine     du = -[1/(2Q) + i(1 - Omega + S(m))] u + i alpha (S(n) - S(m)) + f
                  with m = n + |K/omega0| (alpha* u + alpha v + u v)

All four use classical fixed-step RK4 from u = v = 0.  Gain is the projection
of u_out = u/sqrt(Q) - a_in onto e^{-i*delta*tau} over an integer number of
periods after settling; every reported point carries a step-halving 0.01 dB
convergence certificate plus a split-window stationarity check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _series
from .device import DerivedParams
from .errors import DivergenceError, ValidationError
from .linear_gain import LinearCoefficients, linear_coefficients
from .steady_state import PumpDrive, SteadyState

MODELS = ("linear", "cubic", "cubic_c3_only", "full_sine")

#: settle ceiling (units of 1/omega0): guards against an exactly-critical pump
MAX_SETTLE = 4.0e5

_BLOWUP_CHECK_EVERY = 64


@dataclass(frozen=True)
class CubicCoefficients:
    """Quadratic and cubic couplings of the truncated signal equation."""

    c1: complex
    c2: complex
    c3: complex


def cubic_coefficients(params: DerivedParams, drive: PumpDrive,
                       state: SteadyState) -> CubicCoefficients:
    """c1, c2, c3 at the pump operating point (order taken from the drive)."""
    n = state.n
    if not (math.isfinite(n) and n >= 0):
        raise ValidationError("photon number must be finite and >= 0", n=repr(n))
    w = float(_series.quad_factor(n, drive.order))
    x = float(_series.cube_factor(n, drive.order))
    kr = params.kerr_ratio
    c1 = -1j * kr * state.alpha.conjugate() * w
    c2 = -1j * kr * state.alpha * w          # = (alpha/alpha*) c1, defined at alpha = 0
    c3 = -1j * kr * x / 3.0
    return CubicCoefficients(c1=complex(c1), c2=complex(c2), c3=complex(c3))


@dataclass(frozen=True)
class SimConfig:
    """Integrator controls; None fields fall back to documented defaults.

    dt     : RK4 step (snapped to divide the beat period when delta != 0);
             default min(0.25, 2*pi/(40*max(|delta|, 1/Q)))
    settle : transient time before measuring; default extends 40*Q by the
             linearized slow-mode decay estimate (high gain settles slowly)
    window : measurement span; default max(20 periods of delta, 20*Q)
    """

    dt: Optional[float] = None
    settle: Optional[float] = None
    window: Optional[float] = None
    store: str = "window"                    # "window" | "full"
    certify: bool = True                     # step-halving 0.01 dB certificate
    stationarity_tol: float = 1e-3
    certificate_tol_db: float = 0.01
    blowup_limit: float = 1e9

    def __post_init__(self):
        for name in ("dt", "settle", "window"):
            x = getattr(self, name)
            if x is not None and not (math.isfinite(x) and x > 0):
                raise ValidationError(f"SimConfig.{name} must be finite and > 0",
                                      **{name: repr(x)})
        if self.store not in ("window", "full"):
            raise ValidationError("SimConfig.store must be 'window' or 'full'",
                                  store=repr(self.store))
        if not (self.stationarity_tol > 0 and self.certificate_tol_db > 0
                and self.blowup_limit > 0):
            raise ValidationError("SimConfig tolerances must be > 0")


@dataclass(frozen=True)
class EnvelopeSeries:
    """Stored envelope samples at tau = tau0 + j*dt, plus run diagnostics."""

    tau0: float
    dt: float
    u: np.ndarray
    v: np.ndarray
    a_in_mag: float
    delta: float
    q: float
    samples_per_period: int        # 0 when delta == 0
    settle_used: float
    max_conj_deviation: float      # max |v - u*| seen over the whole run

    def tau(self) -> np.ndarray:
        return self.tau0 + self.dt * np.arange(self.u.shape[0])


@dataclass(frozen=True)
class SaturationPoint:
    a_in_mag: float                # input amplitude, sqrt(omega0) units
    a_in_flux: float               # input photon flux |a_in|^2, photons/s
    delta: float
    G_db: float
    converged: bool
    step_used: float


@dataclass(frozen=True)
class SaturationCurve:
    points: tuple
    G0_db: float
    p1db: Optional[float]
    stiff_pump_amp: Optional[float]    # input amplitude at the 20 dB marker
    pump_amp_w0: float                 # pump input amplitude, sqrt(omega0) units
    pump_flux: float                   # pump input photon flux, photons/s
    model: str
    delta: float
    # context for refinement ops (compression_point re-simulation)
    params: DerivedParams = field(repr=False)
    drive: PumpDrive = field(repr=False)
    state: SteadyState = field(repr=False)
    sim: SimConfig = field(repr=False)

    @property
    def a_in_mag(self) -> np.ndarray:
        return np.array([p.a_in_mag for p in self.points])

    @property
    def G_db(self) -> np.ndarray:
        return np.array([p.G_db for p in self.points])


def _check_model(model: str) -> str:
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}; expected one of {MODELS}",
                              model=repr(model))
    return model


def default_dt(Q: float, delta: float) -> float:
    """Resolve the slowest of the rotating-frame rates with 40 points."""
    return min(0.25, 2.0 * math.pi / (40.0 * max(abs(delta), 1.0 / Q)))


def _settle_time(Q: float, co: LinearCoefficients, requested: Optional[float]) -> float:
    if requested is not None:
        return requested
    base = 40.0 * Q
    disc = abs(co.l2) ** 2 - co.l1.imag ** 2
    rate = 1.0 / (2.0 * Q) - (math.sqrt(disc) if disc > 0.0 else 0.0)
    if rate <= 0.0:
        return base      # at/above threshold: stationarity flag does the talking
    return min(max(base, 10.0 / rate), MAX_SETTLE)


def _grid(Q: float, delta: float, sim: SimConfig, co: LinearCoefficients):
    """(dt, n_settle, n_window, samples_per_period) with period-exact snapping."""
    dt = sim.dt if sim.dt is not None else default_dt(Q, delta)
    if delta != 0.0:
        period = 2.0 * math.pi / abs(delta)
        spp = max(int(math.ceil(period / dt)), 4)
        dt = period / spp
        window = sim.window if sim.window is not None else max(20.0 * period, 20.0 * Q)
        periods = max(int(math.ceil(window / period)), 2)
        periods += periods % 2          # even count: half-window split stays period-exact
        n_window = periods * spp
    else:
        spp = 0
        window = sim.window if sim.window is not None else 20.0 * Q
        n_window = max(int(round(window / dt)), 2)
    settle = _settle_time(Q, co, sim.settle)
    n_settle = int(math.ceil(settle / dt))
    return dt, n_settle, n_window, spp


def _rhs_factory(model: str, params: DerivedParams, drive: PumpDrive,
                 state: SteadyState, amps: np.ndarray, delta: float,
                 conjugate_drive: bool, m_frozen: bool):
    """Batched right-hand side f(t, y) with y = [u_lanes, v_lanes]."""
    Q = params.Q
    inv_sqrt_q = 1.0 / math.sqrt(Q)
    drv = amps * inv_sqrt_q                      # per-lane real drive amplitude

    if model in ("linear", "cubic", "cubic_c3_only"):
        co = linear_coefficients(params, drive, state)
        l1, l2 = co.l1, co.l2
        l1c, l2c = l1.conjugate(), l2.conjugate()
        if model == "linear":
            c1 = c2 = c3 = 0.0 + 0.0j
        else:
            cc = cubic_coefficients(params, drive, state)
            c3 = cc.c3
            c1, c2 = (0.0 + 0.0j, 0.0 + 0.0j) if model == "cubic_c3_only" \
                else (cc.c1, cc.c2)
        c1c, c2x, c3x = c1.conjugate(), 2.0 * c2, 3.0 * c3
        c2xc, c3xc = c2x.conjugate(), c3x.conjugate()
        nonlinear = model != "linear"

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            u, v = y[0], y[1]
            ph = cmath.exp(-1j * delta * t)
            du = l1 * u + l2 * v + drv * ph
            dv = l1c * v + l2c * u
            if conjugate_drive:
                dv = dv + drv * ph.conjugate()
            if nonlinear:
                uv = u * v
                du = du + u * (c1 * u + c2x * v + c3x * uv)
                dv = dv + v * (c1c * v + c2xc * u + c3xc * uv)
            return np.stack((du, dv))

        return rhs, co

    # full_sine: junction nonlinearity kept to all orders of the drive's
    # truncation; the photon-number argument m leaves the real axis off the
    # physical manifold, so S is evaluated through the complex series path.
    co = linear_coefficients(params, drive, state)
    n0 = state.n
    alpha = state.alpha
    alpha_c = alpha.conjugate()
    akr = -params.kerr_ratio                  # |K|/omega0 > 0
    om = drive.omega_rel
    half_kappa = 1.0 / (2.0 * Q)

    if drive.order == math.inf:
        state_holder = {"bound": max(4.0 * n0, 0.05)}
        state_holder["k"] = _series.terms_needed(state_holder["bound"])
    else:
        state_holder = {"bound": math.inf, "k": int(drive.order)}
    s_n = complex(_series.detuning_shift_trunc(n0, state_holder["k"]))

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        u, v = y[0], y[1]
        if m_frozen:
            m = n0
            s_m = s_n
        else:
            m = n0 + akr * (alpha_c * u + alpha * v + u * v)
            mx = float(np.max(np.abs(m)))
            if mx > state_holder["bound"]:
                if mx > _series.ARG_LIMIT:
                    raise DivergenceError(
                        "effective photon number left the series trust region",
                        max_abs_m=mx, tau=t)
                state_holder["bound"] = 1.3 * mx
                state_holder["k"] = _series.terms_needed(state_holder["bound"])
            s_m = _series.detuning_shift_trunc(m, state_holder["k"])
        det = 1j * (1.0 - om + s_m)
        shift = s_n - s_m
        ph = cmath.exp(-1j * delta * t)
        du = -(half_kappa + det) * u + 1j * alpha * shift + drv * ph
        dv = -(half_kappa - det) * v - 1j * alpha_c * shift
        if conjugate_drive:
            dv = dv + drv * ph.conjugate()
        return np.stack((du, dv))

    return rhs, co


def _run(model: str, params: DerivedParams, drive: PumpDrive, state: SteadyState,
         amps: np.ndarray, delta: float, sim: SimConfig,
         conjugate_drive: bool = False, m_frozen: bool = False,
         initial=None) -> EnvelopeSeries:
    """Batched RK4 over amplitude lanes; stores the measurement window."""
    rhs, co = _rhs_factory(model, params, drive, state, amps, delta,
                           conjugate_drive, m_frozen)
    dt, n_settle, n_window, spp = _grid(params.Q, delta, sim, co)
    full = sim.store == "full"
    n_total = n_settle + n_window
    W = amps.shape[0]
    y = np.zeros((2, W), dtype=complex)
    if initial is not None:
        y[0, :] = initial[0]
        y[1, :] = initial[1]
    n_store = n_total if full else n_window
    store_from = 0 if full else n_settle
    u_rec = np.empty((n_store, W), dtype=complex)
    v_rec = np.empty((n_store, W), dtype=complex)
    track_conj = conjugate_drive
    max_dev = 0.0
    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(n_total):
        if i >= store_from:
            j = i - store_from
            u_rec[j] = y[0]
            v_rec[j] = y[1]
        t = i * dt
        k1 = rhs(t, y)
        k2 = rhs(t + half, y + half * k1)
        k3 = rhs(t + half, y + half * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if track_conj:
            dev = float(np.max(np.abs(y[1] - y[0].conjugate())))
            if dev > max_dev:
                max_dev = dev
        if i % _BLOWUP_CHECK_EVERY == 0 or i == n_total - 1:
            peak = float(np.max(np.abs(y)))
            if not math.isfinite(peak) or peak > sim.blowup_limit:
                raise DivergenceError(
                    "envelope blow-up: pump above oscillation threshold or step too large",
                    tau=(i + 1) * dt, peak=peak, model=model)
    return EnvelopeSeries(tau0=store_from * dt, dt=dt, u=u_rec, v=v_rec,
                          a_in_mag=float(amps[0]) if W == 1 else math.nan,
                          delta=delta, q=params.Q, samples_per_period=spp,
                          settle_used=n_settle * dt, max_conj_deviation=max_dev)


def integrate_envelope(model: str, params: DerivedParams, drive: PumpDrive,
                       state: SteadyState, a_in_mag: float, delta: float = 0.0,
                       sim: Optional[SimConfig] = None,
                       conjugate_drive: bool = False,
                       initial=None) -> EnvelopeSeries:
    """Integrate one envelope run from u = v = 0 and store the window.

    conjugate_drive=True feeds the v-equation the conjugate input (the
    physical configuration, which keeps v = u*); the default leaves the
    v-drive at zero.  `initial` optionally overrides the (u, v) start.
    """
    _check_model(model)
    if not (math.isfinite(a_in_mag) and a_in_mag >= 0.0):
        raise ValidationError("a_in_mag must be finite and >= 0", a_in_mag=repr(a_in_mag))
    if not math.isfinite(delta):
        raise ValidationError("delta must be finite", delta=repr(delta))
    sim = sim or SimConfig()
    return _run(model, params, drive, state, np.array([a_in_mag], dtype=float),
                delta, sim, conjugate_drive=conjugate_drive, initial=initial)


def _lane_tones(series: EnvelopeSeries, delta: float, n_use: int):
    """Per-lane projection of u/sqrt(Q) onto e^{-i delta tau}, full + half windows.

    Callers subtract the per-lane input amplitude to get the output tone
    (the a_in term of u_out projects to exactly its amplitude on integer
    periods).
    """
    u = series.u[-n_use:]
    tau = series.tau0 + series.dt * np.arange(series.u.shape[0])[-n_use:]
    ph = np.exp(1j * delta * tau)
    proj = (u / math.sqrt(series.q)) * ph[:, None]
    m = n_use // 2
    return proj.mean(axis=0), proj[:m].mean(axis=0), proj[m:].mean(axis=0)


def extract_tone(series: EnvelopeSeries, delta: Optional[float] = None,
                 window: Optional[float] = None) -> complex:
    """Output-field amplitude at the signal frequency.

    Projects u_out = u/sqrt(Q) - a_in onto e^{-i*delta*tau} (window mean for
    delta = 0) over the last `window` time units (default: everything stored,
    which the integrator sizes to an integer period count).
    """
    delta = series.delta if delta is None else delta
    n_stored = series.u.shape[0]
    if window is None:
        n_use = n_stored
    else:
        if delta != 0.0:
            period = 2.0 * math.pi / abs(delta)
            k = int(window / period + 1e-9)
            if k < 1:
                raise ValidationError("window shorter than one signal period",
                                      window=window, period=period)
            n_use = min(k * max(series.samples_per_period, 1), n_stored)
        else:
            n_use = min(max(int(round(window / series.dt)), 1), n_stored)
    lane = 0
    u = series.u[-n_use:, lane] if series.u.ndim == 2 else series.u[-n_use:]
    tau = series.tau0 + series.dt * (np.arange(n_stored)[-n_use:])
    proj = (u / math.sqrt(series.q)) * np.exp(1j * delta * tau)
    # the drive term is a pure tone at exactly -delta: its projection is its
    # amplitude (rectangle rule is exact on integer periods)
    return complex(proj.mean() - series.a_in_mag)


def _gains_from_series(series: EnvelopeSeries, amps: np.ndarray, delta: float,
                       stationarity_tol: float):
    """(G_db per lane, stationary flags per lane) from the stored window."""
    tone, first, second = _lane_tones(series, delta, series.u.shape[0])
    tone = tone - amps
    first = first - amps
    second = second - amps
    scale = np.maximum(np.maximum(np.abs(first), np.abs(second)), 1e-300)
    stationary = np.abs(first - second) / scale < stationarity_tol
    mag = np.abs(tone)
    with np.errstate(divide="ignore"):
        g_db = 20.0 * np.log10(np.where(mag > 0, mag, np.nan) / amps)
    return g_db, stationary


def gain_at_amplitude(model: str, params: DerivedParams, drive: PumpDrive,
                      state: SteadyState, a_in_mag: float, delta: float = 0.0,
                      sim: Optional[SimConfig] = None) -> SaturationPoint:
    """Large-signal gain at one input amplitude, with convergence certificate."""
    _check_model(model)
    if not (math.isfinite(a_in_mag) and a_in_mag > 0.0):
        raise ValidationError("a_in_mag must be finite and > 0 for gain extraction",
                              a_in_mag=repr(a_in_mag))
    sim = sim or SimConfig()
    pts = _batch_points(model, params, drive, state,
                        np.array([a_in_mag], dtype=float), delta, sim)
    return pts[0]


def _batch_points(model, params, drive, state, amps, delta, sim):
    series = _run(model, params, drive, state, amps, delta, sim)
    g_db, stationary = _gains_from_series(series, amps, delta, sim.stationarity_tol)
    converged = stationary.copy()
    if sim.certify:
        sim_half = replace(sim, dt=series.dt * 0.5, certify=False)
        series_h = _run(model, params, drive, state, amps, delta, sim_half)
        g_half, stat_h = _gains_from_series(series_h, amps, delta, sim.stationarity_tol)
        converged &= stat_h
        converged &= np.abs(g_db - g_half) < sim.certificate_tol_db
    return [SaturationPoint(a_in_mag=float(a),
                            a_in_flux=float(a * a * params.omega0),
                            delta=delta, G_db=float(g),
                            converged=bool(c), step_used=series.dt)
            for a, g, c in zip(amps, g_db, converged)]


def _maximize_omega(model, params, drive, state, a_in, delta, sim):
    """Golden-section re-optimization of the pump frequency at one amplitude."""
    from .steady_state import default_branch, solve_photon_number

    def g_at(om: float) -> float:
        d = PumpDrive(r=drive.r, omega_rel=om, phase=drive.phase, order=drive.order)
        st = default_branch(solve_photon_number(params, d))
        quick = replace(sim, certify=False)
        return _batch_points(model, params, d, st,
                             np.array([a_in]), delta, quick)[0].G_db

    lo = drive.omega_rel - 1.5 / params.Q
    hi = drive.omega_rel + 1.5 / params.Q
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - gr * (hi - lo)
    x2 = lo + gr * (hi - lo)
    f1, f2 = g_at(x1), g_at(x2)
    for _ in range(12):
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gr * (hi - lo)
            f1 = g_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gr * (hi - lo)
            f2 = g_at(x2)
    return 0.5 * (lo + hi)


def saturation_curve(model: str, params: DerivedParams, drive: PumpDrive,
                     state: SteadyState, amplitudes, delta: float = 0.0,
                     sim: Optional[SimConfig] = None,
                     reoptimize_omega: bool = False,
                     locate_p1db: bool = True) -> SaturationCurve:
    """Gain versus input amplitude at fixed pump, plus compression metadata.

    The pump frequency is held fixed (callers pass the small-signal max-gain
    frequency); reoptimize_omega=True instead re-maximizes the gain over a
    local frequency window at every amplitude.
    """
    _check_model(model)
    amps = np.asarray(amplitudes, dtype=float)
    if amps.size < 2 or np.any(~np.isfinite(amps)) or np.any(amps <= 0) \
            or np.any(np.diff(amps) <= 0):
        raise ValidationError(
            "amplitudes must be >= 2 finite positive strictly-increasing values")
    sim = sim or SimConfig()
    if reoptimize_omega:
        pts = []
        from .steady_state import default_branch, solve_photon_number
        for a in amps:
            om = _maximize_omega(model, params, drive, state, float(a), delta, sim)
            d = PumpDrive(r=drive.r, omega_rel=om, phase=drive.phase, order=drive.order)
            st = default_branch(solve_photon_number(params, d))
            pts.extend(_batch_points(model, params, d, st,
                                     np.array([float(a)]), delta, sim))
    else:
        pts = _batch_points(model, params, drive, state, amps, delta, sim)
    g0 = pts[0].G_db
    pump_amp = drive.r * params.alpha_in_crit / math.sqrt(params.omega0)
    curve = SaturationCurve(points=tuple(pts), G0_db=g0, p1db=None,
                            stiff_pump_amp=None,
                            pump_amp_w0=pump_amp,
                            pump_flux=(drive.r * params.alpha_in_crit) ** 2,
                            model=model, delta=delta, params=params,
                            drive=drive, state=state, sim=sim)
    marker = stiff_pump_marker(curve)
    p1 = compression_point(curve) if locate_p1db else None
    return replace(curve, p1db=p1, stiff_pump_amp=marker)


def stiff_pump_marker(curve: SaturationCurve) -> Optional[float]:
    """Input amplitude where pump-input to signal-output power ratio hits 20 dB."""
    a = curve.a_in_mag
    g = curve.G_db
    out = a * 10.0 ** (g / 20.0)
    target = curve.pump_amp_w0 / 10.0
    for i in range(1, a.size):
        if (out[i - 1] - target) * (out[i] - target) <= 0.0 and out[i] != out[i - 1]:
            # log-interpolate on amplitude
            f = (math.log(target) - math.log(out[i - 1])) \
                / (math.log(out[i]) - math.log(out[i - 1]))
            return float(a[i - 1] * (a[i] / a[i - 1]) ** f)
    return None


def compression_point(curve: SaturationCurve, tol_db: float = 0.02,
                      max_rounds: int = 4) -> Optional[float]:
    """Input amplitude where gain first drops 1 dB below the small-signal value.

    Brackets on the computed curve, then refines by speculative multi-point
    bisection (each round simulates a small batch of interior amplitudes).
    """
    target = curve.G0_db - 1.0
    a = curve.a_in_mag
    g = curve.G_db
    idx = None
    for i in range(1, a.size):
        if g[i] < target <= g[i - 1]:
            idx = i
            break
    if idx is None:
        return None
    lo, hi = float(a[idx - 1]), float(a[idx])
    g_lo = float(g[idx - 1])
    quick = replace(curve.sim, certify=False)
    for _ in range(max_rounds):
        if abs(g_lo - target) < tol_db or hi / lo < 1.0 + 1e-4:
            break
        mids = np.exp(np.linspace(math.log(lo), math.log(hi), 7))[1:-1]
        pts = _batch_points(curve.model, curve.params, curve.drive, curve.state,
                            mids, curve.delta, quick)
        gs = np.array([p.G_db for p in pts])
        below = np.nonzero(gs < target)[0]
        if below.size == 0:
            lo, g_lo = float(mids[-1]), float(gs[-1])
        else:
            j = int(below[0])
            hi = float(mids[j])
            if j > 0:
                lo, g_lo = float(mids[j - 1]), float(gs[j - 1])
    return 0.5 * (lo + hi)
