"""Command-line front end: every study as a subcommand with CSV/JSON output.

    jpasim steady      --device dev.json --r 0.99 --omega-range 0.95:1.0:200
    jpasim stability   --f0 7e9 --ic 2e-6 --q 30 --omega-range ... --r-range ...
    jpasim cusp        --device dev.json --order inf
    jpasim lingain     --device dev.json --r 0.99 --orders 1,2,3,inf ...
    jpasim match-power --device dev.json --target-from order=1,r=0.99 --order inf
    jpasim saturation  --device dev.json --model full_sine --r 1.00297 ...
    jpasim dynrange    --device dev.json --ratios -1,-10,-100 ...
    jpasim oracle      --device dev.json --r 0.5 --omega-range 0.95:1.03:33

Exit codes: 0 success, 2 validation error, 3 numerical error (divergence,
pole, non-convergence); errors emit a JSON block on stderr.  Output files are
byte-identical for identical configs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _series
from .device import (DeviceParams, derive, device_from_json_dict,
                     device_to_json_dict, critical_current_for_kerr_q_ratio)
from .errors import JpasimError, ValidationError
from .linear_gain import gain_sweep, max_gain, match_pump_power, peak_gain
from .output import write_csv, write_json
from .phase_oracle import PhaseSimConfig, compare_resonance_curves
from .saturation import SimConfig, saturation_curve
from .steady_state import (PumpDrive, find_cusp, reflection_s11,
                           solve_photon_number, stability_diagram)


def _parse_order(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return _series.check_order(int(text))
    except ValueError as exc:
        raise ValidationError(f"bad order {text!r}: expected positive integer or 'inf'") from exc


def _parse_orders(text: str):
    return [_parse_order(t) for t in text.split(",") if t.strip()]


def _order_label(order) -> str:
    return "inf" if order == math.inf else str(int(order))


def _parse_grid(text: str, name: str, log: bool = False) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"--{name} must be LO:HI:COUNT, got {text!r}")
    try:
        lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"--{name}: could not parse {text!r}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi and num >= 2):
        raise ValidationError(f"--{name} needs finite LO < HI and COUNT >= 2",
                              value=text)
    if log:
        if lo <= 0:
            raise ValidationError(f"--{name} is log-spaced and needs LO > 0", value=text)
        return np.geomspace(lo, hi, num)
    return np.linspace(lo, hi, num)


def _device_from_args(args) -> DeviceParams:
    inline = [args.f0, args.ic, args.q]
    if args.device is not None:
        if any(x is not None for x in inline):
            raise ValidationError("give either --device or --f0/--ic/--q, not both")
        with open(args.device, "r", encoding="utf-8") as fh:
            return device_from_json_dict(json.load(fh))
    if any(x is None for x in inline):
        raise ValidationError("device required: --device FILE or all of --f0, --ic, --q")
    return DeviceParams(f0=args.f0, Ic=args.ic, Q=args.q)


def _workers(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        env = os.environ.get("JPA_THREADS", "")
        n = int(env) if env.strip() else (os.cpu_count() or 1)
    if n < 1:
        raise ValidationError("--threads must be >= 1", threads=n)
    return n


def _add_device_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--device", help="device JSON file {f0_hz, ic_a, q}")
    p.add_argument("--f0", type=float, help="resonance frequency, Hz")
    p.add_argument("--ic", type=float, help="junction critical current, A")
    p.add_argument("--q", type=float, help="loaded quality factor")
    p.add_argument("--out", help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (default: JPA_THREADS or machine parallelism)")


def _emit(args, columns, config, summary: str) -> None:
    if args.out:
        if args.format == "json":
            write_json(args.out, {"config": config,
                                  "columns": {n: list(map(_jsonable, v))
                                              for n, v in columns}})
        else:
            write_csv(args.out, columns, config)
    print(summary)


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _base_config(args, dev: DeviceParams, sub: str, **extra) -> dict:
    cfg = {"subcommand": sub, "device": device_to_json_dict(dev)}
    cfg.update(extra)
    return cfg


def _cmd_steady(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    omegas = _parse_grid(args.omega_range, "omega-range")
    order = _parse_order(args.order)
    cols: dict[str, list] = {k: [] for k in
                             ("omega_rel", "n", "stable", "re_alpha", "im_alpha",
                              "re_s11", "im_s11")}
    bistable = 0
    for w in omegas:
        drive = PumpDrive(r=args.r, omega_rel=float(w), phase=args.phase, order=order)
        states = solve_photon_number(params, drive)
        if states[0].branch_count == 3:
            bistable += 1
        for s in states:
            s11 = reflection_s11(drive, s.n, params.Q)
            cols["omega_rel"].append(float(w))
            cols["n"].append(s.n)
            cols["stable"].append(s.stable)
            cols["re_alpha"].append(s.alpha.real)
            cols["im_alpha"].append(s.alpha.imag)
            cols["re_s11"].append(s11.real)
            cols["im_s11"].append(s11.imag)
    cfg = _base_config(args, dev, "steady", r=args.r, phase=args.phase,
                       order=_order_label(order), omega_range=args.omega_range)
    _emit(args, list(cols.items()), cfg,
          f"steady: {len(cols['omega_rel'])} rows, {bistable} bistable frequencies")
    return 0


def _cmd_stability(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    omegas = _parse_grid(args.omega_range, "omega-range")
    rs = _parse_grid(args.r_range, "r-range")
    order = _parse_order(args.order)
    diag = stability_diagram(params, omegas, rs, order)
    om_col, r_col, c_col = [], [], []
    for i, w in enumerate(diag.omega_grid):
        for j, r in enumerate(diag.r_grid):
            om_col.append(float(w))
            r_col.append(float(r))
            c_col.append(int(diag.branch_count[i, j]))
    cfg = _base_config(args, dev, "stability", omega_range=args.omega_range,
                       r_range=args.r_range, order=_order_label(order))
    n_bi = int(np.sum(diag.branch_count == 3))
    _emit(args, [("omega_rel", om_col), ("r", r_col), ("branch_count", c_col)],
          cfg, f"stability: {n_bi} bistable cells of {diag.branch_count.size}")
    return 0


def _cmd_cusp(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    order = _parse_order(args.order)
    c = find_cusp(params, order)
    if args.out:
        write_json(args.out, {"config": _base_config(args, dev, "cusp",
                                                     order=_order_label(order)),
                              "omega_rel": c.omega_rel, "r": c.r, "n": c.n,
                              "iterations": c.iterations})
    print(f"omega={c.omega_rel:.5f} r={c.r:.4f} n={c.n:.6g}")
    return 0


def _lingain_curve(params, r, omegas, delta, order, workers):
    if workers <= 1:
        return gain_sweep(params, r, (float(omegas[0]), float(omegas[-1])),
                          delta, order, points=omegas.size)
    from .errors import PoleError
    from .linear_gain import GainCurve, _point
    g_db = np.empty(omegas.size)
    n_arr = np.empty(omegas.size)
    g_arr = np.empty(omegas.size, dtype=complex)
    m_arr = np.empty(omegas.size, dtype=complex)

    def fill(i):
        try:
            lg, n = _point(params, float(omegas[i]), r, order, delta, 0.0)
            return i, lg.G_db, lg.g, lg.m, n
        except PoleError:
            return i, math.inf, complex(math.inf), complex(math.inf), math.nan

    with ThreadPoolExecutor(max_workers=workers) as ex:
        for i, gdb, g, m, n in ex.map(fill, range(omegas.size)):
            g_db[i], g_arr[i], m_arr[i], n_arr[i] = gdb, g, m, n
    return GainCurve(omega_rel=omegas.copy(), G_db=g_db, n=n_arr,
                     g=g_arr, m=m_arr, r=r, delta=delta, order=order)


def _cmd_lingain(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    omegas = _parse_grid(args.omega_range, "omega-range")
    orders = _parse_orders(args.orders)
    workers = _workers(args)
    summaries = []
    for order in orders:
        curve = _lingain_curve(params, args.r, omegas, args.delta, order, workers)
        cols = [("omega_rel", list(curve.omega_rel)), ("n", list(curve.n)),
                ("G_db", list(curve.G_db)),
                ("re_g", [g.real for g in curve.g]),
                ("im_g", [g.imag for g in curve.g]),
                ("re_m", [m.real for m in curve.m]),
                ("im_m", [m.imag for m in curve.m])]
        cfg = _base_config(args, dev, "lingain", r=args.r, delta=args.delta,
                           order=_order_label(order), omega_range=args.omega_range)
        out_path = args.out
        if out_path and len(orders) > 1:
            stem, dot, ext = out_path.rpartition(".")
            out_path = (f"{stem}_order{_order_label(order)}.{ext}"
                        if dot else f"{out_path}_order{_order_label(order)}")
        if out_path:
            if args.format == "json":
                write_json(out_path, {"config": cfg,
                                      "columns": {n: v for n, v in cols}})
            else:
                write_csv(out_path, cols, cfg)
        if args.r == 0.0:
            summaries.append(f"order {_order_label(order)}: flat 0 dB (r=0)")
        else:
            mx = max_gain(params, curve)
            summaries.append(f"order {_order_label(order)}: "
                             f"G_max={mx.G_db:.4f} dB at omega={mx.omega_rel:.6f}")
    print("; ".join(summaries))
    return 0


def _cmd_match_power(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    order = _parse_order(args.order)
    omegas = _parse_grid(args.omega_range, "omega-range")
    om_rng = (float(omegas[0]), float(omegas[-1]))
    if (args.target_db is None) == (args.target_from is None):
        raise ValidationError("give exactly one of --target-db or --target-from")
    if args.target_from is not None:
        fields: dict[str, str] = {}
        for part in args.target_from.split(","):
            if "=" not in part:
                raise ValidationError("--target-from expects order=N,r=R",
                                      value=args.target_from)
            k, v = part.split("=", 1)
            fields[k.strip()] = v.strip()
        if set(fields) != {"order", "r"}:
            raise ValidationError("--target-from expects exactly order=N,r=R",
                                  value=args.target_from)
        t_order = _parse_order(fields["order"])
        t_r = float(fields["r"])
        target = peak_gain(params, t_r, om_rng, 0.0, t_order).G_db
    else:
        target = args.target_db
    if target == 0.0:
        r = 0.0
    else:
        r = match_pump_power(params, order, target, om_rng)
    if args.out:
        write_json(args.out, {"config": _base_config(
            args, dev, "match-power", order=_order_label(order),
            omega_range=args.omega_range, target_db=target),
            "r": r, "target_db": target})
    print(f"matched r={r:.6f} (target {target:.4f} dB, order {_order_label(order)})")
    return 0


_MODEL_DEFAULT_ORDER = {"cubic": 1, "cubic_c3_only": 1,
                        "full_sine": math.inf, "linear": math.inf}


def _sim_from_args(args) -> SimConfig:
    return SimConfig(dt=args.dt, settle=args.settle, window=args.window)


def _run_saturation(params, model, r, order, args, amps, delta, sim):
    om_rng = ((1.0 - 8.0 / params.Q), (1.0 + 0.5 / params.Q)) \
        if args.omega_range is None \
        else tuple(map(float, (args.omega_range.split(":")[0],
                               args.omega_range.split(":")[1])))
    if args.omega is not None:
        omega = args.omega
    else:
        omega = peak_gain(params, r, om_rng, 0.0, order).omega_rel
    drive = PumpDrive(r=r, omega_rel=omega, order=order)
    from .steady_state import default_branch
    state = default_branch(solve_photon_number(params, drive))
    curve = saturation_curve(model, params, drive, state, amps, delta, sim,
                             reoptimize_omega=args.reoptimize_omega)
    return curve, omega


def _saturation_columns(curve):
    return [("a_in_sqrt_w0", [p.a_in_mag for p in curve.points]),
            ("a_in_flux", [p.a_in_flux for p in curve.points]),
            ("G_db", [p.G_db for p in curve.points]),
            ("converged", [p.converged for p in curve.points]),
            ("step_used", [p.step_used for p in curve.points])]


def _saturation_summary_obj(curve, omega):
    return {"G0_db": curve.G0_db,
            "p1db": curve.p1db,
            "stiff_pump_amp": curve.stiff_pump_amp,
            "pump_amp_w0": curve.pump_amp_w0,
            "pump_flux": curve.pump_flux,
            "omega_rel": omega,
            "model": curve.model}


def _sidecar_path(out: str) -> str:
    stem, dot, _ = out.rpartition(".")
    return f"{stem}.summary.json" if dot else f"{out}.summary.json"


def _cmd_saturation(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    order = _parse_order(args.order) if args.order is not None \
        else _MODEL_DEFAULT_ORDER[args.model]
    amps = _parse_grid(args.amps, "amps", log=True)
    sim = _sim_from_args(args)
    curve, omega = _run_saturation(params, args.model, args.r, order, args,
                                   amps, args.delta, sim)
    cfg = _base_config(args, dev, "saturation", model=args.model, r=args.r,
                       order=_order_label(order), delta=args.delta,
                       omega_rel=omega, amps=args.amps,
                       dt=curve.points[0].step_used)
    _emit(args, _saturation_columns(curve), cfg,
          f"{args.model}: G0={curve.G0_db:.3f} dB p1db={curve.p1db!r} "
          f"marker={curve.stiff_pump_amp!r}")
    if args.out:
        write_json(_sidecar_path(args.out),
                   {"config": cfg, **_saturation_summary_obj(curve, omega)})
    return 0


def _cmd_dynrange(args) -> int:
    dev = _device_from_args(args)
    ratios = [float(t) for t in args.ratios.split(",") if t.strip()]
    if len(ratios) < 2 or any(x >= 0 or not math.isfinite(x) for x in ratios):
        raise ValidationError("--ratios needs >= 2 finite negative values",
                              ratios=args.ratios)
    base_amps = _parse_grid(args.amps, "amps", log=True)
    sim = _sim_from_args(args)
    p1s = []
    for ratio in ratios:
        ic = critical_current_for_kerr_q_ratio(dev.f0, dev.Q, ratio)
        dev_r = DeviceParams(f0=dev.f0, Ic=ic, Q=dev.Q)
        params = derive(dev_r)
        amps = base_amps * math.sqrt(abs(ratio) / abs(ratios[0]))
        curve, omega = _run_saturation(params, "full_sine", args.r, math.inf,
                                       args, amps, args.delta, sim)
        p1s.append(curve.p1db)
        if args.out:
            label = f"{abs(ratio):g}".replace(".", "p")
            stem, dot, ext = args.out.rpartition(".")
            path = f"{stem}_ratio{label}.{ext}" if dot else f"{args.out}_ratio{label}"
            cfg = _base_config(args, dev_r, "dynrange", ratio=ratio, r=args.r,
                               omega_rel=omega, model="full_sine",
                               delta=args.delta)
            write_csv(path, _saturation_columns(curve), cfg)
    increasing = all(a is not None and b is not None and b > a
                     for a, b in zip(p1s, p1s[1:]))
    if args.out:
        write_json(_sidecar_path(args.out),
                   {"config": _base_config(args, dev, "dynrange", r=args.r,
                                           ratios=ratios, delta=args.delta),
                    "ratios": ratios, "p1db": p1s,
                    "strictly_increasing": increasing})
    pretty = " ".join(f"{ratio:g}:{(p if p is not None else float('nan')):.4g}"
                      for ratio, p in zip(ratios, p1s))
    print(f"dynrange p1db {pretty} increasing={increasing}")
    return 0


def _cmd_oracle(args) -> int:
    dev = _device_from_args(args)
    params = derive(dev)
    omegas = _parse_grid(args.omega_range, "omega-range")
    sim = PhaseSimConfig(samples_per_period=args.spp,
                         settle=args.settle,
                         window_periods=args.window_periods)
    rep = compare_resonance_curves(params, args.r, omegas, sim)
    flags = [(1 if row.flagged else 0) for row in rep.rows]
    cols = [("omega_rel", [row.omega_rel for row in rep.rows]),
            ("phi_a", [row.phi_a for row in rep.rows]),
            ("n_cl", [row.n_cl for row in rep.rows]),
            ("n_rwa", [row.n_rwa for row in rep.rows]),
            ("rel_dev", [row.rel_dev for row in rep.rows]),
            ("flags", flags)]
    cfg = _base_config(args, dev, "oracle", r=args.r, i_p=rep.i_p,
                       omega_range=args.omega_range,
                       samples_per_period=args.spp,
                       window_periods=args.window_periods)
    _emit(args, cols, cfg,
          f"oracle: max_rel_dev={rep.max_rel_dev:.4f} flagged={rep.any_flagged}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jpasim",
                                 description="pumped nonlinear resonator studies")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="steady-state response curve")
    _add_device_flags(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--omega-range", required=True, help="LO:HI:COUNT")
    p.add_argument("--order", default="inf")
    p.add_argument("--phase", type=float, default=0.0)
    p.set_defaults(fn=_cmd_steady)

    p = sub.add_parser("stability", help="branch-count diagram over (omega, r)")
    _add_device_flags(p)
    p.add_argument("--omega-range", required=True, help="LO:HI:COUNT")
    p.add_argument("--r-range", required=True, help="LO:HI:COUNT")
    p.add_argument("--order", default="inf")
    p.set_defaults(fn=_cmd_stability)

    p = sub.add_parser("cusp", help="bistability onset point")
    _add_device_flags(p)
    p.add_argument("--order", default="inf")
    p.set_defaults(fn=_cmd_cusp)

    p = sub.add_parser("lingain", help="small-signal gain vs pump frequency")
    _add_device_flags(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--omega-range", required=True, help="LO:HI:COUNT")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--orders", default="inf", help="comma list, e.g. 1,2,3,inf")
    p.set_defaults(fn=_cmd_lingain)

    p = sub.add_parser("match-power", help="pump amplitude for a target peak gain")
    _add_device_flags(p)
    p.add_argument("--order", default="inf")
    p.add_argument("--target-db", type=float, default=None)
    p.add_argument("--target-from", default=None, help="order=N,r=R")
    p.add_argument("--omega-range", required=True, help="LO:HI:COUNT")
    p.set_defaults(fn=_cmd_match_power)

    p = sub.add_parser("saturation", help="large-signal gain vs input amplitude")
    _add_device_flags(p)
    p.add_argument("--model", required=True,
                   choices=("linear", "cubic", "cubic_c3_only", "full_sine"))
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--order", default=None)
    p.add_argument("--omega", type=float, default=None,
                   help="pump frequency (default: small-signal max-gain point)")
    p.add_argument("--omega-range", default=None,
                   help="search range LO:HI:COUNT for the default pump frequency")
    p.add_argument("--amps", required=True, help="LO:HI:COUNT, log-spaced")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--settle", type=float, default=None)
    p.add_argument("--window", type=float, default=None)
    p.add_argument("--reoptimize-omega", action="store_true")
    p.set_defaults(fn=_cmd_saturation)

    p = sub.add_parser("dynrange", help="p1db across junction-strength ratios")
    _add_device_flags(p)
    p.add_argument("--ratios", default="-1,-10,-100")
    p.add_argument("--r", type=float, default=1.00297)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--omega-range", default=None)
    p.add_argument("--amps", required=True,
                   help="LO:HI:COUNT for the first ratio; scaled sqrt(|ratio|) beyond")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--settle", type=float, default=None)
    p.add_argument("--window", type=float, default=None)
    p.add_argument("--reoptimize-omega", action="store_true")
    p.set_defaults(fn=_cmd_dynrange)

    p = sub.add_parser("oracle", help="lab-frame classical comparison")
    _add_device_flags(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--omega-range", required=True, help="LO:HI:COUNT")
    p.add_argument("--spp", type=int, default=200)
    p.add_argument("--settle", type=float, default=None)
    p.add_argument("--window-periods", type=int, default=64)
    p.set_defaults(fn=_cmd_oracle)

    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except JpasimError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "OSError", "message": str(exc)},
                                    sort_keys=True) + "\n")
        return 2


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
