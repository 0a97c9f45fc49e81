#!/usr/bin/env python3
"""Produce the CSV/JSON result files that the figure scripts consume.

Runs the command-line interface in-process, so everything here goes through
the same file formats an external caller would see.  Outputs land in
results/ (or --outdir) with fixed names; reruns are byte-identical.
"""

import argparse
import pathlib
import sys
import time

from jpasim.cli import run

DEV = ["--f0", "7e9", "--ic", "2e-6", "--q", "30"]
R_MATCHED = "1.00297"
PEAK_SEARCH = "0.96:0.98:241"


def _dev(q: float) -> list[str]:
    return ["--f0", "7e9", "--ic", "2e-6", "--q", str(q)]


def _run(label: str, argv: list[str]) -> None:
    t0 = time.perf_counter()
    code = run(argv)
    if code != 0:
        raise SystemExit(f"{label}: exit code {code}")
    print(f"  [{label}] done in {time.perf_counter() - t0:.1f} s")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default=None,
                    help="output directory (default: <repo>/results)")
    args = ap.parse_args()
    root = pathlib.Path(__file__).resolve().parent.parent
    out = pathlib.Path(args.outdir) if args.outdir else root / "results"
    out.mkdir(parents=True, exist_ok=True)
    print(f"writing result files to {out}")

    # Stability diagram and the bistability onset point (cusp) it hinges on.
    _run("stability", ["stability", *DEV, "--order", "inf",
                       "--omega-range", "0.945:1.000:111",
                       "--r-range", "0.90:1.15:101",
                       "--out", str(out / "stability_q30.csv")])
    _run("cusp", ["cusp", *DEV, "--order", "inf", "--format", "json",
                  "--out", str(out / "cusp_q30.json")])

    # Small-signal gain vs pump frequency, truncation orders 1,2,3,inf,
    # for three quality factors (panel figure).
    for q, rng in ((10.0, "0.80:1.00:401"), (30.0, "0.94:1.00:401"),
                   (150.0, "0.985:0.999:401")):
        _run(f"lingain Q={q:g}",
             ["lingain", *_dev(q), "--r", "0.99", "--orders", "1,2,3,inf",
              "--omega-range", rng,
              "--out", str(out / f"lingain_q{q:g}.csv")])

    # Undriven reference curve: flat 0 dB line.
    _run("lingain r=0", ["lingain", *DEV, "--r", "0", "--orders", "inf",
                         "--omega-range", "0.94:1.00:101",
                         "--out", str(out / "lingain_flat_r0.csv")])

    # Power-matched gain profiles: cubic truncation at r=0.99 vs the closed
    # form with its pump raised so the peaks coincide.
    _run("matched order 1",
         ["lingain", *DEV, "--r", "0.99", "--orders", "1",
          "--omega-range", "0.9690:0.9740:501",
          "--out", str(out / "matched_order1.csv")])
    _run("matched closed form",
         ["lingain", *DEV, "--r", R_MATCHED, "--orders", "inf",
          "--omega-range", "0.9690:0.9740:501",
          "--out", str(out / "matched_orderinf.csv")])

    # Gain saturation for all four envelope models at their operating points.
    # The linear model keeps the cubic family's order-1 coefficients so it
    # reads as their flat no-saturation reference.
    for model, r, extra in (("linear", "0.99", ["--order", "1"]),
                            ("cubic", "0.99", []),
                            ("cubic_c3_only", "0.99", []),
                            ("full_sine", R_MATCHED, [])):
        _run(f"saturation {model}",
             ["saturation", *DEV, "--model", model, "--r", r, *extra,
              "--omega-range", PEAK_SEARCH, "--amps", "2e-5:1.2e-3:10",
              "--dt", "1.0", "--out", str(out / f"saturation_{model}.csv")])

    # 1 dB compression point across junction-strength ratios.
    _run("dynrange",
         ["dynrange", *DEV, "--ratios=-1,-10,-100", "--r", R_MATCHED,
          "--omega-range", PEAK_SEARCH, "--amps", "1e-5:4e-4:8",
          "--dt", "1.0", "--out", str(out / "dynrange.csv")])

    print("all result files written")
    return 0


if __name__ == "__main__":
    sys.exit(main())
