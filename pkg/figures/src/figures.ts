/**
 * The five figure renderers.  Each reads result files produced by the
 * simulator's command-line interface, plots columns as-is (no recomputation),
 * and writes one SVG.  All inputs are looked up by their fixed names inside
 * a results directory.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import {
  readCuspJson,
  readDynrangeSummary,
  readResultCsv,
  readSaturationSummary,
  requireColumn,
  type ResultTable,
} from "./csv.js";
import { Figure } from "./svg.js";

export const FIGURE_IDS = [
  "stability",
  "lingain_panels",
  "matched_profiles",
  "saturation",
  "dynrange",
] as const;

export type FigureId = (typeof FIGURE_IDS)[number];

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

const deviceLine = (t: ResultTable): string => {
  const d = t.config.device;
  return `f0 = ${d.f0_hz / 1e9} GHz, Q = ${d.q}`;
};

function writeSvg(path: string, svg: string): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, svg, "utf8");
}

function extent(values: ArrayLike<number>): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (let i = 0; i < values.length; i++) {
    const v = values[i]!;
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Distinct sorted values of a grid column (for cell sizing). */
function gridSteps(values: Float64Array): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/**
 * Branch-count diagram over (pump frequency, pump amplitude), bistable
 * cells filled, with the onset (cusp) point marked.
 */
export function renderStability(resultsDir: string, outPath: string): void {
  const table = readResultCsv(join(resultsDir, "stability_q30.csv"));
  const omega = requireColumn(table, "omega_rel");
  const r = requireColumn(table, "r");
  const branches = requireColumn(table, "branch_count");
  const cusp = readCuspJson(join(resultsDir, "cusp_q30.json"));

  const omegaSteps = gridSteps(omega);
  const rSteps = gridSteps(r);
  const dOmega = omegaSteps.length > 1 ? omegaSteps[1]! - omegaSteps[0]! : 1e-3;
  const dR = rSteps.length > 1 ? rSteps[1]! - rSteps[0]! : 1e-3;

  const fig = new Figure();
  const panel = fig.addPanel({
    title: "Steady-state branch count",
    subtitle: deviceLine(table),
    xLabel: "pump frequency / resonance frequency",
    yLabel: "pump amplitude / onset amplitude",
    x: { domain: extent(omega) },
    y: { domain: extent(r) },
  });
  for (let i = 0; i < branches.length; i++) {
    if (branches[i]! >= 3) {
      panel.cell(omega[i]! - dOmega / 2, omega[i]! + dOmega / 2,
                 r[i]! - dR / 2, r[i]! + dR / 2, "#f4a582");
    }
  }
  panel.circle(cusp.omega_rel, cusp.r, 3, "#000");
  panel.annotate(cusp.omega_rel, cusp.r,
                 `cusp (${cusp.omega_rel.toFixed(5)}, ${cusp.r.toFixed(4)})`,
                 "#000");
  fig.legend([
    { label: "bistable (3 branches)", color: "#f4a582" },
    { label: "cusp", color: "#000" },
  ]);
  writeSvg(outPath, fig.render());
}

const ORDER_LABELS = ["1", "2", "3", "inf"] as const;

/**
 * Small-signal gain vs pump frequency for truncation orders 1, 2, 3 and the
 * closed form, one panel per quality factor.
 */
export function renderLingainPanels(resultsDir: string, outPath: string): void {
  const fig = new Figure(320, 280);
  const entries = ORDER_LABELS.map((o, i) => ({
    label: o === "inf" ? "closed form" : `order ${o}`,
    color: COLORS[i]!,
  }));
  entries.push({ label: "no pump (0 dB)", color: "#999" });
  const flat = readResultCsv(join(resultsDir, "lingain_flat_r0.csv"));
  const flatOmega = requireColumn(flat, "omega_rel");
  const flatG = requireColumn(flat, "G_db");
  for (const q of ["10", "30", "150"]) {
    const tables = ORDER_LABELS.map((o) =>
      readResultCsv(join(resultsDir, `lingain_q${q}_order${o}.csv`)),
    );
    let gLo = Infinity;
    let gHi = -Infinity;
    for (const t of tables) {
      const [lo, hi] = extent(requireColumn(t, "G_db"));
      gLo = Math.min(gLo, lo);
      gHi = Math.max(gHi, hi);
    }
    const first = tables[0]!;
    const [xLo, xHi] = extent(requireColumn(first, "omega_rel"));
    const panel = fig.addPanel({
      title: `Q = ${q}`,
      subtitle: `pump at ${String(first.config["r"])}x onset amplitude`,
      xLabel: "pump frequency / resonance frequency",
      yLabel: "gain [dB]",
      x: { domain: [xLo, xHi] },
      y: { domain: [Math.min(gLo, -1), gHi] },
    });
    // Undriven reference curve, clipped to this panel's frequency window.
    const fx: number[] = [];
    const fy: number[] = [];
    for (let i = 0; i < flatOmega.length; i++) {
      if (flatOmega[i]! >= xLo && flatOmega[i]! <= xHi) {
        fx.push(flatOmega[i]!);
        fy.push(flatG[i]!);
      }
    }
    if (fx.length >= 2) panel.polyline(fx, fy, "#999", "2,2");
    tables.forEach((t, i) => {
      panel.polyline(requireColumn(t, "omega_rel"), requireColumn(t, "G_db"),
                     COLORS[i]!);
    });
  }
  fig.legend(entries);
  writeSvg(outPath, fig.render());
}

/**
 * Power-matched comparison: the cubic-truncation gain profile against the
 * closed form with its pump raised so the two peaks coincide.
 */
export function renderMatchedProfiles(resultsDir: string,
                                      outPath: string): void {
  const t1 = readResultCsv(join(resultsDir, "matched_order1.csv"));
  const tInf = readResultCsv(join(resultsDir, "matched_orderinf.csv"));
  const [lo1, hi1] = extent(requireColumn(t1, "G_db"));
  const [lo2, hi2] = extent(requireColumn(tInf, "G_db"));

  const fig = new Figure();
  const panel = fig.addPanel({
    title: "Power-matched gain profiles",
    subtitle: deviceLine(t1),
    xLabel: "pump frequency / resonance frequency",
    yLabel: "gain [dB]",
    x: { domain: extent(requireColumn(t1, "omega_rel")) },
    y: { domain: [Math.min(lo1, lo2), Math.max(hi1, hi2)] },
  });
  panel.polyline(requireColumn(t1, "omega_rel"), requireColumn(t1, "G_db"),
                 COLORS[0]!);
  panel.polyline(requireColumn(tInf, "omega_rel"),
                 requireColumn(tInf, "G_db"), COLORS[1]!);
  fig.legend([
    { label: `cubic, pump ${String(t1.config["r"])}`, color: COLORS[0]! },
    {
      label: `closed form, pump ${String(tInf.config["r"])}`,
      color: COLORS[1]!,
    },
  ]);
  writeSvg(outPath, fig.render());
}

const SATURATION_MODELS = [
  "linear",
  "cubic",
  "cubic_c3_only",
  "full_sine",
] as const;

/**
 * Gain vs input amplitude for the four envelope models, with the linear
 * small-signal level as a horizontal reference and the input amplitude
 * where the signal stops being small against the pump as a vertical line.
 */
export function renderSaturation(resultsDir: string, outPath: string): void {
  const tables = SATURATION_MODELS.map((m) =>
    readResultCsv(join(resultsDir, `saturation_${m}.csv`)),
  );
  const summary = readSaturationSummary(
    join(resultsDir, "saturation_cubic.summary.json"),
  );
  let gLo = Infinity;
  let gHi = -Infinity;
  let aLo = Infinity;
  let aHi = -Infinity;
  for (const t of tables) {
    const [glo, ghi] = extent(requireColumn(t, "G_db"));
    const [alo, ahi] = extent(requireColumn(t, "a_in_sqrt_w0"));
    gLo = Math.min(gLo, glo);
    gHi = Math.max(gHi, ghi);
    aLo = Math.min(aLo, alo);
    aHi = Math.max(aHi, ahi);
  }
  const fig = new Figure();
  const panel = fig.addPanel({
    title: "Gain saturation",
    subtitle: deviceLine(tables[0]!),
    xLabel: "input amplitude [sqrt(resonance rad/s) units]",
    yLabel: "gain [dB]",
    x: { domain: [aLo, aHi], log: true },
    y: { domain: [gLo - 1, gHi + 1] },
  });
  panel.hline(summary.G0_db, "#888", "small-signal gain");
  if (summary.stiff_pump_amp !== null) {
    panel.vline(summary.stiff_pump_amp, "#888", "signal = pump/10");
  }
  tables.forEach((t, i) => {
    panel.polyline(requireColumn(t, "a_in_sqrt_w0"), requireColumn(t, "G_db"),
                   COLORS[i]!);
  });
  fig.legend(SATURATION_MODELS.map((m, i) => ({
    label: m.replace(/_/g, " "),
    color: COLORS[i]!,
  })));
  writeSvg(outPath, fig.render());
}

/**
 * Saturation curves for the junction-strength ratio family, each with its
 * 1 dB compression point marked.
 */
export function renderDynrange(resultsDir: string, outPath: string): void {
  const summary = readDynrangeSummary(join(resultsDir, "dynrange.summary.json"));
  const tables = summary.ratios.map((ratio) => {
    const label = String(Math.abs(ratio)).replace(".", "p");
    return readResultCsv(join(resultsDir, `dynrange_ratio${label}.csv`));
  });
  let gLo = Infinity;
  let gHi = -Infinity;
  let aLo = Infinity;
  let aHi = -Infinity;
  for (const t of tables) {
    const [glo, ghi] = extent(requireColumn(t, "G_db"));
    const [alo, ahi] = extent(requireColumn(t, "a_in_sqrt_w0"));
    gLo = Math.min(gLo, glo);
    gHi = Math.max(gHi, ghi);
    aLo = Math.min(aLo, alo);
    aHi = Math.max(aHi, ahi);
  }
  const fig = new Figure();
  const panel = fig.addPanel({
    title: "Dynamic range vs junction strength",
    subtitle: `Q = ${tables[0]!.config.device.q}, critical current adjusted per ratio`,
    xLabel: "input amplitude [sqrt(resonance rad/s) units]",
    yLabel: "gain [dB]",
    x: { domain: [aLo, aHi], log: true },
    y: { domain: [gLo - 1, gHi + 1] },
  });
  tables.forEach((t, i) => {
    panel.polyline(requireColumn(t, "a_in_sqrt_w0"), requireColumn(t, "G_db"),
                   COLORS[i]!);
    const p1 = summary.p1db[i];
    if (p1 !== null && p1 !== undefined) {
      panel.vline(p1, COLORS[i]!, "1 dB point");
    }
  });
  fig.legend(summary.ratios.map((ratio, i) => ({
    label: `ratio ${ratio}`,
    color: COLORS[i]!,
  })));
  writeSvg(outPath, fig.render());
}

const RENDERERS: Record<FigureId, (resultsDir: string, out: string) => void> = {
  stability: renderStability,
  lingain_panels: renderLingainPanels,
  matched_profiles: renderMatchedProfiles,
  saturation: renderSaturation,
  dynrange: renderDynrange,
};

export function renderFigure(id: FigureId, resultsDir: string,
                             outDir: string): string {
  const outPath = join(outDir, `${id}.svg`);
  RENDERERS[id](resultsDir, outPath);
  return outPath;
}
