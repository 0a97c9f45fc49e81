/**
 * Minimal deterministic SVG chart assembly.
 *
 * Scales and tick placement come from d3; the SVG itself is plain string
 * concatenation with fixed-precision coordinates, so identical inputs
 * produce byte-identical files.  No DOM, no canvas, no wall-clock content.
 */

import { scaleLinear, scaleLog } from "d3";

/** Fixed-precision coordinate formatting (3 decimals, no trailing zeros). */
export const fmt = (x: number): string =>
  Number(x.toFixed(3)).toString();

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export interface ScaleSpec {
  domain: [number, number];
  log?: boolean;
}

export interface Scale {
  (value: number): number;
  ticks(): number[];
  tickLabel(value: number): string;
}

function makeScale(spec: ScaleSpec, range: [number, number]): Scale {
  if (spec.log) {
    const s = scaleLog().domain(spec.domain).range(range);
    const f = (v: number) => s(v);
    f.ticks = () => {
      const decades: number[] = [];
      const lo = Math.ceil(Math.log10(spec.domain[0]) - 1e-9);
      const hi = Math.floor(Math.log10(spec.domain[1]) + 1e-9);
      for (let e = lo; e <= hi; e++) decades.push(Number(`1e${e}`));
      return decades.length >= 2 ? decades : s.ticks(5);
    };
    f.tickLabel = (v: number) => v.toExponential(0);
    return f;
  }
  const s = scaleLinear().domain(spec.domain).range(range).nice();
  const f = (v: number) => s(v);
  f.ticks = () => s.ticks(6);
  f.tickLabel = (v: number) => {
    const span = Math.abs(spec.domain[1] - spec.domain[0]);
    if (span > 0 && (span < 1e-2 || span >= 1e4)) return v.toExponential(1);
    return Number(v.toPrecision(6)).toString();
  };
  return f;
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  x: ScaleSpec;
  y: ScaleSpec;
}

const MARGIN = { top: 48, right: 16, bottom: 46, left: 58 };

/** One cartesian panel; `body` accumulates data marks in draw order. */
export class Panel {
  readonly x: Scale;
  readonly y: Scale;
  private readonly marks: string[] = [];

  constructor(
    private readonly opts: ChartOptions,
    private readonly x0: number,
    private readonly y0: number,
    readonly innerW: number,
    readonly innerH: number,
  ) {
    this.x = makeScale(opts.x, [x0, x0 + innerW]);
    this.y = makeScale(opts.y, [y0 + innerH, y0]);
  }

  polyline(xs: ArrayLike<number>, ys: ArrayLike<number>, color: string,
           dash?: string): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      const xv = xs[i]!;
      const yv = ys[i]!;
      if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
      pts.push(`${fmt(this.x(xv))},${fmt(this.y(yv))}`);
    }
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.marks.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.5"${dashAttr} points="${pts.join(" ")}"/>`,
    );
  }

  circle(xv: number, yv: number, radius: number, color: string): void {
    this.marks.push(
      `<circle cx="${fmt(this.x(xv))}" cy="${fmt(this.y(yv))}" r="${radius}" fill="${color}"/>`,
    );
  }

  /** Axis-aligned data-space rectangle (used for diagram cells). */
  cell(xLo: number, xHi: number, yLo: number, yHi: number,
       color: string): void {
    const px = this.x(xLo);
    const py = this.y(yHi);
    const w = this.x(xHi) - px;
    const h = this.y(yLo) - py;
    this.marks.push(
      `<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(w)}" height="${fmt(h)}" fill="${color}"/>`,
    );
  }

  vline(xv: number, color: string, label?: string): void {
    const px = fmt(this.x(xv));
    this.marks.push(
      `<line x1="${px}" y1="${fmt(this.y0)}" x2="${px}" y2="${fmt(this.y0 + this.innerH)}" stroke="${color}" stroke-width="1" stroke-dasharray="4,3"/>`,
    );
    if (label) {
      this.marks.push(
        `<text x="${px}" y="${fmt(this.y0 + 12)}" font-size="10" fill="${color}" text-anchor="start" transform="rotate(90 ${px} ${fmt(this.y0 + 12)})">${esc(label)}</text>`,
      );
    }
  }

  hline(yv: number, color: string, label?: string): void {
    const py = fmt(this.y(yv));
    this.marks.push(
      `<line x1="${fmt(this.x0)}" y1="${py}" x2="${fmt(this.x0 + this.innerW)}" y2="${py}" stroke="${color}" stroke-width="1" stroke-dasharray="4,3"/>`,
    );
    if (label) {
      this.marks.push(
        `<text x="${fmt(this.x0 + this.innerW - 4)}" y="${fmt(this.y(yv) - 4)}" font-size="10" fill="${color}" text-anchor="end">${esc(label)}</text>`,
      );
    }
  }

  annotate(xv: number, yv: number, text: string, color: string): void {
    this.marks.push(
      `<text x="${fmt(this.x(xv) + 6)}" y="${fmt(this.y(yv) - 6)}" font-size="10" fill="${color}">${esc(text)}</text>`,
    );
  }

  frame(): string {
    const out: string[] = [];
    const { x0, y0, innerW, innerH } = this;
    out.push(
      `<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${fmt(innerW)}" height="${fmt(innerH)}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const t of this.x.ticks()) {
      const px = fmt(this.x(t));
      out.push(
        `<line x1="${px}" y1="${fmt(y0 + innerH)}" x2="${px}" y2="${fmt(y0 + innerH + 4)}" stroke="#333"/>`,
        `<text x="${px}" y="${fmt(y0 + innerH + 16)}" font-size="10" fill="#333" text-anchor="middle">${esc(this.x.tickLabel(t))}</text>`,
      );
    }
    for (const t of this.y.ticks()) {
      const py = fmt(this.y(t));
      out.push(
        `<line x1="${fmt(x0 - 4)}" y1="${py}" x2="${fmt(x0)}" y2="${py}" stroke="#333"/>`,
        `<text x="${fmt(x0 - 6)}" y="${fmt(this.y(t) + 3)}" font-size="10" fill="#333" text-anchor="end">${esc(this.y.tickLabel(t))}</text>`,
      );
    }
    out.push(
      `<text x="${fmt(x0 + innerW / 2)}" y="${fmt(y0 + innerH + 34)}" font-size="11" fill="#111" text-anchor="middle">${esc(this.opts.xLabel)}</text>`,
      `<text x="${fmt(x0 - 44)}" y="${fmt(y0 + innerH / 2)}" font-size="11" fill="#111" text-anchor="middle" transform="rotate(-90 ${fmt(x0 - 44)} ${fmt(y0 + innerH / 2)})">${esc(this.opts.yLabel)}</text>`,
      `<text x="${fmt(x0 + innerW / 2)}" y="${fmt(this.y0 - 26)}" font-size="13" fill="#111" text-anchor="middle" font-weight="bold">${esc(this.opts.title)}</text>`,
    );
    if (this.opts.subtitle) {
      out.push(
        `<text x="${fmt(x0 + innerW / 2)}" y="${fmt(this.y0 - 12)}" font-size="10" fill="#555" text-anchor="middle">${esc(this.opts.subtitle)}</text>`,
      );
    }
    return out.join("\n");
  }

  body(): string {
    return this.marks.join("\n");
  }
}

/** A figure holding one or more horizontally laid-out panels. */
export class Figure {
  private readonly panels: Panel[] = [];
  private legendEntries: LegendEntry[] = [];

  constructor(
    private readonly panelW = 400,
    private readonly panelH = 300,
  ) {}

  addPanel(opts: ChartOptions): Panel {
    const x0 = MARGIN.left + this.panels.length * (this.panelW + MARGIN.left + MARGIN.right);
    const panel = new Panel(opts, x0, MARGIN.top, this.panelW, this.panelH);
    this.panels.push(panel);
    return panel;
  }

  legend(entries: LegendEntry[]): void {
    this.legendEntries = entries;
  }

  render(): string {
    const n = Math.max(this.panels.length, 1);
    const width = n * (this.panelW + MARGIN.left + MARGIN.right);
    const legendH = this.legendEntries.length > 0 ? 22 : 0;
    const height = MARGIN.top + this.panelH + MARGIN.bottom + legendH;
    const parts: string[] = [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    ];
    for (const p of this.panels) parts.push(p.frame(), p.body());
    if (this.legendEntries.length > 0) {
      let lx = MARGIN.left;
      const ly = height - 10;
      for (const e of this.legendEntries) {
        const dashAttr = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
        parts.push(
          `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${e.color}" stroke-width="2"${dashAttr}/>`,
          `<text x="${lx + 27}" y="${ly}" font-size="11" fill="#111">${esc(e.label)}</text>`,
        );
        lx += 27 + 9 * e.label.length + 24;
      }
    }
    parts.push("</svg>");
    return parts.join("\n") + "\n";
  }
}
