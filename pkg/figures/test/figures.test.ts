import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { MAGIC, SchemaError } from "../src/csv.js";
import { FIGURE_IDS, renderFigure } from "../src/figures.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));
const OUT = mkdtempSync(join(tmpdir(), "jpasim-svg-"));

describe("all five figures on real simulator output", () => {
  for (const id of FIGURE_IDS) {
    it(`renders ${id} end-to-end`, () => {
      const path = renderFigure(id, FIXTURES, OUT);
      expect(existsSync(path)).toBe(true);
      const svg = readFileSync(path, "utf8");
      expect(svg.startsWith("<svg xmlns=")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      // Every figure carries at least one data mark (curve, cell, or point).
      expect(svg).toMatch(/<(polyline|circle)/);
      expect(svg).not.toContain("NaN");
    });
  }

  it("re-renders byte-identically", () => {
    const a = readFileSync(renderFigure("saturation", FIXTURES, OUT), "utf8");
    const b = readFileSync(renderFigure("saturation", FIXTURES, OUT), "utf8");
    expect(a).toBe(b);
  });
});

describe("figure content", () => {
  it("stability figure marks the cusp and fills bistable cells", () => {
    const svg = readFileSync(renderFigure("stability", FIXTURES, OUT), "utf8");
    expect(svg).toContain("cusp (0.97088, 1.0133)");
    expect(svg).toContain("<circle");
    const cells = svg.match(/<rect [^>]*fill="#f4a582"/g) ?? [];
    expect(cells.length).toBeGreaterThan(50);
    expect(svg).toContain("pump frequency / resonance frequency");
    expect(svg).toContain("pump amplitude / onset amplitude");
    expect(svg).toContain("f0 = 7 GHz, Q = 30");
  });

  it("gain panels show one panel per Q and the flat no-pump reference", () => {
    const svg = readFileSync(
      renderFigure("lingain_panels", FIXTURES, OUT),
      "utf8",
    );
    for (const q of ["Q = 10", "Q = 30", "Q = 150"]) {
      expect(svg).toContain(q);
    }
    expect(svg).toContain("closed form");
    expect(svg).toContain("no pump (0 dB)");
    // The undriven reference polyline must be flat: constant y coordinate.
    const dashed = svg.match(
      /<polyline [^>]*stroke="#999"[^>]*points="([^"]+)"/,
    );
    expect(dashed).not.toBeNull();
    const ys = new Set(
      dashed![1]!.split(" ").map((pt) => pt.split(",")[1]!),
    );
    expect(ys.size).toBe(1);
  });

  it("matched profiles overlay both pump settings", () => {
    const svg = readFileSync(
      renderFigure("matched_profiles", FIXTURES, OUT),
      "utf8",
    );
    expect(svg).toContain("cubic, pump 0.99");
    expect(svg).toContain("closed form, pump 1.00297");
    const curves = svg.match(/<polyline/g) ?? [];
    expect(curves.length).toBe(2);
  });

  it("saturation figure carries both reference overlays", () => {
    const svg = readFileSync(renderFigure("saturation", FIXTURES, OUT), "utf8");
    expect(svg).toContain("small-signal gain");
    expect(svg).toContain("signal = pump/10");
    for (const model of ["linear", "cubic", "cubic c3 only", "full sine"]) {
      expect(svg).toContain(model);
    }
  });

  it("dynamic-range figure marks each compression point", () => {
    const svg = readFileSync(renderFigure("dynrange", FIXTURES, OUT), "utf8");
    for (const label of ["ratio -1", "ratio -10", "ratio -100"]) {
      expect(svg).toContain(label);
    }
    const markers = svg.match(/1 dB point/g) ?? [];
    expect(markers.length).toBe(3);
  });
});

describe("error handling", () => {
  it("fails with a SchemaError naming the absent column", () => {
    const dir = mkdtempSync(join(tmpdir(), "jpasim-bad-"));
    const config =
      '{"subcommand":"stability","device":{"f0_hz":7e9,"ic_a":2e-6,"q":30}}';
    writeFileSync(
      join(dir, "stability_q30.csv"),
      `${MAGIC}\n# config = ${config}\nomega_rel,r\n0.97,1.0\n`,
    );
    writeFileSync(
      join(dir, "cusp_q30.json"),
      JSON.stringify({ omega_rel: 0.97, r: 1.01, n: 0.02 }),
    );
    try {
      renderFigure("stability", dir, OUT);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      expect((err as SchemaError).column).toBe("branch_count");
    }
  });

  it("fails when an input file is missing entirely", () => {
    const dir = mkdtempSync(join(tmpdir(), "jpasim-void-"));
    expect(() => renderFigure("dynrange", dir, OUT)).toThrow();
  });
});
