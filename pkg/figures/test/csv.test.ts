import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import {
  EmptyInputError,
  FormatError,
  MAGIC,
  readCuspJson,
  readDynrangeSummary,
  readResultCsv,
  readSaturationSummary,
  requireColumn,
  SchemaError,
} from "../src/csv.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));
const tmp = mkdtempSync(join(tmpdir(), "jpasim-figures-"));

describe("result CSV reader on real simulator output", () => {
  it("parses the stability diagram with its run config", () => {
    const t = readResultCsv(join(FIXTURES, "stability_q30.csv"));
    expect(t.config.subcommand).toBe("stability");
    expect(t.config.device.q).toBe(30);
    expect(t.config.device.f0_hz).toBe(7e9);
    expect(t.rows).toBe(111 * 101);
    expect([...t.columns.keys()]).toEqual(["omega_rel", "r", "branch_count"]);
    const branches = requireColumn(t, "branch_count");
    const counts = new Set(branches);
    expect(counts).toEqual(new Set([1, 3]));
  });

  it("round-trips 17-significant-digit floats exactly", () => {
    const t = readResultCsv(join(FIXTURES, "matched_order1.csv"));
    const omega = requireColumn(t, "omega_rel");
    expect(omega[0]).toBe(0.969);
    expect(omega[t.rows - 1]).toBe(0.974);
    const g = requireColumn(t, "G_db");
    // Peak of this curve is a known value from the producing run.
    expect(Math.max(...g)).toBeGreaterThan(38);
  });

  it("reads booleans written as 1/0", () => {
    const t = readResultCsv(join(FIXTURES, "saturation_cubic.csv"));
    const conv = requireColumn(t, "converged");
    for (const v of conv) expect([0, 1]).toContain(v);
  });

  it("names the missing column in a SchemaError", () => {
    const t = readResultCsv(join(FIXTURES, "stability_q30.csv"));
    try {
      requireColumn(t, "no_such_column");
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      expect((err as SchemaError).column).toBe("no_such_column");
      expect((err as Error).message).toContain("no_such_column");
    }
  });

  it("rejects a file without the magic line", () => {
    const p = join(tmp, "nomagic.csv");
    writeFileSync(p, "a,b\n1,2\n");
    expect(() => readResultCsv(p)).toThrow(FormatError);
    expect(() => readResultCsv(p)).toThrow(/magic/);
  });

  it("rejects a file without the config line", () => {
    const p = join(tmp, "noconfig.csv");
    writeFileSync(p, `${MAGIC}\na,b\n1,2\n`);
    expect(() => readResultCsv(p)).toThrow(/config/);
  });

  it("raises EmptyInputError when there are no data rows", () => {
    const p = join(tmp, "empty.csv");
    writeFileSync(
      p,
      `${MAGIC}\n# config = {"subcommand":"steady","device":{"f0_hz":7e9,"ic_a":2e-6,"q":30}}\nomega_rel,n\n`,
    );
    expect(() => readResultCsv(p)).toThrow(EmptyInputError);
  });

  it("rejects non-numeric cells", () => {
    const p = join(tmp, "text.csv");
    writeFileSync(
      p,
      `${MAGIC}\n# config = {"subcommand":"steady","device":{"f0_hz":7e9,"ic_a":2e-6,"q":30}}\nomega_rel,n\n0.9,oops\n`,
    );
    expect(() => readResultCsv(p)).toThrow(/non-numeric/);
  });
});

describe("JSON sidecar readers on real simulator output", () => {
  it("reads the cusp point", () => {
    const c = readCuspJson(join(FIXTURES, "cusp_q30.json"));
    expect(c.omega_rel).toBeCloseTo(0.97088, 5);
    expect(c.r).toBeCloseTo(1.01327, 5);
    expect(c.n).toBeGreaterThan(0);
  });

  it("reads the saturation summary", () => {
    const s = readSaturationSummary(
      join(FIXTURES, "saturation_cubic.summary.json"),
    );
    expect(s.model).toBe("cubic");
    expect(s.G0_db).toBeGreaterThan(38);
    expect(s.stiff_pump_amp).not.toBeNull();
  });

  it("reads the dynamic-range summary", () => {
    const s = readDynrangeSummary(join(FIXTURES, "dynrange.summary.json"));
    expect(s.ratios).toEqual([-1, -10, -100]);
    expect(s.p1db).toHaveLength(3);
    expect(s.strictly_increasing).toBe(true);
  });

  it("rejects a sidecar missing required fields", () => {
    const p = join(tmp, "bad.json");
    writeFileSync(p, JSON.stringify({ omega_rel: 0.97 }));
    expect(() => readCuspJson(p)).toThrow(FormatError);
  });
});
