/**
 * Reader for the simulator's result files.
 *
 * CSV dialect: a `# jpasim-csv v1` magic line, a `# config = {...}` line
 * carrying the producing run's canonical-JSON configuration, then a plain
 * header row and numeric data rows (booleans written as 1/0).  JSON
 * sidecars (`*.summary.json`, cusp output) are validated with zod schemas.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

export const MAGIC = "# jpasim-csv v1";
const CONFIG_PREFIX = "# config = ";

/** Input file violates the dialect (bad magic or config line). */
export class FormatError extends Error {
  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "FormatError";
  }
}

/** Input parses but a required column is absent. */
export class SchemaError extends Error {
  readonly column: string;
  constructor(path: string, column: string) {
    super(`${path}: missing required column '${column}'`);
    this.name = "SchemaError";
    this.column = column;
  }
}

/** Input carries no data rows. */
export class EmptyInputError extends Error {
  constructor(path: string) {
    super(`${path}: no data rows`);
    this.name = "EmptyInputError";
  }
}

const DeviceSchema = z
  .object({ f0_hz: z.number(), ic_a: z.number(), q: z.number() })
  .passthrough();

const ConfigSchema = z
  .object({ subcommand: z.string(), device: DeviceSchema })
  .passthrough();

export type RunConfig = z.infer<typeof ConfigSchema>;

export interface ResultTable {
  path: string;
  config: RunConfig;
  /** Column name -> values, in file order. */
  columns: Map<string, Float64Array>;
  rows: number;
}

export function readResultCsv(path: string): ResultTable {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n");
  if (lines[0] !== MAGIC) {
    throw new FormatError(path, `expected magic line '${MAGIC}'`);
  }
  const configLine = lines[1] ?? "";
  if (!configLine.startsWith(CONFIG_PREFIX)) {
    throw new FormatError(path, "expected '# config = {...}' on line 2");
  }
  const parsedConfig = ConfigSchema.safeParse(
    JSON.parse(configLine.slice(CONFIG_PREFIX.length)),
  );
  if (!parsedConfig.success) {
    throw new FormatError(path, `bad config: ${parsedConfig.error.message}`);
  }

  const body = lines.slice(2).join("\n");
  const parsed = Papa.parse<Record<string, number>>(body, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new FormatError(path, `row ${e.row}: ${e.message}`);
  }
  const names = (parsed.meta.fields ?? []).filter((f) => f.length > 0);
  if (names.length === 0 || parsed.data.length === 0) {
    throw new EmptyInputError(path);
  }

  const columns = new Map<string, Float64Array>();
  for (const name of names) {
    const values = new Float64Array(parsed.data.length);
    parsed.data.forEach((row, i) => {
      const v = row[name];
      if (typeof v !== "number") {
        throw new FormatError(path, `non-numeric value in column '${name}'`);
      }
      values[i] = v;
    });
    columns.set(name, values);
  }
  return { path, config: parsedConfig.data, columns, rows: parsed.data.length };
}

/** Returns the named column or throws a SchemaError naming it. */
export function requireColumn(table: ResultTable, name: string): Float64Array {
  const col = table.columns.get(name);
  if (col === undefined) throw new SchemaError(table.path, name);
  return col;
}

const CuspSchema = z
  .object({ omega_rel: z.number(), r: z.number(), n: z.number() })
  .passthrough();

export type CuspPoint = z.infer<typeof CuspSchema>;

const SaturationSummarySchema = z
  .object({
    G0_db: z.number(),
    p1db: z.number().nullable(),
    stiff_pump_amp: z.number().nullable(),
    omega_rel: z.number(),
    model: z.string(),
  })
  .passthrough();

export type SaturationSummary = z.infer<typeof SaturationSummarySchema>;

const DynrangeSummarySchema = z
  .object({
    ratios: z.array(z.number()),
    p1db: z.array(z.number().nullable()),
    strictly_increasing: z.boolean(),
  })
  .passthrough();

export type DynrangeSummary = z.infer<typeof DynrangeSummarySchema>;

function readJsonAs<T>(path: string, schema: z.ZodType<T>): T {
  const parsed = schema.safeParse(JSON.parse(readFileSync(path, "utf8")));
  if (!parsed.success) {
    throw new FormatError(path, parsed.error.message);
  }
  return parsed.data;
}

export const readCuspJson = (path: string): CuspPoint =>
  readJsonAs(path, CuspSchema);

export const readSaturationSummary = (path: string): SaturationSummary =>
  readJsonAs(path, SaturationSummarySchema);

export const readDynrangeSummary = (path: string): DynrangeSummary =>
  readJsonAs(path, DynrangeSummarySchema);
