/**
 * Parsers for the primary component's outputs.
 *
 * Inputs are trusted to be machine-written (no quoted commas); any missing
 * column or unparsable cell raises SchemaMismatch naming the problem —
 * rows are never silently dropped.
 */

import { SchemaMismatch } from "./errors.js";

export interface SweepRow {
  instanceId: number;
  n: number;
  alpha: number;
  muMin: number;
  muMax: number;
  b: number;
  B: number;
  algo: string;
  seed: number;
  selectedArm: number;
  regret: number;
}

export interface ConditionRow {
  n: number;
  B: number;
  b: number;
  c1: boolean;
  c2: boolean;
}

export interface FitEntry {
  beta: number;
  points: number;
}

export interface FitsFile {
  baseline: string;
  fits: Record<string, FitEntry>;
}

interface Table {
  header: string[];
  rows: string[][];
}

function readCsv(file: string, text: string): Table {
  const lines = text
    .split("\n")
    .map((l) => l.trimEnd())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaMismatch(file, "no header row");
  }
  const header = lines[0]!.split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  return { header, rows };
}

function columnIndex(file: string, table: Table, names: string[]): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of names) {
    const at = table.header.indexOf(name);
    if (at < 0) {
      throw new SchemaMismatch(file, `missing column '${name}'`);
    }
    index.set(name, at);
  }
  return index;
}

function numberCell(file: string, row: string[], at: number, line: number): number {
  const raw = row[at];
  const value = raw === undefined || raw === "" ? NaN : Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaMismatch(file, `unparsable number '${raw ?? ""}' on data row ${line}`);
  }
  return value;
}

const SWEEP_COLUMNS = [
  "instance_id",
  "n",
  "alpha",
  "mu_min",
  "mu_max",
  "b",
  "B",
  "algo",
  "seed",
  "selected_arm",
  "regret",
];

export function parseResultsCsv(file: string, text: string): SweepRow[] {
  const table = readCsv(file, text);
  const col = columnIndex(file, table, SWEEP_COLUMNS);
  return table.rows.map((row, i) => ({
    instanceId: numberCell(file, row, col.get("instance_id")!, i + 1),
    n: numberCell(file, row, col.get("n")!, i + 1),
    alpha: numberCell(file, row, col.get("alpha")!, i + 1),
    muMin: numberCell(file, row, col.get("mu_min")!, i + 1),
    muMax: numberCell(file, row, col.get("mu_max")!, i + 1),
    b: numberCell(file, row, col.get("b")!, i + 1),
    B: numberCell(file, row, col.get("B")!, i + 1),
    algo: row[col.get("algo")!] ?? "",
    seed: numberCell(file, row, col.get("seed")!, i + 1),
    selectedArm: numberCell(file, row, col.get("selected_arm")!, i + 1),
    regret: numberCell(file, row, col.get("regret")!, i + 1),
  }));
}

export function parseConditionsCsv(file: string, text: string): ConditionRow[] {
  const table = readCsv(file, text);
  const col = columnIndex(file, table, ["n", "B", "b", "c1", "c2"]);
  const flag = (row: string[], at: number, line: number): boolean => {
    const raw = row[at];
    if (raw !== "0" && raw !== "1") {
      throw new SchemaMismatch(file, `flag cell must be 0 or 1, got '${raw ?? ""}' on data row ${line}`);
    }
    return raw === "1";
  };
  return table.rows.map((row, i) => ({
    n: numberCell(file, row, col.get("n")!, i + 1),
    B: numberCell(file, row, col.get("B")!, i + 1),
    b: numberCell(file, row, col.get("b")!, i + 1),
    c1: flag(row, col.get("c1")!, i + 1),
    c2: flag(row, col.get("c2")!, i + 1),
  }));
}

export function parseFitsJson(file: string, text: string): FitsFile {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch (err) {
    throw new SchemaMismatch(file, `not valid JSON (${(err as Error).message})`);
  }
  const obj = payload as { config?: { baseline?: unknown }; fits?: unknown };
  if (typeof obj !== "object" || obj === null || typeof obj.fits !== "object" || obj.fits === null) {
    throw new SchemaMismatch(file, "missing 'fits' object");
  }
  const fits: Record<string, FitEntry> = {};
  for (const [algo, entry] of Object.entries(obj.fits as Record<string, unknown>)) {
    const e = entry as { beta?: unknown; points?: unknown };
    if (typeof e?.beta !== "number" || !Number.isFinite(e.beta)) {
      throw new SchemaMismatch(file, `fit entry '${algo}' has no numeric 'beta'`);
    }
    fits[algo] = {
      beta: e.beta,
      points: typeof e.points === "number" ? e.points : 0,
    };
  }
  const baseline = typeof obj.config?.baseline === "string" ? obj.config.baseline : "sh";
  return { baseline, fits };
}

/** Per-instance mean regret of one algorithm, keyed by instance id. */
export function meanRegretByInstance(rows: SweepRow[], algo: string): Map<number, number> {
  const sums = new Map<number, { total: number; count: number }>();
  for (const row of rows) {
    if (row.algo !== algo) continue;
    const acc = sums.get(row.instanceId) ?? { total: 0, count: 0 };
    acc.total += row.regret;
    acc.count += 1;
    sums.set(row.instanceId, acc);
  }
  const means = new Map<number, number>();
  for (const [id, acc] of sums) {
    means.set(id, acc.total / acc.count);
  }
  return means;
}

/** Paired (baseline, variant) scatter points, ordered by instance id. */
export function scatterPoints(
  rows: SweepRow[],
  algo: string,
  baseline: string,
): Array<{ x: number; y: number }> {
  const xs = meanRegretByInstance(rows, baseline);
  const ys = meanRegretByInstance(rows, algo);
  const points: Array<{ x: number; y: number }> = [];
  for (const id of [...xs.keys()].sort((a, b) => a - b)) {
    const y = ys.get(id);
    if (y !== undefined) {
      points.push({ x: xs.get(id)!, y });
    }
  }
  return points;
}
