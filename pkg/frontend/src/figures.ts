/**
 * Figure builders: regret scatter with fitted slope, condition-region
 * maps, and the promotion-margin curves.
 *
 * The renderers are read-only consumers: slopes and regrets come from the
 * fit/sweep files untouched. The margin curves are integer staircase
 * formulas with no experimental content.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { SchemaMismatch } from "./errors.js";
import {
  ConditionRow,
  parseConditionsCsv,
  parseFitsJson,
  parseResultsCsv,
  scatterPoints,
} from "./schema.js";
import { circle, document, line, linearScale, niceTicks, polyline, rect, text } from "./svg.js";

export type FigureKind = "scatter-slope" | "condition-region" | "margin-curves";

export interface FigureSpec {
  kind: FigureKind;
  /** Input files by role; scatter needs results+fits, regions needs conditions. */
  inputs: { results?: string; fits?: string; conditions?: string };
  output: string;
  /** Square axis limit for scatter panels; defaults to the data maximum. */
  axisMax?: number;
  /** Variant plotted on the y axis of a scatter panel. */
  algo?: string;
  baseline?: string;
  logAxes?: boolean;
  /** Batch sizes for the margin-curve panel. */
  marginSizes?: number[];
}

const PLOT = { size: 430, left: 56, top: 34, bottom: 46 };

const COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function readInput(role: "results" | "fits" | "conditions", spec: FigureSpec): string {
  const file = spec.inputs[role];
  if (!file) {
    throw new SchemaMismatch(`<${role}>`, `figure '${spec.kind}' needs the ${role} input`);
  }
  if (!fs.existsSync(file)) {
    throw new SchemaMismatch(file, "file does not exist");
  }
  return fs.readFileSync(file, "utf-8");
}

export function buildScatterSlopeSvg(
  points: Array<{ x: number; y: number }>,
  beta: number,
  algo: string,
  baseline: string,
  axisMax?: number,
  logAxes = false,
): string {
  const { size, left, top, bottom } = PLOT;
  const width = left + size + 24;
  const height = top + size + bottom;
  const body: string[] = [];

  const dataMax = Math.max(
    axisMax ?? 0,
    ...points.map((p) => Math.max(p.x, p.y)),
    1e-12,
  );
  let toX: (v: number) => number;
  let toY: (v: number) => number;
  if (logAxes) {
    const positive = points.flatMap((p) => [p.x, p.y]).filter((v) => v > 0);
    const lo = Math.min(...(positive.length ? positive : [1e-6])) / 2;
    const logLo = Math.log10(lo);
    const logHi = Math.log10(dataMax * 1.05);
    const span = logHi - logLo || 1;
    // zero regret has no log position; it is pinned to the axis minimum
    const place = (v: number) => (Math.log10(Math.max(v, lo)) - logLo) / span;
    toX = (v) => left + place(v) * size;
    toY = (v) => top + size - place(v) * size;
  } else {
    const max = dataMax * 1.05;
    const sx = linearScale(max, left, left + size);
    const sy = linearScale(max, top + size, top);
    toX = (v) => sx(v);
    toY = (v) => sy(v);
    for (const tick of niceTicks(dataMax)) {
      body.push(line(toX(tick), top + size, toX(tick), top + size + 4, "#444"));
      body.push(text(toX(tick), top + size + 16, String(tick), 10, "middle"));
      body.push(line(left - 4, toY(tick), left, toY(tick), "#444"));
      body.push(text(left - 6, toY(tick) + 3, String(tick), 10, "end"));
    }
  }

  // frame
  body.push(rect(left, top, size, size, "none", ' stroke="#444"'));
  // slope line y = beta * x, clipped to the frame
  const xEnd = beta > 1 ? dataMax / beta : dataMax;
  body.push(line(toX(0), toY(0), toX(xEnd), toY(beta * xEnd), "#222", 1.2));
  for (const p of points) {
    body.push(circle(toX(p.x), toY(p.y), 2.4, COLORS[0]!, 0.45));
  }
  body.push(text(left + 10, top + 16, `${algo} vs ${baseline}`, 13));
  body.push(text(left + 10, top + 32, `β = ${beta.toFixed(3)} (${points.length} points)`, 12));
  body.push(text(left + size / 2, height - 10, `mean simple regret (${baseline})`, 12, "middle"));
  body.push(
    text(14, top + size / 2, `mean simple regret (${algo})`, 12, "middle",
      ` transform="rotate(-90 14 ${top + size / 2})"`),
  );
  return document(width, height, body);
}

export function buildConditionRegionSvg(rows: ConditionRow[]): string {
  const batchSizes = [...new Set(rows.map((r) => r.b))].sort((a, b) => a - b);
  const nMax = Math.max(...rows.map((r) => r.n));
  const nMin = Math.min(...rows.map((r) => r.n));
  const bMax = Math.max(...rows.map((r) => r.B));
  const bMin = Math.min(...rows.map((r) => r.B));
  const panel = 240;
  const gap = 54;
  const left = 56;
  const top = 44;
  const width = left + batchSizes.length * (panel + gap);
  const height = top + panel + 74;
  const body: string[] = [];

  const fill = (c1: boolean, c2: boolean): string =>
    c1 && c2 ? "#31a354" : c1 ? "#9ecae1" : c2 ? "#fdd49e" : "#f2f2f2";

  batchSizes.forEach((b, panelIdx) => {
    const x0 = left + panelIdx * (panel + gap);
    const cellW = panel / (nMax - nMin + 1);
    const cellH = panel / (bMax - bMin + 1);
    // column-wise run-length merge keeps the element count small
    const byColumn = new Map<number, ConditionRow[]>();
    for (const row of rows) {
      if (row.b !== b) continue;
      const column = byColumn.get(row.n) ?? [];
      column.push(row);
      byColumn.set(row.n, column);
    }
    for (const [n, column] of byColumn) {
      column.sort((p, q) => p.B - q.B);
      let runStart = 0;
      for (let i = 1; i <= column.length; i += 1) {
        const prev = column[i - 1]!;
        const cur = column[i];
        if (cur && cur.c1 === prev.c1 && cur.c2 === prev.c2 && cur.B === prev.B + 1) {
          continue;
        }
        const first = column[runStart]!;
        const x = x0 + (n - nMin) * cellW;
        const yTop = top + panel - (prev.B - bMin + 1) * cellH;
        const h = (prev.B - first.B + 1) * cellH;
        body.push(rect(x, yTop, cellW, h, fill(first.c1, first.c2)));
        runStart = i;
      }
    }
    body.push(rect(x0, top, panel, panel, "none", ' stroke="#444"'));
    body.push(text(x0 + panel / 2, top - 10, `batch size b = ${b}`, 12, "middle"));
    body.push(text(x0 + panel / 2, top + panel + 18, "number of arms n", 11, "middle"));
    body.push(text(x0 - 6, top + panel + 4, String(bMin), 9, "end"));
    body.push(text(x0 - 6, top + 8, String(bMax), 9, "end"));
    body.push(text(x0, top + panel + 18, String(nMin), 9, "middle"));
    body.push(text(x0 + panel, top + panel + 18, String(nMax), 9, "middle"));
  });
  body.push(text(16, top + panel / 2, "batch budget B", 11, "middle",
    ` transform="rotate(-90 16 ${top + panel / 2})"`));

  const legendY = height - 22;
  const entries: Array<[string, string]> = [
    ["#31a354", "executable and equivalent"],
    ["#9ecae1", "executable only"],
    ["#fdd49e", "equivalence budget only"],
    ["#f2f2f2", "neither"],
  ];
  let lx = left;
  for (const [color, label] of entries) {
    body.push(rect(lx, legendY - 9, 12, 12, color, ' stroke="#999"'));
    body.push(text(lx + 16, legendY + 1, label, 10));
    lx += 24 + label.length * 5.4;
  }
  return document(width, height, body);
}

/** ceil(x/2) - 1 versus ceil((b-1) / floor(4b/x)) on x in [3, 4b]. */
export function buildMarginCurvesSvg(batchSizes: number[]): string {
  const sizes = [...batchSizes].sort((a, b) => a - b);
  const largest = sizes[sizes.length - 1];
  if (!largest || sizes.some((b) => b < 2)) {
    throw new SchemaMismatch("<margin-b>", "batch sizes must all be >= 2");
  }
  const xMax = 4 * largest;
  const yMax = Math.ceil(xMax / 2) - 1;
  const { size, left, top, bottom } = PLOT;
  const width = left + size + 150;
  const height = top + size + bottom;
  const sx = linearScale(xMax, left, left + size);
  const sy = linearScale(yMax * 1.05, top + size, top);
  const body: string[] = [];

  for (const tick of niceTicks(xMax)) {
    body.push(line(sx(tick), top + size, sx(tick), top + size + 4, "#444"));
    body.push(text(sx(tick), top + size + 16, String(tick), 10, "middle"));
  }
  for (const tick of niceTicks(yMax)) {
    body.push(line(left - 4, sy(tick), left, sy(tick), "#444"));
    body.push(text(left - 6, sy(tick) + 3, String(tick), 10, "end"));
  }
  body.push(rect(left, top, size, size, "none", ' stroke="#444"'));

  const lhs: Array<[number, number]> = [];
  for (let x = 3; x <= xMax; x += 1) {
    lhs.push([sx(x), sy(Math.ceil(x / 2) - 1)]);
  }
  body.push(polyline(lhs, "#222", 2));
  body.push(text(left + size - 8, sy(yMax) + 14, "ceil(x/2) - 1", 11, "end"));

  sizes.forEach((b, i) => {
    const pts: Array<[number, number]> = [];
    for (let x = 3; x <= 4 * b; x += 1) {
      const denom = Math.floor((4 * b) / x);
      pts.push([sx(x), sy(Math.ceil((b - 1) / denom))]);
    }
    const color = COLORS[i % COLORS.length]!;
    body.push(polyline(pts, color, 1.5));
    body.push(rect(left + size + 14, top + 12 + i * 18, 12, 3, color));
    body.push(text(left + size + 30, top + 18 + i * 18, `b = ${b}`, 11));
  });
  body.push(text(left + size / 2, height - 10, "active-set size x", 12, "middle"));
  body.push(text(14, top + size / 2, "pulls pending / promotion margin", 12, "middle",
    ` transform="rotate(-90 14 ${top + size / 2})"`));
  return document(width, height, body);
}

/** Render one figure to spec.output; creates the parent directory. */
export function render(spec: FigureSpec): string {
  let svg: string;
  if (spec.kind === "scatter-slope") {
    const rows = parseResultsCsv(spec.inputs.results ?? "<results>", readInput("results", spec));
    const fits = parseFitsJson(spec.inputs.fits ?? "<fits>", readInput("fits", spec));
    const algo = spec.algo ?? "ash";
    const baseline = spec.baseline ?? fits.baseline;
    const entry = fits.fits[algo];
    if (!entry) {
      throw new SchemaMismatch(spec.inputs.fits ?? "<fits>", `no fit entry for '${algo}'`);
    }
    const points = scatterPoints(rows, algo, baseline);
    if (points.length === 0) {
      throw new SchemaMismatch(
        spec.inputs.results ?? "<results>",
        `no paired (${baseline}, ${algo}) instances`,
      );
    }
    svg = buildScatterSlopeSvg(points, entry.beta, algo, baseline, spec.axisMax, spec.logAxes);
  } else if (spec.kind === "condition-region") {
    const rows = parseConditionsCsv(
      spec.inputs.conditions ?? "<conditions>",
      readInput("conditions", spec),
    );
    if (rows.length === 0) {
      throw new SchemaMismatch(spec.inputs.conditions ?? "<conditions>", "no data rows");
    }
    svg = buildConditionRegionSvg(rows);
  } else if (spec.kind === "margin-curves") {
    svg = buildMarginCurvesSvg(spec.marginSizes ?? [2, 4, 8, 16, 32]);
  } else {
    throw new SchemaMismatch("<spec>", `unknown figure kind '${String(spec.kind)}'`);
  }
  fs.mkdirSync(path.dirname(spec.output), { recursive: true });
  fs.writeFileSync(spec.output, svg, "utf-8");
  return spec.output;
}
