/**
 * render-figures: turn sweep/fit/condition outputs into SVG figures.
 *
 *   render-figures --results results.csv --fits fits.json \
 *       --conditions regions.csv --outdir figs/
 *
 * One scatter-slope panel is written per fit entry (the baseline's
 * self-plot included), plus a condition-region map and the margin-curve
 * panel. Exit codes: 0 success, 2 usage or schema errors.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { SchemaMismatch } from "./errors.js";
import { FigureSpec, render } from "./figures.js";
import { parseFitsJson } from "./schema.js";

interface CliOptions {
  results?: string;
  fits?: string;
  conditions?: string;
  outdir: string;
  baseline?: string;
  marginSizes: number[];
  logAxes: boolean;
}

export function parseArgs(argv: string[]): CliOptions {
  const opts: CliOptions = { outdir: "", marginSizes: [2, 4, 8, 16, 32], logAxes: false };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i]!;
    const next = (): string => {
      const value = argv[i + 1];
      if (value === undefined) throw new Error(`${flag} needs a value`);
      i += 1;
      return value;
    };
    switch (flag) {
      case "--results":
        opts.results = next();
        break;
      case "--fits":
        opts.fits = next();
        break;
      case "--conditions":
        opts.conditions = next();
        break;
      case "--outdir":
        opts.outdir = next();
        break;
      case "--baseline":
        opts.baseline = next();
        break;
      case "--margin-b":
        opts.marginSizes = next()
          .split(",")
          .map((v) => Number(v.trim()));
        break;
      case "--log":
        opts.logAxes = true;
        break;
      default:
        throw new Error(`unknown flag '${flag}'`);
    }
  }
  if (!opts.outdir) {
    throw new Error("--outdir is required");
  }
  if (opts.marginSizes.some((b) => !Number.isInteger(b) || b < 2)) {
    throw new Error("--margin-b must be a comma list of integers >= 2");
  }
  return opts;
}

export function main(argv: string[]): number {
  let opts: CliOptions;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    console.error(
      "usage: render-figures [--results results.csv --fits fits.json] " +
        "[--conditions regions.csv] --outdir figs/ [--baseline sh] " +
        "[--margin-b 2,4,8,16,32] [--log]",
    );
    return 2;
  }
  const written: string[] = [];
  try {
    if (opts.results || opts.fits) {
      if (!opts.results || !opts.fits) {
        throw new SchemaMismatch("<inputs>", "scatter panels need both --results and --fits");
      }
      const fits = parseFitsJson(opts.fits, fs.readFileSync(opts.fits, "utf-8"));
      for (const algo of Object.keys(fits.fits).sort()) {
        const spec: FigureSpec = {
          kind: "scatter-slope",
          inputs: { results: opts.results, fits: opts.fits },
          output: path.join(opts.outdir, `scatter-slope-${algo}.svg`),
          algo,
          baseline: opts.baseline ?? fits.baseline,
          logAxes: opts.logAxes,
        };
        written.push(render(spec));
      }
    }
    if (opts.conditions) {
      written.push(
        render({
          kind: "condition-region",
          inputs: { conditions: opts.conditions },
          output: path.join(opts.outdir, "condition-region.svg"),
        }),
      );
    }
    written.push(
      render({
        kind: "margin-curves",
        inputs: {},
        output: path.join(opts.outdir, "margin-curves.svg"),
        marginSizes: opts.marginSizes,
      }),
    );
  } catch (err) {
    if (err instanceof SchemaMismatch) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      console.error(`input error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  for (const file of written) {
    console.log(`wrote ${file}`);
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
