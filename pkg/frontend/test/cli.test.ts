import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";

const HERE = path.dirname(new URL(import.meta.url).pathname);
const CLI = path.resolve(HERE, "../src/cli.js");
const FIXTURES = path.resolve(HERE, "../../test/fixtures");

function runCli(...argv: string[]) {
  return spawnSync(process.execPath, [CLI, ...argv], { encoding: "utf-8" });
}

test("renders all three figure kinds from primary outputs", () => {
  const outdir = fs.mkdtempSync(path.join(os.tmpdir(), "render-"));
  const result = runCli(
    "--results", path.join(FIXTURES, "results.csv"),
    "--fits", path.join(FIXTURES, "fits.json"),
    "--conditions", path.join(FIXTURES, "regions.csv"),
    "--outdir", outdir,
  );
  assert.equal(result.status, 0, result.stderr);
  const files = fs.readdirSync(outdir).sort();
  assert.deepEqual(files, [
    "condition-region.svg",
    "margin-curves.svg",
    "scatter-slope-ash.svg",
    "scatter-slope-bsh.svg",
    "scatter-slope-jun16.svg",
    "scatter-slope-sh.svg",
  ]);
  // the baseline self-plot is labeled with the identity slope
  const self = fs.readFileSync(path.join(outdir, "scatter-slope-sh.svg"), "utf-8");
  assert.match(self, /β = 1\.000/);
  for (const file of files) {
    const svg = fs.readFileSync(path.join(outdir, file), "utf-8");
    assert.match(svg, /^<svg /);
    assert.match(svg, /<\/svg>\n$/);
  }
});

test("schema problems exit 2 and name the column", () => {
  const outdir = fs.mkdtempSync(path.join(os.tmpdir(), "render-"));
  const broken = path.join(outdir, "broken.csv");
  fs.writeFileSync(broken, "instance_id,n,alpha\n0,4,1.0\n", "utf-8");
  const result = runCli(
    "--results", broken,
    "--fits", path.join(FIXTURES, "fits.json"),
    "--outdir", outdir,
  );
  assert.equal(result.status, 2);
  assert.match(result.stderr, /missing column/);
});

test("usage errors exit 2", () => {
  const result = runCli("--results", "whatever.csv");
  assert.equal(result.status, 2);
  assert.match(result.stderr, /--outdir is required/);
});

test("margin-only invocation needs no inputs", () => {
  const outdir = fs.mkdtempSync(path.join(os.tmpdir(), "render-"));
  const result = runCli("--outdir", outdir, "--margin-b", "2,32");
  assert.equal(result.status, 0, result.stderr);
  assert.deepEqual(fs.readdirSync(outdir), ["margin-curves.svg"]);
});
