import assert from "node:assert/strict";
import { test } from "node:test";

import { SchemaMismatch } from "../src/errors.js";
import {
  meanRegretByInstance,
  parseConditionsCsv,
  parseFitsJson,
  parseResultsCsv,
  scatterPoints,
} from "../src/schema.js";

const HEADER = "instance_id,n,alpha,mu_min,mu_max,b,B,algo,seed,selected_arm,regret";

test("parses sweep rows and skips comment lines", () => {
  const text = `# config {}\n${HEADER}\n0,4,1.0,0.1,0.9,2,8,sh,0,1,0.0\n0,4,1.0,0.1,0.9,2,8,sh,1,2,0.25\n`;
  const rows = parseResultsCsv("results.csv", text);
  assert.equal(rows.length, 2);
  assert.equal(rows[0]!.algo, "sh");
  assert.equal(rows[1]!.regret, 0.25);
});

test("missing column is named in the error", () => {
  const noRegret = HEADER.replace(",regret", "");
  assert.throws(
    () => parseResultsCsv("results.csv", `${noRegret}\n0,4,1.0,0.1,0.9,2,8,sh,0,1\n`),
    (err: unknown) =>
      err instanceof SchemaMismatch && err.detail.includes("'regret'"),
  );
});

test("bad cells are reported, not dropped", () => {
  const text = `${HEADER}\n0,4,1.0,0.1,0.9,2,8,sh,0,1,zero\n`;
  assert.throws(
    () => parseResultsCsv("results.csv", text),
    (err: unknown) => err instanceof SchemaMismatch && err.detail.includes("row 1"),
  );
});

test("empty file has no header", () => {
  assert.throws(
    () => parseResultsCsv("results.csv", "# only comments\n"),
    (err: unknown) => err instanceof SchemaMismatch,
  );
});

test("conditions flags must be 0 or 1", () => {
  const good = parseConditionsCsv("regions.csv", "n,B,b,c1,c2\n2,1,4,1,0\n");
  assert.deepEqual(good[0], { n: 2, B: 1, b: 4, c1: true, c2: false });
  assert.throws(
    () => parseConditionsCsv("regions.csv", "n,B,b,c1,c2\n2,1,4,yes,0\n"),
    (err: unknown) => err instanceof SchemaMismatch,
  );
});

test("fits json wants numeric betas", () => {
  const parsed = parseFitsJson(
    "fits.json",
    JSON.stringify({ config: { baseline: "sh" }, fits: { ash: { beta: 1.0, points: 3 } } }),
  );
  assert.equal(parsed.baseline, "sh");
  assert.equal(parsed.fits["ash"]!.beta, 1.0);
  assert.throws(
    () => parseFitsJson("fits.json", JSON.stringify({ fits: { ash: { beta: "1" } } })),
    (err: unknown) => err instanceof SchemaMismatch,
  );
  assert.throws(
    () => parseFitsJson("fits.json", "not json"),
    (err: unknown) => err instanceof SchemaMismatch,
  );
});

test("per-instance means pair baseline and variant", () => {
  const text =
    `${HEADER}\n` +
    "0,4,1.0,0.1,0.9,2,8,sh,0,1,0.2\n" +
    "0,4,1.0,0.1,0.9,2,8,sh,1,1,0.4\n" +
    "0,4,1.0,0.1,0.9,2,8,ash,0,1,0.1\n" +
    "1,4,1.0,0.1,0.9,2,8,sh,0,1,0.6\n";
  const rows = parseResultsCsv("results.csv", text);
  const means = meanRegretByInstance(rows, "sh");
  assert.equal(means.get(0), 0.30000000000000004);
  assert.equal(means.get(1), 0.6);
  // instance 1 has no ash record, so only instance 0 pairs up
  assert.deepEqual(scatterPoints(rows, "ash", "sh"), [
    { x: 0.30000000000000004, y: 0.1 },
  ]);
});
