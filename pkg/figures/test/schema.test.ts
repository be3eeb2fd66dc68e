import { describe, expect, it } from "vitest";

import { SchemaError, readDiff, readQuorum, readSurvival } from "../src/schema.js";
import { diffLines, quorumLines, survivalLines, tempDir, writeCsv } from "./helpers.js";

describe("readSurvival", () => {
  it("parses a complete grid into values[dim][step]", () => {
    const dir = tempDir();
    const path = writeCsv(dir, "s.csv", survivalLines({ steps: 6, dims: 3 }));
    const table = readSurvival(path);
    expect(table.mode).toBe("no_turbo");
    expect(table.steps).toBe(6);
    expect(table.dims).toBe(3);
    expect(table.params).toEqual({ m: "40", k: "3", alpha: "8", p1: "0.9", p2: "0.9" });
    expect(table.values[0]![0]).toBe(1);
    expect(table.values[2]![4]).toBeCloseTo(4 / 8, 12);
    expect(table.values).toHaveLength(4);
    expect(table.values[1]).toHaveLength(7);
  });

  it("rejects a reordered header", () => {
    const dir = tempDir();
    const lines = survivalLines();
    lines[0] = lines[0]!.replace("mode,source_policy", "source_policy,mode");
    const path = writeCsv(dir, "bad.csv", lines);
    expect(() => readSurvival(path)).toThrow(SchemaError);
    expect(() => readSurvival(path)).toThrow(/bad\.csv: header does not match/);
  });

  it("rejects unknown extra columns", () => {
    const dir = tempDir();
    const lines = survivalLines().map((line, i) => (i === 0 ? line + ",extra" : line + ",1"));
    const path = writeCsv(dir, "extra.csv", lines);
    expect(() => readSurvival(path)).toThrow(/header does not match/);
  });

  it("rejects ragged rows", () => {
    const dir = tempDir();
    const lines = survivalLines();
    lines[3] = lines[3]! + ",stray";
    const path = writeCsv(dir, "ragged.csv", lines);
    expect(() => readSurvival(path)).toThrow(/row 4 has 16 fields, expected 15/);
  });

  it("rejects mixed parameter blocks and mixed modes", () => {
    const dir = tempDir();
    const mixed = survivalLines().concat(survivalLines({ alpha: "9" }).slice(1));
    const mixedPath = writeCsv(dir, "mixed.csv", mixed);
    expect(() => readSurvival(mixedPath)).toThrow(/mixes parameter blocks/);
    const modes = survivalLines();
    modes[1] = modes[1]!.replace("no_turbo", "peer_turbo");
    const modesPath = writeCsv(dir, "modes.csv", modes);
    expect(() => readSurvival(modesPath)).toThrow(/mixes modes/);
  });

  it("rejects an incomplete grid, naming the missing cell", () => {
    const dir = tempDir();
    const lines = survivalLines({ steps: 4, dims: 2 });
    const withHole = lines.filter((line) => !line.includes(",3,1,"));
    const path = writeCsv(dir, "hole.csv", withHole);
    expect(() => readSurvival(path)).toThrow(/incomplete grid: missing \(step=3, dim=1\)/);
  });

  it("rejects duplicate cells and out-of-range fractions", () => {
    const dir = tempDir();
    const dup = survivalLines();
    dup.push(dup[1]!);
    expect(() => readSurvival(writeCsv(dir, "dup.csv", dup))).toThrow(/duplicate cell/);
    const hot = survivalLines({ fraction: () => 1.5 });
    expect(() => readSurvival(writeCsv(dir, "hot.csv", hot))).toThrow(/outside \[0, 1\]/);
  });

  it("reports unreadable and empty files", () => {
    const dir = tempDir();
    expect(() => readSurvival(`${dir}/missing.csv`)).toThrow(/cannot read file \(ENOENT\)/);
    const headerOnly = writeCsv(dir, "empty.csv", [survivalLines()[0]!]);
    expect(() => readSurvival(headerOnly)).toThrow(/no data rows/);
  });
});

describe("readDiff", () => {
  it("parses deltas and enforces [-1, 1]", () => {
    const dir = tempDir();
    const table = readDiff(writeCsv(dir, "d.csv", diffLines({ steps: 5, dims: 2 })));
    expect(table.mode).toBe("");
    expect(table.steps).toBe(5);
    expect(table.values[1]![4]).toBeCloseTo(4 / 20, 12);
    const wild = diffLines({ fraction: () => -2 });
    expect(() => readDiff(writeCsv(dir, "wild.csv", wild))).toThrow(/outside \[-1, 1\]/);
  });
});

describe("readQuorum", () => {
  it("parses reached and unreached rows", () => {
    const dir = tempDir();
    const path = writeCsv(
      dir,
      "q.csv",
      quorumLines([
        { mode: "no_turbo", steps: 103 },
        { mode: "peer_turbo", steps: null },
      ]),
    );
    const table = readQuorum(path);
    expect(table.rows).toHaveLength(2);
    expect(table.rows[0]).toMatchObject({ mode: "no_turbo", reached: true, steps: 103, phi: 0.8 });
    expect(table.rows[1]).toMatchObject({ mode: "peer_turbo", reached: false, steps: null, seconds: null });
  });

  it("rejects inconsistent reached/steps pairs", () => {
    const dir = tempDir();
    const noSteps = quorumLines([{ steps: 7 }]).map((l) => l.replace(",true,7,7", ",true,,7"));
    expect(() => readQuorum(writeCsv(dir, "a.csv", noSteps))).toThrow(
      /steps must be present exactly when reached is true/,
    );
    const ghost = quorumLines([{ steps: null }]).map((l) => l.replace(",false,,", ",false,9,"));
    expect(() => readQuorum(writeCsv(dir, "b.csv", ghost))).toThrow(/steps must be present/);
    const bad = quorumLines([{ steps: 7 }]).map((l) => l.replace(",true,", ",yes,"));
    expect(() => readQuorum(writeCsv(dir, "c.csv", bad))).toThrow(/"yes" is not true\/false/);
  });
});
