#!/usr/bin/env node
/** Command-line front end: one subcommand per figure kind. */
import { realpathSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { FigureError, FigureSpec, renderFigure } from "./figures.js";
import { SchemaError } from "./schema.js";

const USAGE = `usage:
  figure-gen heatmap-triptych <no_turbo.csv> <peer_turbo.csv> <diff.csv> --out FIG.svg
  figure-gen survival-overlay <survival.csv> [more.csv ...] --out FIG.svg [--dim N]
  figure-gen quorum-bars <quorum.csv> --phi PHI --out FIG.svg

options:
  --out PATH      output image path (required; extension selects the format)
  --dim N         dimension to plot (survival-overlay; defaults to k)
  --phi PHI       quorum threshold to select rows by (quorum-bars)
  --x-label TEXT  x axis label
  --y-label TEXT  y axis label
`;

const KINDS: Record<string, FigureSpec["kind"]> = {
  "heatmap-triptych": "heatmap_triptych",
  "survival-overlay": "survival_overlay",
  "quorum-bars": "quorum_bars",
};

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string" },
        dim: { type: "string" },
        phi: { type: "string" },
        "x-label": { type: "string" },
        "y-label": { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    process.stderr.write(`figure-gen: error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  if (parsed.values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  const [command, ...inputs] = parsed.positionals;
  const kind = command === undefined ? undefined : KINDS[command];
  if (kind === undefined) {
    process.stderr.write(`figure-gen: error: unknown command "${command ?? ""}"\n${USAGE}`);
    return 2;
  }
  if (parsed.values.out === undefined) {
    process.stderr.write(`figure-gen: error: --out is required\n${USAGE}`);
    return 2;
  }
  if (inputs.length === 0) {
    process.stderr.write(`figure-gen: error: ${command} needs at least one input CSV\n${USAGE}`);
    return 2;
  }
  const spec: FigureSpec = {
    kind,
    inputs,
    output: parsed.values.out,
    xLabel: parsed.values["x-label"],
    yLabel: parsed.values["y-label"],
  };
  if (parsed.values.dim !== undefined) {
    const dim = Number(parsed.values.dim);
    if (!Number.isInteger(dim) || dim < 0) {
      process.stderr.write(`figure-gen: error: --dim must be a nonnegative integer\n`);
      return 2;
    }
    spec.dim = dim;
  }
  if (parsed.values.phi !== undefined) {
    const phi = Number(parsed.values.phi);
    if (!Number.isFinite(phi)) {
      process.stderr.write(`figure-gen: error: --phi must be a number\n`);
      return 2;
    }
    spec.phi = phi;
  }
  try {
    renderFigure(spec);
  } catch (err) {
    if (err instanceof FigureError || err instanceof SchemaError) {
      process.stderr.write(`figure-gen: error: ${err.message}\n`);
      return 1;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`figure-gen: error: ${(err as Error).message}\n`);
      return 1;
    }
    throw err;
  }
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined && realpathSync(entry) === fileURLToPath(import.meta.url)) {
  process.exit(main(process.argv.slice(2)));
}
