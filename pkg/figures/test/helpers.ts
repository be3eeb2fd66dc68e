import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "figure-gen-"));
}

export function writeCsv(dir: string, name: string, lines: string[]): string {
  const path = join(dir, name);
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

const SURVIVAL_HEADER =
  "mode,source_policy,peer_rule,m,k,alpha,p1,p2,q,trials,seed,step,dim,fraction,stderr";
const QUORUM_HEADER = "mode,source_policy,peer_rule,m,k,alpha,p1,p2,phi,reached,steps,seconds";
const DIFF_HEADER = "m,k,alpha,p1,p2,step,dim,delta";

export interface GridOptions {
  mode?: string;
  m?: string;
  k?: string;
  alpha?: string;
  p1?: string;
  p2?: string;
  steps?: number;
  dims?: number;
  fraction?: (step: number, dim: number) => number;
}

/** A small complete survival grid with plausible monotone fractions. */
export function survivalLines(options: GridOptions = {}): string[] {
  const mode = options.mode ?? "no_turbo";
  const { m = "40", k = "3", alpha = "8", p1 = "0.9", p2 = "0.9" } = options;
  const steps = options.steps ?? 6;
  const dims = options.dims ?? Number(k);
  const fraction =
    options.fraction ?? ((step: number, dim: number) => (dim === 0 ? 1 : Math.min(1, step / (4 * dim))));
  const lines = [SURVIVAL_HEADER];
  for (let step = 0; step <= steps; step++) {
    for (let dim = 0; dim <= dims; dim++) {
      lines.push(
        `${mode},bernoulli_fluid,,${m},${k},${alpha},${p1},${p2},,,,${step},${dim},${fraction(step, dim)},`,
      );
    }
  }
  return lines;
}

export function diffLines(options: GridOptions = {}): string[] {
  const { m = "40", k = "3", alpha = "8", p1 = "0.9", p2 = "0.9" } = options;
  const steps = options.steps ?? 6;
  const dims = options.dims ?? Number(k);
  const fraction = options.fraction ?? ((step: number, dim: number) => (dim === 0 ? 0 : step / (20 * dim)));
  const lines = [DIFF_HEADER];
  for (let step = 0; step <= steps; step++) {
    for (let dim = 0; dim <= dims; dim++) {
      lines.push(`${m},${k},${alpha},${p1},${p2},${step},${dim},${fraction(step, dim)}`);
    }
  }
  return lines;
}

export interface QuorumRowOptions {
  mode?: string;
  m?: string;
  alpha?: string;
  phi?: string;
  steps?: number | null;
}

export function quorumLines(rows: QuorumRowOptions[]): string[] {
  const lines = [QUORUM_HEADER];
  for (const row of rows) {
    const mode = row.mode ?? "no_turbo";
    const reached = row.steps !== null && row.steps !== undefined;
    const steps = reached ? String(row.steps) : "";
    const seconds = reached ? String(row.steps) : "";
    lines.push(
      `${mode},bernoulli_fluid,,${row.m ?? "40"},3,${row.alpha ?? "8"},0.9,0.9,${row.phi ?? "0.8"},${reached},${steps},${seconds}`,
    );
  }
  return lines;
}
