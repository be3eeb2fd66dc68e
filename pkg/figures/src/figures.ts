/**
 * The three figure kinds. Every renderer is a pure function of its input
 * files: identical CSVs produce identical SVG bytes (no timestamps, no
 * randomness, fixed color scales).
 */
import { writeFileSync } from "node:fs";

import { SERIES_COLORS, deltaColor, survivalColor } from "./color.js";
import {
  ParamBlock,
  QuorumRow,
  SurfaceTable,
  blockLabel,
  readDiff,
  readQuorum,
  readSurvival,
  sameBlock,
} from "./schema.js";
import { axes, document as svgDocument, fmt, linearScale, tag, text, ticks } from "./svg.js";

export type FigureKind = "heatmap_triptych" | "survival_overlay" | "quorum_bars";

export interface FigureSpec {
  kind: FigureKind;
  /** Input CSV paths; meaning depends on kind (see the plot functions). */
  inputs: string[];
  /** Output image path; the extension selects the format (svg supported). */
  output: string;
  xLabel?: string;
  yLabel?: string;
  /** survival_overlay: dimension to plot (defaults to k). */
  dim?: number;
  /** quorum_bars: quorum threshold to select rows by. */
  phi?: number;
}

export class FigureError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "FigureError";
  }
}

const MODE_LABELS: Record<string, string> = {
  no_turbo: "source only",
  peer_turbo: "peer assisted",
};

function modeLabel(mode: string): string {
  return MODE_LABELS[mode] ?? mode;
}

/** Merge same-colored runs along the step axis to keep files compact. */
function heatCells(
  table: SurfaceTable,
  color: (value: number) => string,
  left: number,
  top: number,
  width: number,
  height: number,
): string[] {
  const cols = table.steps + 1;
  const rows = table.dims + 1;
  const cellW = width / cols;
  const cellH = height / rows;
  const out: string[] = [];
  for (let dim = 0; dim <= table.dims; dim++) {
    const y = top + (table.dims - dim) * cellH;
    let runStart = 0;
    let runColor = color(table.values[dim]![0]!);
    for (let step = 1; step <= cols; step++) {
      const cellColor = step < cols ? color(table.values[dim]![step]!) : "";
      if (cellColor !== runColor) {
        out.push(
          tag("rect", {
            x: left + runStart * cellW,
            y,
            width: (step - runStart) * cellW,
            height: cellH,
            fill: runColor,
          }),
        );
        runStart = step;
        runColor = cellColor;
      }
    }
  }
  return out;
}

function colorBar(
  color: (value: number) => string,
  domain: [number, number],
  left: number,
  top: number,
  width: number,
): string[] {
  const stops = 48;
  const out: string[] = [];
  for (let i = 0; i < stops; i++) {
    const value = domain[0] + ((i + 0.5) / stops) * (domain[1] - domain[0]);
    out.push(
      tag("rect", {
        x: left + (i * width) / stops,
        y: top,
        width: width / stops + 0.5,
        height: 8,
        fill: color(value),
      }),
    );
  }
  out.push(tag("rect", { x: left, y: top, width, height: 8, fill: "none", stroke: "#000000" }));
  out.push(text(left, top + 19, String(domain[0]), "middle", 9));
  out.push(text(left + width, top + 19, String(domain[1]), "middle", 9));
  return out;
}

/**
 * Aligned panels: source-only survival, peer-assisted survival, and their
 * difference. The first two share a fixed [0, 1] viridis scale; the third
 * uses a diverging scale symmetric about 0.
 */
export function plotHeatmapTriptych(
  noTurboCsv: string,
  peerTurboCsv: string,
  diffCsv: string,
  output: string,
  labels: { xLabel?: string; yLabel?: string } = {},
): string {
  const noTurbo = readSurvival(noTurboCsv);
  const peerTurbo = readSurvival(peerTurboCsv);
  const diff = readDiff(diffCsv);
  if (noTurbo.mode !== "no_turbo") {
    throw new FigureError(`${noTurboCsv}: expected mode no_turbo, found "${noTurbo.mode}"`);
  }
  if (peerTurbo.mode !== "peer_turbo") {
    throw new FigureError(`${peerTurboCsv}: expected mode peer_turbo, found "${peerTurbo.mode}"`);
  }
  for (const table of [peerTurbo, diff]) {
    if (!sameBlock(noTurbo.params, table.params)) {
      throw new FigureError(
        `${table.file}: parameter block (${blockLabel(table.params)}) does not match ` +
          `${noTurbo.file} (${blockLabel(noTurbo.params)})`,
      );
    }
    if (table.steps !== noTurbo.steps || table.dims !== noTurbo.dims) {
      throw new FigureError(
        `${table.file}: grid ${table.steps}x${table.dims} does not match ` +
          `${noTurbo.file} (${noTurbo.steps}x${noTurbo.dims})`,
      );
    }
  }

  const panelW = 300;
  const panelH = 190;
  const marginLeft = 62;
  const gap = 34;
  const top = 48;
  const width = marginLeft + 3 * panelW + 2 * gap + 20;
  const height = top + panelH + 92;
  const body: string[] = [];
  const panels: { table: SurfaceTable; title: string; color: (v: number) => string }[] = [
    { table: noTurbo, title: modeLabel("no_turbo"), color: survivalColor },
    { table: peerTurbo, title: modeLabel("peer_turbo"), color: survivalColor },
    { table: diff, title: "difference", color: deltaColor },
  ];
  body.push(text(marginLeft, 18, `survival by dimension — ${blockLabel(noTurbo.params)}`, "start", 13));
  const xTickValues = ticks(0, noTurbo.steps, 5);
  const yTickValues = ticks(0, noTurbo.dims, 4);
  for (const [index, panel] of panels.entries()) {
    const left = marginLeft + index * (panelW + gap);
    body.push(text(left + panelW / 2, top - 8, panel.title, "middle", 12));
    body.push(...heatCells(panel.table, panel.color, left, top, panelW, panelH));
    body.push(
      tag("rect", { x: left, y: top, width: panelW, height: panelH, fill: "none", stroke: "#000000" }),
    );
    const x = linearScale([0, panel.table.steps + 1], [left, left + panelW]);
    const y = linearScale([0, panel.table.dims + 1], [top + panelH, top]);
    body.push(
      ...axes(
        x,
        y,
        labels.xLabel ?? "step",
        index === 0 ? labels.yLabel ?? "dimension" : "",
        xTickValues,
        yTickValues,
      ),
    );
  }
  body.push(...colorBar(survivalColor, [0, 1], marginLeft, top + panelH + 52, 2 * panelW + gap));
  body.push(
    ...colorBar(deltaColor, [-1, 1], marginLeft + 2 * (panelW + gap), top + panelH + 52, panelW),
  );
  const svg = svgDocument(width, height, body);
  writeFigure(output, svg);
  return svg;
}

/** F_dim(s) curves from one or more survival CSVs, overlaid. */
export function plotSurvivalOverlay(
  csvPaths: string[],
  output: string,
  options: { dim?: number; xLabel?: string; yLabel?: string } = {},
): string {
  if (csvPaths.length === 0) {
    throw new FigureError("survival overlay needs at least one input CSV");
  }
  const tables = csvPaths.map(readSurvival);
  const dim = options.dim ?? tables[0]!.dims;
  for (const table of tables) {
    if (dim < 0 || dim > table.dims) {
      throw new FigureError(`${table.file}: has no dimension ${dim} (grid goes to ${table.dims})`);
    }
  }
  const maxStep = Math.max(...tables.map((t) => t.steps));

  const left = 62;
  const top = 30;
  const plotW = 560;
  const plotH = 300;
  const width = left + plotW + 24;
  const height = top + plotH + 56;
  const x = linearScale([0, maxStep], [left, left + plotW]);
  const y = linearScale([0, 1], [top + plotH, top]);
  const body: string[] = [];
  body.push(
    ...axes(
      x,
      y,
      options.xLabel ?? "step",
      options.yLabel ?? `fraction at dimension ≥ ${dim}`,
      ticks(0, maxStep, 6),
      [0, 0.2, 0.4, 0.6, 0.8, 1],
    ),
  );
  for (const [index, table] of tables.entries()) {
    const color = SERIES_COLORS[index % SERIES_COLORS.length]!;
    const points = table.values[dim]!
      .map((value, step) => `${fmt(x(step))},${fmt(y(value))}`)
      .join(" ");
    body.push(tag("polyline", { points, fill: "none", stroke: color, "stroke-width": 1.5 }));
    const legendY = top + 8 + index * 16;
    body.push(
      tag("line", {
        x1: left + 10,
        y1: legendY,
        x2: left + 34,
        y2: legendY,
        stroke: color,
        "stroke-width": 1.5,
      }),
    );
    body.push(
      text(left + 40, legendY + 4, `${modeLabel(table.mode)}  ${blockLabel(table.params)}`, "start", 10),
    );
  }
  const svg = svgDocument(width, height, body);
  writeFigure(output, svg);
  return svg;
}

/** Keep only the parameters that differ between grid points. */
function varyingLabel(block: ParamBlock, blocks: ParamBlock[]): string {
  const fields: (keyof ParamBlock)[] = ["m", "k", "alpha", "p1", "p2"];
  const varying = fields.filter((f) => new Set(blocks.map((b) => b[f])).size > 1);
  const chosen = varying.length > 0 ? varying : ["m" as const];
  return chosen.map((f) => `${f}=${block[f]}`).join(" ");
}

/**
 * Grouped bars of quorum steps per grid point, regimes side by side.
 * Unreached rows render as an annotated overflow marker, never as a
 * zero-height bar.
 */
export function plotQuorumBars(
  quorumCsv: string,
  phi: number,
  output: string,
  labels: { xLabel?: string; yLabel?: string } = {},
): string {
  const table = readQuorum(quorumCsv);
  const rows = table.rows.filter((row) => Math.abs(row.phi - phi) <= 1e-12);
  if (rows.length === 0) {
    throw new FigureError(`${quorumCsv}: no rows with phi=${phi}`);
  }
  const groups: { label: string; rows: QuorumRow[] }[] = [];
  const groupIndex = new Map<string, number>();
  for (const row of rows) {
    const key = blockLabel(row.params);
    let at = groupIndex.get(key);
    if (at === undefined) {
      at = groups.length;
      groupIndex.set(key, at);
      groups.push({ label: key, rows: [] });
    }
    groups[at]!.rows.push(row);
  }
  const modeOrder = (mode: string) => (mode === "no_turbo" ? 0 : mode === "peer_turbo" ? 1 : 2);
  for (const group of groups) {
    group.rows.sort((a, b) => modeOrder(a.mode) - modeOrder(b.mode));
  }
  const blocks = rows.map((r) => r.params);
  const maxSteps = Math.max(1, ...rows.filter((r) => r.reached).map((r) => r.steps!));

  const left = 62;
  const top = 34;
  const plotW = Math.max(360, groups.length * 130);
  const plotH = 280;
  const width = left + plotW + 24;
  const height = top + plotH + 64;
  const y = linearScale([0, maxSteps * 1.12], [top + plotH, top]);
  const barColors: Record<string, string> = { no_turbo: "#4477aa", peer_turbo: "#ee6677" };
  const body: string[] = [];
  const yTicks = ticks(0, maxSteps, 5);
  body.push(
    ...axes(
      linearScale([0, 1], [left, left + plotW]),
      y,
      labels.xLabel ?? "",
      labels.yLabel ?? `steps to ${fmt(phi)} quorum`,
      [],
      yTicks,
    ),
  );
  const groupW = plotW / groups.length;
  for (const [gi, group] of groups.entries()) {
    const slotW = groupW / (group.rows.length + 1);
    for (const [ri, row] of group.rows.entries()) {
      const barX = left + gi * groupW + (ri + 0.5) * slotW;
      const color = barColors[row.mode] ?? "#999999";
      if (row.reached) {
        const barTop = y(row.steps!);
        body.push(
          tag("rect", {
            x: barX,
            y: barTop,
            width: slotW,
            height: y(0) - barTop,
            fill: color,
          }),
        );
        body.push(text(barX + slotW / 2, barTop - 4, String(row.steps), "middle", 10));
      } else {
        // Overflow marker: dashed stem + arrowhead pointing off the scale.
        const cx = barX + slotW / 2;
        body.push(
          tag("line", {
            x1: cx,
            y1: y(0),
            x2: cx,
            y2: top + 14,
            stroke: color,
            "stroke-width": 1.5,
            "stroke-dasharray": "4 3",
          }),
        );
        body.push(
          tag("path", {
            d: `M ${fmt(cx - 6)} ${fmt(top + 14)} L ${fmt(cx + 6)} ${fmt(top + 14)} L ${fmt(cx)} ${fmt(top + 2)} Z`,
            fill: color,
          }),
        );
        body.push(text(cx + 4, top + 26, "unreached", "start", 9, { fill: "#333333" }));
      }
    }
    body.push(
      text(left + gi * groupW + groupW / 2, top + plotH + 18, varyingLabel(group.rows[0]!.params, blocks), "middle", 10),
    );
  }
  const seen = [...new Set(rows.map((r) => r.mode))];
  for (const [index, mode] of seen.entries()) {
    const legendX = left + plotW - 150;
    const legendY = top + 6 + index * 16;
    body.push(
      tag("rect", { x: legendX, y: legendY - 8, width: 10, height: 10, fill: barColors[mode] ?? "#999999" }),
    );
    body.push(text(legendX + 16, legendY, modeLabel(mode), "start", 10));
  }
  const svg = svgDocument(width, height, body);
  writeFigure(output, svg);
  return svg;
}

function writeFigure(output: string, svg: string): void {
  if (!output.toLowerCase().endsWith(".svg")) {
    throw new FigureError(`output format is chosen by file extension and this build emits svg only (got ${output})`);
  }
  writeFileSync(output, svg);
}

/** Dispatch a parsed FigureSpec to its renderer. */
export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "heatmap_triptych": {
      if (spec.inputs.length !== 3) {
        throw new FigureError("heatmap_triptych needs exactly three inputs: no_turbo, peer_turbo, diff");
      }
      return plotHeatmapTriptych(spec.inputs[0]!, spec.inputs[1]!, spec.inputs[2]!, spec.output, spec);
    }
    case "survival_overlay":
      return plotSurvivalOverlay(spec.inputs, spec.output, spec);
    case "quorum_bars": {
      if (spec.inputs.length !== 1) {
        throw new FigureError("quorum_bars takes exactly one quorum CSV");
      }
      if (spec.phi === undefined) {
        throw new FigureError("quorum_bars needs --phi");
      }
      return plotQuorumBars(spec.inputs[0]!, spec.phi, spec.output, spec);
    }
  }
}
