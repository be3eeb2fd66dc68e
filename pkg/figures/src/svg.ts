/** Minimal deterministic SVG assembly: no timestamps, no randomness. */

export function fmt(x: number): string {
  // Shortest stable decimal with two-decimal precision; String() on the
  // rounded value is deterministic per the ECMAScript number-to-string spec.
  return String(Math.round(x * 100) / 100);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  (value: number): number;
  readonly domain: [number, number];
  readonly range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const scale = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as Scale & {
    domain: [number, number];
    range: [number, number];
  };
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round-valued axis ticks covering [min, max], at most `count + 1` of them. */
export function ticks(min: number, max: number, count: number): number[] {
  if (max <= min) return [min];
  const rawStep = (max - min) / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((mult) => mult * power);
  const step = candidates.find((c) => (max - min) / c <= count) ?? candidates[3]!;
  const out: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : value}"`)
    .join(" ");
  return body === "" ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export function text(
  x: number,
  y: number,
  body: string,
  anchor: "start" | "middle" | "end" = "start",
  size = 11,
  extra: Record<string, string | number> = {},
): string {
  return tag(
    "text",
    { x, y, "font-size": size, "font-family": "sans-serif", "text-anchor": anchor, ...extra },
    esc(body),
  );
}

export function document(width: number, height: number, body: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`;
  return [head, tag("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }), ...body, "</svg>", ""].join("\n");
}

/** Left + bottom axes with ticks; returns SVG fragments. */
export function axes(
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  xTicks: number[],
  yTicks: number[],
): string[] {
  const [x0, x1] = x.range;
  const [yBottom, yTop] = y.range;
  const out: string[] = [];
  out.push(tag("line", { x1: x0, y1: yBottom, x2: x1, y2: yBottom, stroke: "#000000" }));
  out.push(tag("line", { x1: x0, y1: yBottom, x2: x0, y2: yTop, stroke: "#000000" }));
  for (const t of xTicks) {
    const px = x(t);
    out.push(tag("line", { x1: px, y1: yBottom, x2: px, y2: yBottom + 4, stroke: "#000000" }));
    out.push(text(px, yBottom + 16, String(t), "middle", 10));
  }
  for (const t of yTicks) {
    const py = y(t);
    out.push(tag("line", { x1: x0 - 4, y1: py, x2: x0, y2: py, stroke: "#000000" }));
    out.push(text(x0 - 7, py + 3, String(t), "end", 10));
  }
  out.push(text((x0 + x1) / 2, yBottom + 32, xLabel, "middle"));
  const labelY = (yBottom + yTop) / 2;
  out.push(
    text(x0 - 34, labelY, yLabel, "middle", 11, {
      transform: `rotate(-90 ${fmt(x0 - 34)} ${fmt(labelY)})`,
    }),
  );
  return out;
}
