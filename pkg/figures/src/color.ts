/** Fixed color scales so figures from different runs are comparable. */

// Viridis anchors (evenly spaced samples of the standard colormap).
const VIRIDIS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

// Diverging blue-white-red for difference panels, symmetric about zero.
const DIVERGING: [number, number, number][] = [
  [33, 102, 172],
  [103, 169, 207],
  [209, 229, 240],
  [247, 247, 247],
  [253, 219, 199],
  [239, 138, 98],
  [178, 24, 43],
];

function hex(channel: number): string {
  return Math.round(channel).toString(16).padStart(2, "0");
}

function interpolate(anchors: [number, number, number][], t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (anchors.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.min(lo + 1, anchors.length - 1);
  const frac = pos - lo;
  const a = anchors[lo]!;
  const b = anchors[hi]!;
  const mix = (i: 0 | 1 | 2) => a[i] + (b[i] - a[i]) * frac;
  return `#${hex(mix(0))}${hex(mix(1))}${hex(mix(2))}`;
}

/** Survival fraction in [0, 1] -> viridis hex color. */
export function survivalColor(fraction: number): string {
  return interpolate(VIRIDIS, fraction);
}

/** Delta in [-1, 1] -> diverging hex color with 0 at the midpoint. */
export function deltaColor(delta: number): string {
  return interpolate(DIVERGING, (delta + 1) / 2);
}

/** Categorical palette for overlay curves. */
export const SERIES_COLORS = [
  "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377", "#bbbbbb", "#222222",
];
