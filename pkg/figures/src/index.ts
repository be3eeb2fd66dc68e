export {
  FigureError,
  plotHeatmapTriptych,
  plotQuorumBars,
  plotSurvivalOverlay,
  renderFigure,
} from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { SchemaError, blockLabel, readDiff, readQuorum, readSurvival, sameBlock } from "./schema.js";
export type { ParamBlock, QuorumRow, QuorumTable, SurfaceTable } from "./schema.js";
export { deltaColor, survivalColor } from "./color.js";
