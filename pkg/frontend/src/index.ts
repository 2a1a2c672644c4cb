export { CSV_COLUMNS, parseCsv, parseScenarioLabel } from "./csv.js";
export type { RunRow, ScenarioLabel } from "./csv.js";
export { aggregate, mean, sampleStd, t95 } from "./stats.js";
export type { Aggregate } from "./stats.js";
export { FAMILIES, buildTable, tableCsv } from "./figures.js";
export type { FigureSpec, Metric, TablePoint } from "./figures.js";
export { renderFigure } from "./svg.js";
export type { Panel, Series, SeriesPoint } from "./svg.js";
export { renderFamily } from "./render.js";
export type { FamilyOutput } from "./render.js";
