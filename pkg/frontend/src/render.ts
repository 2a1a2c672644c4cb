/** Ties a figure family to its two artifacts: the SVG and the data table. */

import { RunRow } from "./csv.js";
import { FAMILIES, FigureSpec, TablePoint, buildTable, tableCsv } from "./figures.js";
import { Panel, Series, renderFigure } from "./svg.js";

export interface FamilyOutput {
  svg: string;
  table: string;
}

function panelsFor(spec: FigureSpec, points: TablePoint[]): Panel[] {
  const panels: Panel[] = [];
  for (const metric of spec.metrics) {
    const bySeries = new Map<string, Series>();
    for (const p of points) {
      if (p.metric !== metric.name) {
        continue;
      }
      const name = `${p.scenario}/${p.routing}`;
      let series = bySeries.get(name);
      if (series === undefined) {
        series = { name, points: [] };
        bySeries.set(name, series);
      }
      series.points.push({ x: p.x, mean: p.mean, ci95: p.ci95 });
    }
    // buildTable sorts by x within a group already; map preserves insertion
    panels.push({ yLabel: metric.axisLabel, series: [...bySeries.values()] });
  }
  return panels;
}

export function renderFamily(rows: RunRow[], family: string): FamilyOutput {
  const spec = FAMILIES[family];
  if (spec === undefined) {
    const known = Object.keys(FAMILIES).sort().join(", ");
    throw new Error(`unknown figure family '${family}'; known: ${known}`);
  }
  if (rows.length === 0) {
    throw new Error("CSV has a header but no data rows");
  }
  const points = buildTable(rows, spec);
  return {
    svg: renderFigure(spec.title, spec.xLabel, panelsFor(spec, points)),
    table: tableCsv(family, points),
  };
}
