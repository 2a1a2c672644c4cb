/**
 * Hand-rolled SVG line plots: one figure per family, one stacked panel per
 * metric, mean markers joined by lines with 95% CI error bars.
 *
 * No plotting library: output must be a self-contained vector file whose
 * bytes depend only on the input numbers.
 */

export interface SeriesPoint {
  x: number;
  mean: number;
  ci95: number;
}

export interface Series {
  name: string;
  points: SeriesPoint[];
}

export interface Panel {
  yLabel: string;
  series: Series[];
}

const WIDTH = 680;
const PANEL_H = 300;
const MARGIN = { left: 84, right: 24, top: 30, bottom: 48 };
const LEGEND_H = 22;

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

// ---------------------------------------------------------------------------
// Scales and formatting
// ---------------------------------------------------------------------------

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - pad, hi + pad];
  }
  return [lo, hi];
}

function scale(lo: number, hi: number, outLo: number, outHi: number) {
  return (v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
}

function fmtTick(v: number): string {
  if (v === 0) {
    return "0";
  }
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.01) {
    return v.toExponential(2);
  }
  return String(Number(v.toPrecision(4)));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

function renderPanel(panel: Panel, xLabel: string, yOffset: number,
                     colorOf: Map<string, string>): string {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of panel.series) {
    for (const p of s.points) {
      xs.push(p.x);
      ys.push(p.mean - p.ci95, p.mean + p.ci95);
    }
  }
  const [xLo, xHi] = extent(xs);
  const [yLoRaw, yHi] = extent(ys);
  const yLo = Math.min(0, yLoRaw);
  const plotL = MARGIN.left;
  const plotR = WIDTH - MARGIN.right;
  const plotT = yOffset + MARGIN.top;
  const plotB = yOffset + PANEL_H - MARGIN.bottom;
  const sx = scale(xLo, xHi, plotL, plotR);
  const sy = scale(yLo, yHi, plotB, plotT);

  const parts: string[] = [];
  parts.push(
    `<rect x="${plotL}" y="${plotT}" width="${plotR - plotL}" `
    + `height="${plotB - plotT}" fill="none" stroke="#333"/>`);

  for (let i = 0; i <= 4; i++) {
    const xv = xLo + (i / 4) * (xHi - xLo);
    const yv = yLo + (i / 4) * (yHi - yLo);
    const px = sx(xv);
    const py = sy(yv);
    parts.push(
      `<line x1="${px.toFixed(1)}" y1="${plotB}" x2="${px.toFixed(1)}" `
      + `y2="${plotB + 5}" stroke="#333"/>`,
      `<text x="${px.toFixed(1)}" y="${plotB + 18}" font-size="11" `
      + `text-anchor="middle">${fmtTick(xv)}</text>`,
      `<line x1="${plotL - 5}" y1="${py.toFixed(1)}" x2="${plotL}" `
      + `y2="${py.toFixed(1)}" stroke="#333"/>`,
      `<text x="${plotL - 8}" y="${(py + 4).toFixed(1)}" font-size="11" `
      + `text-anchor="end">${fmtTick(yv)}</text>`);
  }
  parts.push(
    `<text x="${(plotL + plotR) / 2}" y="${plotB + 36}" font-size="12" `
    + `text-anchor="middle">${esc(xLabel)}</text>`,
    `<text x="18" y="${(plotT + plotB) / 2}" font-size="12" `
    + `text-anchor="middle" transform="rotate(-90 18 ${(plotT + plotB) / 2})">`
    + `${esc(panel.yLabel)}</text>`);

  for (const s of panel.series) {
    const color = colorOf.get(s.name)!;
    const pts = s.points
      .map((p) => `${sx(p.x).toFixed(1)},${sy(p.mean).toFixed(1)}`)
      .join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    for (const p of s.points) {
      const px = sx(p.x);
      const lo = sy(p.mean - p.ci95);
      const hi = sy(p.mean + p.ci95);
      if (p.ci95 > 0) {
        parts.push(
          `<line x1="${px.toFixed(1)}" y1="${lo.toFixed(1)}" `
          + `x2="${px.toFixed(1)}" y2="${hi.toFixed(1)}" stroke="${color}"/>`,
          `<line x1="${(px - 3).toFixed(1)}" y1="${lo.toFixed(1)}" `
          + `x2="${(px + 3).toFixed(1)}" y2="${lo.toFixed(1)}" stroke="${color}"/>`,
          `<line x1="${(px - 3).toFixed(1)}" y1="${hi.toFixed(1)}" `
          + `x2="${(px + 3).toFixed(1)}" y2="${hi.toFixed(1)}" stroke="${color}"/>`);
      }
      parts.push(
        `<circle cx="${px.toFixed(1)}" cy="${sy(p.mean).toFixed(1)}" `
        + `r="3" fill="${color}"/>`);
    }
  }
  return parts.join("\n");
}

export function renderFigure(title: string, xLabel: string,
                             panels: Panel[]): string {
  const names: string[] = [];
  for (const panel of panels) {
    for (const s of panel.series) {
      if (!names.includes(s.name)) {
        names.push(s.name);
      }
    }
  }
  const colorOf = new Map(
    names.map((name, i) => [name, PALETTE[i % PALETTE.length]]));

  const height = 26 + LEGEND_H + panels.length * PANEL_H;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" `
    + `height="${height}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${height}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="18" font-size="14" text-anchor="middle" `
    + `font-weight="bold">${esc(title)}</text>`);

  let lx = MARGIN.left;
  for (const name of names) {
    const color = colorOf.get(name)!;
    parts.push(
      `<line x1="${lx}" y1="${26 + LEGEND_H / 2}" x2="${lx + 18}" `
      + `y2="${26 + LEGEND_H / 2}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${lx + 22}" y="${30 + LEGEND_H / 2}" font-size="11">`
      + `${esc(name)}</text>`);
    lx += 30 + 7 * name.length;
  }

  panels.forEach((panel, i) => {
    parts.push(renderPanel(panel, xLabel, 26 + LEGEND_H + i * PANEL_H, colorOf));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
