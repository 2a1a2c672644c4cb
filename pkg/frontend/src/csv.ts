/**
 * Metrics-CSV parsing.
 *
 * One row per simulation run, fixed column order (written by `antmesh run`).
 * Swept parameters are additionally encoded in the scenario label as
 * `name@key=value` tags in sorted key order; figure families that sweep a
 * quantity select their rows by that tag.
 */

export const CSV_COLUMNS = [
  "scenario", "routing", "seed", "p0", "ant_rate", "flows",
  "node_speed", "mobile_fraction", "throughput_bps", "mean_delay_us",
  "pdf", "nrl", "loss_queue", "loss_mac", "loss_ttl", "loss_noroute",
  "learning_time_us",
] as const;

export interface RunRow {
  scenario: string;
  routing: string;
  seed: number;
  p0: number;
  antRate: number;
  flows: number;
  nodeSpeed: number;
  mobileFraction: number;
  throughputBps: number;
  meanDelayUs: number;
  pdf: number;
  nrl: number;
  lossQueue: number;
  lossMac: number;
  lossTtl: number;
  lossNoroute: number;
  /** null when the run had no measurable change point or never settled */
  learningTimeUs: number | null;
}

export interface ScenarioLabel {
  base: string;
  tags: Record<string, string>;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

export function parseCsv(text: string): RunRow[] {
  const lines = text.split("\n").filter((ln) => ln.trim() !== "");
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = lines[0].split(",");
  for (const col of CSV_COLUMNS) {
    if (!header.includes(col)) {
      throw new Error(`missing column '${col}' in CSV header`);
    }
  }
  const idx = new Map(header.map((name, i) => [name, i]));
  const rows: RunRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(
        `row ${i + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const field = (name: string) => parts[idx.get(name)!];
    const num = (name: string) => {
      const v = Number(field(name));
      if (Number.isNaN(v)) {
        throw new Error(`row ${i + 1}: non-numeric '${name}': ${field(name)}`);
      }
      return v;
    };
    const learningRaw = field("learning_time_us");
    const learning = learningRaw === "" || learningRaw === "-1"
      ? null
      : num("learning_time_us");
    rows.push({
      scenario: field("scenario"),
      routing: field("routing"),
      seed: num("seed"),
      p0: num("p0"),
      antRate: num("ant_rate"),
      flows: num("flows"),
      nodeSpeed: num("node_speed"),
      mobileFraction: num("mobile_fraction"),
      throughputBps: num("throughput_bps"),
      meanDelayUs: num("mean_delay_us"),
      pdf: num("pdf"),
      nrl: num("nrl"),
      lossQueue: num("loss_queue"),
      lossMac: num("loss_mac"),
      lossTtl: num("loss_ttl"),
      lossNoroute: num("loss_noroute"),
      learningTimeUs: learning,
    });
  }
  return rows;
}

/** Splits `grid15@flow_rate=20@routing=hopant` into base name and tag map. */
export function parseScenarioLabel(label: string): ScenarioLabel {
  const parts = label.split("@");
  const tags: Record<string, string> = {};
  for (const part of parts.slice(1)) {
    const eq = part.indexOf("=");
    if (eq <= 0) {
      throw new Error(`malformed scenario tag '@${part}' in '${label}'`);
    }
    tags[part.slice(0, eq)] = part.slice(eq + 1);
  }
  return { base: parts[0], tags };
}
