#!/usr/bin/env node
/**
 * plotkit <family> --csv results.csv --out figs/
 *
 * Writes figs/<family>.svg and figs/<family>.table.csv. Exit codes:
 * 0 ok, 1 bad usage or bad input data, 2 unexpected failure.
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import path from "path";

import { parseCsv } from "./csv.js";
import { FAMILIES } from "./figures.js";
import { renderFamily } from "./render.js";

const USAGE =
  `usage: plotkit <family> --csv <results.csv> --out <dir>\n`
  + `families: ${Object.keys(FAMILIES).sort().join(", ")}`;

interface Args {
  family: string;
  csv: string;
  out: string;
}

function parseArgs(argv: string[]): Args {
  let family: string | undefined;
  let csv: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--csv" || arg === "--out") {
      const value = argv[++i];
      if (value === undefined) {
        throw new Error(`${arg} needs a value`);
      }
      if (arg === "--csv") {
        csv = value;
      } else {
        out = value;
      }
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown option '${arg}'`);
    } else if (family === undefined) {
      family = arg;
    } else {
      throw new Error(`unexpected argument '${arg}'`);
    }
  }
  if (family === undefined || csv === undefined || out === undefined) {
    throw new Error("family, --csv and --out are all required");
  }
  return { family, csv, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 1;
  }
  try {
    const rows = parseCsv(readFileSync(args.csv, "utf8"));
    const output = renderFamily(rows, args.family);
    mkdirSync(args.out, { recursive: true });
    const svgPath = path.join(args.out, `${args.family}.svg`);
    const tablePath = path.join(args.out, `${args.family}.table.csv`);
    writeFileSync(svgPath, output.svg);
    writeFileSync(tablePath, output.table);
    console.log(svgPath);
    console.log(tablePath);
    return 0;
  } catch (err) {
    const message = (err as Error).message;
    if (err instanceof Error && (err as NodeJS.ErrnoException).code === undefined) {
      console.error(`error: ${message}`);
      return 1;
    }
    console.error(`abort: ${message}`);
    return 2;
  }
}

if (process.argv[1] && /cli\.[jt]s$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
