/**
 * figreplot: regenerate figure analogues from vqex run artifacts.
 *
 * Usage:
 *   node dist/cli.js coverage      --run DIR --out FILE.svg
 *   node dist/cli.js hist          --run DIR --out FILE.svg
 *   node dist/cli.js magnetization --run DIR --oracle DIR --out FILE.svg
 *   node dist/cli.js entanglement  --run DIR --oracle DIR --out FILE.svg [--bin-width W]
 *   node dist/cli.js overlap       --run DIR --out FILE.svg
 *   node dist/cli.js scaling       --scaling scaling.csv --out FILE.svg
 *   node dist/cli.js evals         --run DIR --out FILE.svg
 */

import { writeFileSync } from "fs";

import {
  figCoverage,
  figEntanglement,
  figEvals,
  figHist,
  figMagnetization,
  figOverlap,
  figScaling,
  FigureResult,
} from "./figures.js";

export const FIGURE_IDS = [
  "coverage", "hist", "magnetization", "entanglement", "overlap", "scaling", "evals",
] as const;

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed flag list near "${key}"`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function need(flags: Map<string, string>, key: string): string {
  const v = flags.get(key);
  if (!v) throw new Error(`missing required flag --${key}`);
  return v;
}

export function buildFigure(figure: string, flags: Map<string, string>): FigureResult {
  switch (figure) {
    case "coverage":
      return figCoverage(need(flags, "run"));
    case "hist":
      return figHist(need(flags, "run"));
    case "magnetization":
      return figMagnetization(need(flags, "run"), need(flags, "oracle"));
    case "entanglement": {
      const w = flags.get("bin-width");
      return figEntanglement(need(flags, "run"), need(flags, "oracle"),
        w === undefined ? undefined : Number(w));
    }
    case "overlap":
      return figOverlap(need(flags, "run"));
    case "scaling":
      return figScaling(need(flags, "scaling"));
    case "evals":
      return figEvals(need(flags, "run"));
    default:
      throw new Error(`unknown figure "${figure}"; expected one of ${FIGURE_IDS.join(", ")}`);
  }
}

export function main(argv: string[]): number {
  if (!argv.length || argv[0] === "--help") {
    console.log(`figures: ${FIGURE_IDS.join(", ")}`);
    return argv.length ? 0 : 2;
  }
  const [figure, ...rest] = argv;
  try {
    const flags = parseFlags(rest);
    const out = need(flags, "out");
    const result = buildFigure(figure, flags);
    writeFileSync(out, result.svg);
    console.log(`${figure}: ${result.summary} -> ${out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const isDirectRun = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
