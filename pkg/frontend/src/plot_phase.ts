import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { parseFlags, runMain } from "./args.js";
import { loadPhaseGrid, renderPhase } from "./phase.js";

const USAGE =
  "usage: plot-phase --input <sweep-dir-or-csv> --out <dir> [--thresholds 0.05,0.1,0.5]";

runMain(() => {
  const flags = parseFlags(process.argv.slice(2), USAGE);
  const grid = loadPhaseGrid(flags.inputs[0]);
  let overlays: string[] | undefined;
  const thresholds = flags.extra.get("thresholds");
  if (thresholds) {
    overlays = thresholds
      .split(",")
      .filter((t) => t.trim())
      .map((t) => `gap_phase_w${String(Math.round(Number(t) * 100)).padStart(3, "0")}`);
  }
  const outPath = join(flags.out, "phase.svg");
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, renderPhase(grid, { overlays }));
  console.log(
    `wrote ${outPath} (${grid.alphas.length} x ${grid.thetas.length} cells)`,
  );
});
