import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { parseFlags, runMain } from "./args.js";
import { loadLanczosRows, renderLanczos } from "./lanczos.js";

const USAGE = "usage: plot-lanczos --input <run-dir-or-csv> --out <dir>";

runMain(() => {
  const flags = parseFlags(process.argv.slice(2), USAGE);
  const { rows, path } = loadLanczosRows(flags.inputs[0]);
  const outPath = join(flags.out, "lanczos.svg");
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, renderLanczos(rows, path));
  console.log(`wrote ${outPath} (${rows.length} coefficients)`);
});
