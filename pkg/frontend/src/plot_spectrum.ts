import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { parseFlags, runMain } from "./args.js";
import { loadSpectrumPanel, renderSpectrum } from "./spectrum.js";

const USAGE =
  "usage: plot-spectrum --input <scan-dir-or-csv> [--input ...] --out <dir>";

runMain(() => {
  const flags = parseFlags(process.argv.slice(2), USAGE);
  const panels = flags.inputs.map(loadSpectrumPanel);
  const outPath = join(flags.out, "spectrum.svg");
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, renderSpectrum(panels));
  console.log(`wrote ${outPath} (${panels.length} panel${panels.length > 1 ? "s" : ""})`);
});
