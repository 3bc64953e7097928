import { existsSync, readFileSync, statSync } from "node:fs";
import { join } from "node:path";

import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { extent, linearScale, SvgScene } from "./svg.js";

export interface SpectrumPanel {
  label: string;
  rows: Row[];
}

const COLUMNS = ["theta_over_pi", "mode_index", "energy", "energy_normalized", "edge_weight"];

/** Accept either a spectrum.csv path or a scan directory containing one;
 * the panel label comes from the run manifest when present. */
export function loadSpectrumPanel(input: string): SpectrumPanel {
  let csvPath = input;
  let label = input;
  if (statSync(input).isDirectory()) {
    csvPath = join(input, "spectrum.csv");
    const manifestPath = join(input, "manifest.json");
    if (existsSync(manifestPath)) {
      const manifest = JSON.parse(readFileSync(manifestPath, "utf-8"));
      const alpha = manifest?.config?.alpha;
      if (alpha !== undefined) label = `alpha = ${alpha}`;
    }
  }
  const rows = readCsv(csvPath);
  requireColumns(rows, COLUMNS, csvPath);
  return { label, rows };
}

/** One scatter panel per input scan: normalized energy versus theta/pi. */
export function renderSpectrum(panels: SpectrumPanel[]): string {
  const panelWidth = 320;
  const panelHeight = 300;
  const margin = { left: 56, right: 14, top: 28, bottom: 40 };
  const scene = new SvgScene(panelWidth * panels.length, panelHeight);

  panels.forEach((panel, index) => {
    const xOffset = index * panelWidth;
    const box = {
      x0: xOffset + margin.left,
      y0: margin.top,
      x1: xOffset + panelWidth - margin.right,
      y1: panelHeight - margin.bottom,
    };
    const energies = panel.rows.map((r) => num(r, "energy_normalized"));
    const xScale = linearScale([0, 1], [box.x0, box.x1]);
    const yScale = linearScale(extent(energies), [box.y1, box.y0]);
    scene.axes(xScale, yScale, box, "theta / pi", index === 0 ? "E / sqrt(Tr H^2)" : "");
    scene.text(xOffset + margin.left, margin.top - 10, panel.label, 12);
    for (const row of panel.rows) {
      scene.circle(xScale(num(row, "theta_over_pi")), yScale(num(row, "energy_normalized")), 0.8, "#1f3b73");
    }
  });
  return scene.render();
}
