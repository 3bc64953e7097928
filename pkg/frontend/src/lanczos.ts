import { statSync } from "node:fs";
import { join } from "node:path";

import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { extent, linearScale, SvgScene } from "./svg.js";

const COLUMNS = ["n", "b", "parity"];
const ODD_COLOR = "#b2332b";
const EVEN_COLOR = "#1f3b73";

export function loadLanczosRows(input: string): { rows: Row[]; path: string } {
  const path = statSync(input).isDirectory() ? join(input, "lanczos_majorana.csv") : input;
  const rows = readCsv(path);
  requireColumns(rows, COLUMNS, path);
  return { rows, path };
}

/** Odd and even recursion steps as two interleaved series; their ordering
 * flips are what the staggering diagnostic counts. */
export function renderLanczos(rows: Row[], title = ""): string {
  const width = 560;
  const height = 360;
  const box = { x0: 64, y0: 30, x1: width - 16, y1: height - 44 };
  const scene = new SvgScene(width, height);

  const series: Record<string, Array<[number, number]>> = { odd: [], even: [] };
  for (const row of rows) {
    const parity = row.parity;
    if (parity !== "odd" && parity !== "even") {
      throw new Error(`unexpected parity value ${JSON.stringify(parity)}`);
    }
    series[parity].push([num(row, "n"), num(row, "b")]);
  }

  const ns = rows.map((r) => num(r, "n"));
  const bs = rows.map((r) => num(r, "b"));
  const xScale = linearScale(extent(ns), [box.x0, box.x1]);
  const yScale = linearScale(extent(bs), [box.y1, box.y0]);
  scene.axes(xScale, yScale, box, "n", "b_n");
  if (title) scene.text(box.x0, box.y0 - 10, title, 12);

  for (const [parity, color] of [["odd", ODD_COLOR], ["even", EVEN_COLOR]] as const) {
    const points = series[parity]
      .sort((a, b) => a[0] - b[0])
      .map(([n, b]) => [xScale(n), yScale(b)] as [number, number]);
    if (points.length > 1) scene.polyline(points, color, 1);
    for (const [x, y] of points) scene.circle(x, y, 1.6, color);
  }

  scene.rect(box.x1 - 120, box.y0 + 4, 10, 10, ODD_COLOR);
  scene.text(box.x1 - 106, box.y0 + 13, "odd steps", 10);
  scene.rect(box.x1 - 120, box.y0 + 20, 10, 10, EVEN_COLOR);
  scene.text(box.x1 - 106, box.y0 + 29, "even steps", 10);
  return scene.render();
}
