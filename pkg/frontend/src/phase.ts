import { statSync } from "node:fs";
import { join } from "node:path";

import { num, readCsv, requireColumns, type Row } from "./csv.js";
import { linearScale, SvgScene } from "./svg.js";

const BASE_COLUMNS = ["alpha", "theta", "n_cross", "krylov_phase"];
const OVERLAY_COLORS = ["#d1495b", "#21a179", "#edae49", "#5c4d7d", "#2374ab"];

export interface PhaseGrid {
  alphas: number[]; // sorted ascending, one per grid row
  thetas: number[]; // sorted ascending, one per grid column
  krylov: string[][]; // [alphaIdx][thetaIdx] -> "edge" | "bulk" | "error"
  gapColumns: string[]; // gap_phase_* columns present in the file
  gap: Map<string, string[][]>;
}

export function loadPhaseGrid(input: string): PhaseGrid {
  const path = statSync(input).isDirectory() ? join(input, "phase_diagram.csv") : input;
  const rows = readCsv(path);
  requireColumns(rows, BASE_COLUMNS, path);

  const alphas = [...new Set(rows.map((r) => num(r, "alpha")))].sort((a, b) => a - b);
  const thetas = [...new Set(rows.map((r) => num(r, "theta")))].sort((a, b) => a - b);
  const alphaIndex = new Map(alphas.map((v, i) => [v, i]));
  const thetaIndex = new Map(thetas.map((v, i) => [v, i]));
  const gapColumns = Object.keys(rows[0]).filter((c) => c.startsWith("gap_phase_"));

  const blank = () => alphas.map(() => new Array<string>(thetas.length).fill(""));
  const krylov = blank();
  const gap = new Map(gapColumns.map((c) => [c, blank()]));
  for (const row of rows) {
    const i = alphaIndex.get(num(row, "alpha"))!;
    const j = thetaIndex.get(num(row, "theta"))!;
    krylov[i][j] = row.krylov_phase;
    for (const column of gapColumns) gap.get(column)![i][j] = row[column];
  }
  return { alphas, thetas, krylov, gapColumns, gap };
}

/** Marching squares on a binary cell-centered field; returns segments in
 * (column, row) index coordinates, with cell centers at integer positions. */
export function boundarySegments(field: number[][]): Array<[number, number, number, number]> {
  const segments: Array<[number, number, number, number]> = [];
  const nRows = field.length;
  const nCols = field[0]?.length ?? 0;
  type Point = [number, number];
  for (let i = 0; i + 1 < nRows; i++) {
    for (let j = 0; j + 1 < nCols; j++) {
      const a = field[i][j];
      const b = field[i][j + 1];
      const c = field[i + 1][j + 1];
      const d = field[i + 1][j];
      const caseIndex = a * 8 + b * 4 + c * 2 + d * 1;
      // edge midpoints of the square spanned by the four cell centers
      const top: Point = [j + 0.5, i];
      const right: Point = [j + 1, i + 0.5];
      const bottom: Point = [j + 0.5, i + 1];
      const left: Point = [j, i + 0.5];
      const table: Record<number, Array<[Point, Point]>> = {
        1: [[left, bottom]],
        2: [[bottom, right]],
        3: [[left, right]],
        4: [[top, right]],
        5: [[left, top], [bottom, right]],
        6: [[top, bottom]],
        7: [[left, top]],
        8: [[left, top]],
        9: [[top, bottom]],
        10: [[top, right], [left, bottom]],
        11: [[top, right]],
        12: [[left, right]],
        13: [[bottom, right]],
        14: [[left, bottom]],
      };
      for (const [[x1, y1], [x2, y2]] of table[caseIndex] ?? []) {
        segments.push([x1, y1, x2, y2]);
      }
    }
  }
  return segments;
}

export interface PhaseRenderOptions {
  overlays?: string[]; // gap_phase_* columns to draw; defaults to all present
  warn?: (message: string) => void;
}

/** Heatmap of the Krylov classification (black: crossings present) with
 * gap-boundary overlays, one per edge-weight threshold column. */
export function renderPhase(grid: PhaseGrid, options: PhaseRenderOptions = {}): string {
  const warn = options.warn ?? ((message) => console.error(message));
  const requested = options.overlays ?? grid.gapColumns;
  const overlays: string[] = [];
  for (const column of requested) {
    if (grid.gapColumns.includes(column)) overlays.push(column);
    else warn(`warning: column ${column} not present; overlay skipped`);
  }

  const width = 640;
  const height = 520;
  const box = { x0: 70, y0: 30, x1: width - 150, y1: height - 50 };
  const scene = new SvgScene(width, height);
  const nRows = grid.alphas.length;
  const nCols = grid.thetas.length;

  // cell-index scales; cell k spans [k, k+1) so centers sit at k + 0.5
  const xScale = linearScale([0, nCols], [box.x0, box.x1]);
  const yScale = linearScale([0, nRows], [box.y1, box.y0]);
  const cellW = (box.x1 - box.x0) / nCols;
  const cellH = (box.y1 - box.y0) / nRows;

  for (let i = 0; i < nRows; i++) {
    for (let j = 0; j < nCols; j++) {
      const phase = grid.krylov[i][j];
      const fill = phase === "edge" ? "#000000" : phase === "bulk" ? "#ffffff" : "#999999";
      scene.rect(xScale(j), yScale(i + 1), cellW, cellH, fill, {
        "data-alpha-index": String(i),
        "data-theta-index": String(j),
        "data-phase": phase,
      });
    }
  }

  overlays.forEach((column, index) => {
    const color = OVERLAY_COLORS[index % OVERLAY_COLORS.length];
    const field = grid.gap.get(column)!.map((row) => row.map((v) => (v === "edge" ? 1 : 0)));
    for (const [x1, y1, x2, y2] of boundarySegments(field)) {
      // segment coordinates are cell-center based: center j maps to j + 0.5
      scene.line(
        xScale(x1 + 0.5),
        yScale(y1 + 0.5),
        xScale(x2 + 0.5),
        yScale(y2 + 0.5),
        color,
        1.8,
      );
    }
    scene.rect(box.x1 + 12, box.y0 + 18 * index, 12, 4, color);
    scene.text(box.x1 + 28, box.y0 + 18 * index + 6, column.replace("gap_phase_", "gap boundary "), 10);
  });
  scene.rect(box.x1 + 12, box.y0 + 18 * overlays.length + 2, 12, 12, "#000000");
  scene.text(box.x1 + 28, box.y0 + 18 * overlays.length + 12, "crossings present", 10);

  // axes in physical units
  const thetaOverPi = grid.thetas.map((t) => t / Math.PI);
  const xPhys = linearScale([thetaOverPi[0], thetaOverPi[nCols - 1] || 1], [
    xScale(0.5),
    xScale(nCols - 0.5),
  ]);
  const yPhys = linearScale([grid.alphas[0], grid.alphas[nRows - 1] || 1], [
    yScale(0.5),
    yScale(nRows - 0.5),
  ]);
  scene.axes(xPhys, yPhys, box, "theta / pi", "alpha");
  return scene.render();
}
