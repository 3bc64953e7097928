import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { loadLanczosRows, renderLanczos } from "../src/lanczos.js";

const RUN_DIR = join(__dirname, "fixtures", "lanczos_edge");

function polylineYs(svg: string): number[][] {
  return [...svg.matchAll(/<polyline points="([^"]+)"/g)].map((m) =>
    m[1].split(" ").map((pair) => Number(pair.split(",")[1])),
  );
}

describe("lanczos subsequence plot", () => {
  it("renders the odd and even series from a run directory", () => {
    const { rows } = loadLanczosRows(RUN_DIR);
    const svg = renderLanczos(rows);
    expect(svg).toContain("odd steps");
    expect(svg).toContain("even steps");
    const series = polylineYs(svg);
    expect(series).toHaveLength(2);
    const points = series[0].length + series[1].length;
    expect(points).toBe(rows.length);
  });

  it("draws two overlapping flat series for constant coefficients", () => {
    const dir = mkdtempSync(join(tmpdir(), "lz-"));
    const path = join(dir, "b.csv");
    const lines = ["n,b,parity"];
    for (let n = 1; n <= 12; n++) lines.push(`${n},1.0,${n % 2 ? "odd" : "even"}`);
    writeFileSync(path, lines.join("\n") + "\n");
    const { rows } = loadLanczosRows(path);
    const svg = renderLanczos(rows);
    const ys = polylineYs(svg).flat();
    expect(new Set(ys).size).toBe(1); // every point at the same height
  });

  it("rejects rows with a malformed parity column", () => {
    const dir = mkdtempSync(join(tmpdir(), "lz-"));
    const path = join(dir, "b.csv");
    writeFileSync(path, "n,b,parity\n1,1.0,sideways\n");
    const { rows } = loadLanczosRows(path);
    expect(() => renderLanczos(rows)).toThrow(/parity/);
  });
});
