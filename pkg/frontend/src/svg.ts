/** Minimal SVG scene builder: enough for scatter panels, line series, and
 * cell heatmaps, with linear axes. No DOM, just strings. */

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  return lo === hi ? [lo - 0.5, hi + 0.5] : [lo, hi];
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class SvgScene {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  rect(x: number, y: number, w: number, h: number, fill: string, attrs: Record<string, string> = {}): void {
    this.parts.push(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${h.toFixed(2)}" fill="${fill}"${this.attrText(attrs)}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="${r}" fill="${fill}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" y2="${y2.toFixed(2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1): void {
    const path = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.parts.push(`<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "start"): void {
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-size="${size}" font-family="sans-serif" text-anchor="${anchor}">${esc(content)}</text>`,
    );
  }

  /** Left + bottom axes with a handful of tick labels. */
  axes(xScale: Scale, yScale: Scale, box: { x0: number; y0: number; x1: number; y1: number }, xLabel: string, yLabel: string): void {
    const { x0, y0, x1, y1 } = box;
    this.line(x0, y1, x1, y1, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
      const xv = xScale.domain[0] + frac * (xScale.domain[1] - xScale.domain[0]);
      const yv = yScale.domain[0] + frac * (yScale.domain[1] - yScale.domain[0]);
      const xp = xScale(xv);
      const yp = yScale(yv);
      this.line(xp, y1, xp, y1 + 4, "#000");
      this.text(xp, y1 + 16, formatTick(xv), 9, "middle");
      this.line(x0 - 4, yp, x0, yp, "#000");
      this.text(x0 - 6, yp + 3, formatTick(yv), 9, "end");
    }
    this.text((x0 + x1) / 2, y1 + 30, xLabel, 11, "middle");
    this.parts.push(
      `<text x="${(x0 - 34).toFixed(2)}" y="${((y0 + y1) / 2).toFixed(2)}" font-size="11" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 ${(x0 - 34).toFixed(2)} ${((y0 + y1) / 2).toFixed(2)})">${esc(yLabel)}</text>`,
    );
  }

  private attrText(attrs: Record<string, string>): string {
    return Object.entries(attrs)
      .map(([key, value]) => ` ${key}="${esc(value)}"`)
      .join("");
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>` +
      this.parts.join("\n") +
      `</svg>`
    );
  }
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1000 || abs < 0.001) return value.toExponential(1);
  return Number(value.toPrecision(3)).toString();
}
