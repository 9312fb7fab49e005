/**
 * Minimal deterministic SVG chart builder: axes, scatter, polylines,
 * horizontal guide lines, bar series and a viridis-style color scale.
 * No DOM, no randomness; the same inputs always produce the same bytes.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export interface Frame {
  width: number;
  height: number;
  margin: Margin;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  title: string;
  xLabel: string;
  yLabel: string;
}

const FMT = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = first; t <= hi + 1e-12 * span; t += step) ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  return ticks;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) return v.toExponential(0);
  return String(Math.round(v * 1000) / 1000);
}

/** Map a unit value to a small perceptual ramp (dark blue -> yellow). */
export function colorRamp(u: number): string {
  const t = Math.min(Math.max(u, 0), 1);
  const stops = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
  ];
  const x = t * (stops.length - 1);
  const i = Math.min(Math.floor(x), stops.length - 2);
  const f = x - i;
  const mix = stops[i].map((c, k) => Math.round(c + f * (stops[i + 1][k] - c)));
  return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
}

export class Chart {
  private parts: string[] = [];
  constructor(public frame: Frame) {}

  x(v: number): number {
    const { width, margin, xMin, xMax } = this.frame;
    return margin.left + ((v - xMin) / (xMax - xMin || 1)) * (width - margin.left - margin.right);
  }

  y(v: number): number {
    const { height, margin, yMin, yMax } = this.frame;
    return height - margin.bottom - ((v - yMin) / (yMax - yMin || 1)) * (height - margin.top - margin.bottom);
  }

  raw(svgFragment: string): void {
    this.parts.push(svgFragment);
  }

  circle(x: number, y: number, r: number, fill: string, opacity = 1): void {
    this.parts.push(
      `<circle cx="${FMT(this.x(x))}" cy="${FMT(this.y(y))}" r="${r}" fill="${fill}" fill-opacity="${opacity}"/>`
    );
  }

  hline(yValue: number, color: string, width = 0.6, dash = ""): void {
    const y = FMT(this.y(yValue));
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${FMT(this.x(this.frame.xMin))}" x2="${FMT(this.x(this.frame.xMax))}" ` +
      `y1="${y}" y2="${y}" stroke="${color}" stroke-width="${width}"${d}/>`
    );
  }

  vline(xValue: number, color: string, width = 0.6, dash = ""): void {
    const x = FMT(this.x(xValue));
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line y1="${FMT(this.y(this.frame.yMin))}" y2="${FMT(this.y(this.frame.yMax))}" ` +
      `x1="${x}" x2="${x}" stroke="${color}" stroke-width="${width}"${d}/>`
    );
  }

  polyline(points: Array<[number, number]>, color: string, width = 1.5, dash = ""): void {
    if (!points.length) return;
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    const pts = points.map(([x, y]) => `${FMT(this.x(x))},${FMT(this.y(y))}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"${d}/>`);
  }

  bar(x0: number, x1: number, yTop: number, fill: string): void {
    const xa = this.x(x0);
    const xb = this.x(x1);
    const yb = this.y(this.frame.yMin);
    const yt = this.y(yTop);
    this.parts.push(
      `<rect x="${FMT(xa)}" y="${FMT(yt)}" width="${FMT(xb - xa)}" height="${FMT(yb - yt)}" ` +
      `fill="${fill}" stroke="#333" stroke-width="0.5"/>`
    );
  }

  errorBar(x: number, y: number, half: number, color: string): void {
    const xs = FMT(this.x(x));
    const yLo = FMT(this.y(y - half));
    const yHi = FMT(this.y(y + half));
    this.parts.push(`<line x1="${xs}" x2="${xs}" y1="${yLo}" y2="${yHi}" stroke="${color}" stroke-width="1"/>`);
  }

  text(x: number, y: number, s: string, size = 11, color = "#222", anchor = "start"): void {
    this.parts.push(
      `<text x="${FMT(x)}" y="${FMT(y)}" font-size="${size}" fill="${color}" ` +
      `text-anchor="${anchor}" font-family="sans-serif">${escapeXml(s)}</text>`
    );
  }

  legend(entries: Array<[string, string]>): void {
    const { margin } = this.frame;
    entries.forEach(([label, color], i) => {
      const y = margin.top + 14 + 14 * i;
      const x = this.frame.width - margin.right - 150;
      this.parts.push(`<rect x="${x}" y="${y - 8}" width="9" height="9" fill="${color}"/>`);
      this.text(x + 13, y, label, 10);
    });
  }

  render(): string {
    const { width, height, margin, title, xLabel, yLabel, xMin, xMax, yMin, yMax } = this.frame;
    const axes: string[] = [];
    const x0 = margin.left;
    const x1 = width - margin.right;
    const y0 = height - margin.bottom;
    const y1 = margin.top;
    axes.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`);
    for (const t of niceTicks(xMin, xMax)) {
      const px = FMT(this.x(t));
      axes.push(`<line x1="${px}" x2="${px}" y1="${y0}" y2="${y0 + 4}" stroke="#444" stroke-width="1"/>`);
      axes.push(`<text x="${px}" y="${y0 + 16}" font-size="10" fill="#444" text-anchor="middle" font-family="sans-serif">${tickLabel(t)}</text>`);
    }
    for (const t of niceTicks(yMin, yMax)) {
      const py = FMT(this.y(t));
      axes.push(`<line x1="${x0 - 4}" x2="${x0}" y1="${py}" y2="${py}" stroke="#444" stroke-width="1"/>`);
      axes.push(`<text x="${x0 - 7}" y="${Number(py) + 3}" font-size="10" fill="#444" text-anchor="end" font-family="sans-serif">${tickLabel(t)}</text>`);
    }
    axes.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#444" stroke-width="1"/>`);
    axes.push(`<text x="${(x0 + x1) / 2}" y="${height - 6}" font-size="12" fill="#222" text-anchor="middle" font-family="sans-serif">${escapeXml(xLabel)}</text>`);
    axes.push(`<text x="14" y="${(y0 + y1) / 2}" font-size="12" fill="#222" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 14 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`);
    axes.push(`<text x="${(x0 + x1) / 2}" y="${margin.top - 8}" font-size="13" fill="#111" text-anchor="middle" font-family="sans-serif">${escapeXml(title)}</text>`);
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}">` +
      axes.join("") +
      this.parts.join("") +
      `</svg>`
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function defaultFrame(partial: Partial<Frame> & Pick<Frame, "xMin" | "xMax" | "yMin" | "yMax" | "title" | "xLabel" | "yLabel">): Frame {
  return {
    width: 760,
    height: 480,
    margin: { top: 36, right: 24, bottom: 44, left: 64 },
    ...partial,
  };
}

/** Pad a [lo, hi] range by a fraction on both sides (degenerate-safe). */
export function padRange(lo: number, hi: number, frac = 0.05): [number, number] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [0, 1];
  if (hi <= lo) return [lo - 1, lo + 1];
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}
