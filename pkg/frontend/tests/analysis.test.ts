import { describe, expect, it } from "vitest";

import { binAverage, mean, quadraticFit } from "../src/analysis.js";

describe("binAverage", () => {
  it("keeps a single point as its own bin", () => {
    expect(binAverage([{ x: 0.5, y: 2 }], 1)).toEqual([{ x: 0.5, y: 2 }]);
  });

  it("averages members of one bin", () => {
    const out = binAverage([{ x: 0.0, y: 0 }, { x: 0.1, y: 1 }], 1);
    expect(out).toHaveLength(1);
    expect(out[0].x).toBeCloseTo(0.05, 12);
    expect(out[0].y).toBeCloseTo(0.5, 12);
  });

  it("omits empty bins and sorts by bin index", () => {
    const out = binAverage([{ x: 5, y: 1 }, { x: 0, y: 0 }], 1);
    expect(out.map((p) => p.x)).toEqual([0, 5]);
  });

  it("respects a shared anchor", () => {
    const out = binAverage([{ x: 1.4, y: 1 }], 1, 0);
    expect(out[0].x).toBeCloseTo(1.4);
  });

  it("rejects empty input and bad widths", () => {
    expect(() => binAverage([], 1)).toThrow();
    expect(() => binAverage([{ x: 0, y: 0 }], 0)).toThrow();
  });
});

describe("quadraticFit", () => {
  it("recovers exact quadratic coefficients", () => {
    const xs = [0, 1, 2, 3, 4, 5];
    const ys = xs.map((x) => 3.5 * x * x - 2 * x + 7);
    const fit = quadraticFit(xs, ys);
    expect(fit.a).toBeCloseTo(3.5, 8);
    expect(fit.b).toBeCloseTo(-2, 8);
    expect(fit.c).toBeCloseTo(7, 8);
    expect(fit.r2).toBeCloseTo(1, 10);
  });

  it("fits noisy data with a positive leading coefficient", () => {
    const xs = Array.from({ length: 40 }, (_, i) => i + 1);
    const ys = xs.map((x, i) => 14.8 * x * x + ((i * 37) % 11) - 5);
    const fit = quadraticFit(xs, ys);
    expect(fit.a).toBeGreaterThan(10);
    expect(fit.r2).toBeGreaterThan(0.99);
  });

  it("needs at least three points", () => {
    expect(() => quadraticFit([1, 2], [1, 2])).toThrow();
  });
});

describe("mean", () => {
  it("averages", () => {
    expect(mean([1, 2, 3])).toBeCloseTo(2);
    expect(Number.isNaN(mean([]))).toBe(true);
  });
});
