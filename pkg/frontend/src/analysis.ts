/** Small numeric helpers shared by the figures. */

export interface BinPoint {
  x: number;
  y: number;
}

/**
 * Fixed-width bin averages anchored at `anchor` (defaults to the data
 * minimum); empty bins are omitted, each output is its bin's mean.
 */
export function binAverage(points: BinPoint[], width: number, anchor?: number): BinPoint[] {
  if (!points.length) throw new Error("binAverage needs at least one point");
  if (!(width > 0)) throw new Error("bin width must be positive");
  const base = anchor ?? Math.min(...points.map((p) => p.x));
  const bins = new Map<number, { sx: number; sy: number; n: number }>();
  for (const p of points) {
    const b = Math.floor((p.x - base) / width);
    const acc = bins.get(b) ?? { sx: 0, sy: 0, n: 0 };
    acc.sx += p.x;
    acc.sy += p.y;
    acc.n += 1;
    bins.set(b, acc);
  }
  return [...bins.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([, acc]) => ({ x: acc.sx / acc.n, y: acc.sy / acc.n }));
}

/**
 * Least-squares fit of y = a x^2 + b x + c via the normal equations.
 * Returns the coefficients and the coefficient of determination.
 */
export function quadraticFit(xs: number[], ys: number[]): { a: number; b: number; c: number; r2: number } {
  if (xs.length !== ys.length || xs.length < 3) {
    throw new Error("quadratic fit needs at least 3 points");
  }
  const n = xs.length;
  let s1 = 0, s2 = 0, s3 = 0, s4 = 0, sy = 0, sxy = 0, sx2y = 0;
  for (let i = 0; i < n; i++) {
    const x = xs[i];
    const y = ys[i];
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
    sy += y;
    sxy += x * y;
    sx2y += x * x * y;
  }
  // solve [[s4,s3,s2],[s3,s2,s1],[s2,s1,n]] [a b c]^T = [sx2y, sxy, sy]^T
  const m = [
    [s4, s3, s2, sx2y],
    [s3, s2, s1, sxy],
    [s2, s1, n, sy],
  ];
  for (let col = 0; col < 3; col++) {
    let pivot = col;
    for (let r = col + 1; r < 3; r++) {
      if (Math.abs(m[r][col]) > Math.abs(m[pivot][col])) pivot = r;
    }
    [m[col], m[pivot]] = [m[pivot], m[col]];
    if (Math.abs(m[col][col]) < 1e-12) throw new Error("degenerate quadratic fit");
    for (let r = 0; r < 3; r++) {
      if (r === col) continue;
      const f = m[r][col] / m[col][col];
      for (let c = col; c < 4; c++) m[r][c] -= f * m[col][c];
    }
  }
  const a = m[0][3] / m[0][0];
  const b = m[1][3] / m[1][1];
  const c = m[2][3] / m[2][2];
  const mean = sy / n;
  let ssRes = 0, ssTot = 0;
  for (let i = 0; i < n; i++) {
    const pred = a * xs[i] * xs[i] + b * xs[i] + c;
    ssRes += (ys[i] - pred) ** 2;
    ssTot += (ys[i] - mean) ** 2;
  }
  return { a, b, c, r2: ssTot > 0 ? 1 - ssRes / ssTot : 1 };
}

export function mean(values: number[]): number {
  if (!values.length) return NaN;
  return values.reduce((s, v) => s + v, 0) / values.length;
}
