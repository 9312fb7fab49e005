/**
 * The seven figure analogues.  Every builder consumes only exported run
 * artifacts (never recomputing any physics), checks that its inputs carry
 * the same config hash, and returns a deterministic SVG string plus a
 * one-line summary for the CLI.
 */

import { readFileSync } from "fs";
import { join } from "path";

import { binAverage, mean, quadraticFit } from "./analysis.js";
import {
  AnsatzRecord,
  numericColumn,
  readAnsatzLog,
  readTable,
  readTrials,
  requireMatchingHashes,
  TrialRecord,
} from "./data.js";
import { Chart, colorRamp, defaultFrame, padRange } from "./svg.js";

export interface FigureResult {
  svg: string;
  summary: string;
}

const ED_BLUE = "#3366cc";
const TRIAL_RED = "#cc3344";

function convergedOrThrow(trials: TrialRecord[]): TrialRecord[] {
  const conv = trials.filter((t) => t.converged);
  if (!conv.length) throw new Error("no converged trials");
  return conv;
}

function readRun(runDir: string) {
  const trialsPath = join(runDir, "trials.csv");
  const { configHash, trials } = readTrials(trialsPath);
  return { trialsPath, configHash, trials };
}

function readSpectrum(runDir: string): { path: string; hash: string | null; energies: number[] } {
  const path = join(runDir, "spectrum.csv");
  const table = readTable(path);
  return { path, hash: table.configHash, energies: numericColumn(table, "energy", path) };
}

/** Converged energies against trial number (or shift for fsm runs), colored
 * by ansatz length, with the exact spectrum as horizontal guides. */
export function figCoverage(runDir: string): FigureResult {
  const { trialsPath, configHash, trials } = readRun(runDir);
  const spectrum = readSpectrum(runDir);
  requireMatchingHashes([
    { path: trialsPath, hash: configHash },
    { path: spectrum.path, hash: spectrum.hash },
  ]);
  const conv = convergedOrThrow(trials);
  const isScan = conv.some((t) => Number.isFinite(t.lambda));
  const xs = conv.map((t) => (isScan ? t.lambda : t.trialId));
  const [eLo, eHi] = padRange(Math.min(...spectrum.energies), Math.max(...spectrum.energies));
  const [xLo, xHi] = padRange(Math.min(...xs), Math.max(...xs));
  const ncMax = Math.max(...conv.map((t) => t.nC), 1);
  const chart = new Chart(defaultFrame({
    xMin: xLo, xMax: xHi, yMin: eLo, yMax: eHi,
    title: "Converged energies across the spectrum",
    xLabel: isScan ? "shift λ" : "trial number",
    yLabel: "energy E",
  }));
  for (const e of spectrum.energies) chart.hline(e, "#bbbbbb", 0.5);
  conv.forEach((t, i) => chart.circle(xs[i], t.energy, 3, colorRamp(t.nC / ncMax), 0.85));
  chart.text(chart.frame.width - 180, chart.frame.height - 10,
    `color: ansatz length (max ${ncMax})`, 10, "#555");
  return {
    svg: chart.render(),
    summary: `${conv.length}/${trials.length} converged trials over ${spectrum.energies.length} levels`,
  };
}

/** Histogram of converged ansatz lengths, normalized to converged count. */
export function figHist(runDir: string): FigureResult {
  const { trials } = readRun(runDir);
  const conv = convergedOrThrow(trials);
  const ncs = conv.map((t) => t.nC);
  const lo = Math.min(...ncs);
  const hi = Math.max(...ncs);
  const binW = Math.max(1, Math.round((hi - lo) / 18));
  const counts = new Map<number, number>();
  for (const n of ncs) {
    const b = Math.floor((n - lo) / binW);
    counts.set(b, (counts.get(b) ?? 0) + 1);
  }
  const maxFrac = Math.max(...counts.values()) / conv.length;
  const avg = mean(ncs);
  const chart = new Chart(defaultFrame({
    xMin: lo - binW, xMax: hi + binW, yMin: 0, yMax: maxFrac * 1.15,
    title: "Ansatz length distribution (converged trials)",
    xLabel: "number of variational parameters", yLabel: "fraction of converged trials",
  }));
  for (const [b, c] of [...counts.entries()].sort((p, q) => p[0] - q[0])) {
    chart.bar(lo + b * binW, lo + (b + 1) * binW, c / conv.length, "#7aa6d9");
  }
  chart.vline(avg, "#2c8a2c", 1.5, "6,3");
  chart.text(chart.frame.width - 230, chart.frame.height - 10,
    `mean ${avg.toFixed(1)} over ${conv.length} trials`, 10, "#2c8a2c");
  return { svg: chart.render(), summary: `mean n_c ${avg.toFixed(2)} over ${conv.length} converged trials` };
}

function observableFigure(runDir: string, oracleDir: string, which: "m_z" | "s_a",
                          binWidth?: number): FigureResult {
  const { trialsPath, configHash, trials } = readRun(runDir);
  const obsPath = join(oracleDir, "observables.csv");
  const obs = readTable(obsPath);
  requireMatchingHashes([{ path: trialsPath, hash: configHash }]);
  const conv = convergedOrThrow(trials);
  const edE = numericColumn(obs, "energy", obsPath);
  const edV = numericColumn(obs, which, obsPath);
  const trV = conv.map((t) => (which === "m_z" ? t.mZ : t.sA));
  const trE = conv.map((t) => t.energy);
  const [xLo, xHi] = padRange(Math.min(...edE, ...trE), Math.max(...edE, ...trE));
  const [yLo, yHi] = padRange(Math.min(...edV, ...trV), Math.max(...edV, ...trV), 0.08);
  const label = which === "m_z" ? "magnetization density" : "entanglement entropy (nats)";
  const chart = new Chart(defaultFrame({
    xMin: xLo, xMax: xHi, yMin: yLo, yMax: yHi,
    title: `${label} vs energy`, xLabel: "energy E", yLabel: label,
  }));
  edE.forEach((e, i) => chart.circle(e, edV[i], 3, ED_BLUE, 0.8));
  trE.forEach((e, i) => chart.circle(e, trV[i], 2.4, TRIAL_RED, 0.8));
  let summary = `${conv.length} trials against ${edE.length} exact eigenstates`;
  if (which === "s_a") {
    const width = binWidth ?? (Math.max(...edE) - Math.min(...edE)) / 10;
    const anchor = Math.min(...edE);
    const edCurve = binAverage(edE.map((x, i) => ({ x, y: edV[i] })), width, anchor);
    const trCurve = binAverage(trE.map((x, i) => ({ x, y: trV[i] })), width, anchor);
    chart.polyline(edCurve.map((p) => [p.x, p.y]), ED_BLUE, 2);
    chart.polyline(trCurve.map((p) => [p.x, p.y]), TRIAL_RED, 2);
    summary += `, bin width ${width.toFixed(3)}`;
  }
  chart.legend([["exact diagonalization", ED_BLUE], ["adaptive trials", TRIAL_RED]]);
  return { svg: chart.render(), summary };
}

export function figMagnetization(runDir: string, oracleDir: string): FigureResult {
  return observableFigure(runDir, oracleDir, "m_z");
}

export function figEntanglement(runDir: string, oracleDir: string, binWidth?: number): FigureResult {
  return observableFigure(runDir, oracleDir, "s_a", binWidth);
}

/** Overlap onto the best degenerate subspace against energy, one series per
 * grouping window. */
export function figOverlap(runDir: string): FigureResult {
  const { trialsPath, configHash, trials } = readRun(runDir);
  const ovlPath = join(runDir, "overlaps.csv");
  const ovl = readTable(ovlPath);
  requireMatchingHashes([
    { path: trialsPath, hash: configHash },
    { path: ovlPath, hash: ovl.configHash },
  ]);
  const conv = new Map(convergedOrThrow(trials).map((t) => [t.trialId, t]));
  const ids = numericColumn(ovl, "trial_id", ovlPath);
  const deltas = numericColumn(ovl, "delta", ovlPath);
  const best = numericColumn(ovl, "best_overlap", ovlPath);
  const windows = [...new Set(deltas)].sort((a, b) => a - b);
  const energies = [...conv.values()].map((t) => t.energy);
  const [xLo, xHi] = padRange(Math.min(...energies), Math.max(...energies));
  const chart = new Chart(defaultFrame({
    xMin: xLo, xMax: xHi, yMin: 0, yMax: 1.05,
    title: "Overlap onto degenerate subspaces",
    xLabel: "energy E", yLabel: "overlap",
  }));
  const palette = ["#cc3344", "#3366cc", "#2c8a2c", "#aa7700"];
  let plotted = 0;
  windows.forEach((w, wi) => {
    const color = palette[wi % palette.length];
    ids.forEach((id, i) => {
      const t = conv.get(id);
      if (!t || deltas[i] !== w) return;
      chart.circle(t.energy, best[i], 2.6, color, 0.8);
      plotted += 1;
    });
  });
  chart.legend(windows.map((w, wi) => [`window Δ = ${w}`, palette[wi % palette.length]]));
  return { svg: chart.render(), summary: `${plotted} points across ${windows.length} windows` };
}

/** Mean ansatz length (log scale) and mean CNOT counts against system size. */
export function figScaling(scalingCsv: string): FigureResult {
  const table = readTable(scalingCsv);
  const n = numericColumn(table, "n_qubits", scalingCsv);
  const hz = numericColumn(table, "h_z", scalingCsv);
  const meanNc = numericColumn(table, "mean_nc", scalingCsv);
  const stdNc = numericColumn(table, "std_nc", scalingCsv);
  const cnotCols: Array<[string, string]> = [
    ["mean_cnot_nn_obc_excited", "nn obc"],
    ["mean_cnot_nn_pbc_excited", "nn pbc"],
    ["mean_cnot_all_to_all_excited", "all-to-all"],
  ];
  if (!n.length) throw new Error("no converged trials");
  const classes = [...new Set(hz)].sort((a, b) => a - b);
  const log10 = Math.log10;
  const yVals = meanNc.map(log10);
  const [nLo, nHi] = padRange(Math.min(...n), Math.max(...n), 0.08);
  const chart = new Chart(defaultFrame({
    width: 860,
    xMin: nLo, xMax: nHi + (nHi - nLo) + 0.6,
    yMin: 0, yMax: Math.max(...yVals) * 1.2 + 0.3,
    title: "Scaling with system size: ansatz length (left), CNOT counts (right, log10)",
    xLabel: "system size N (left) / N (right)", yLabel: "log10 of mean",
  }));
  const palette = ["#cc3344", "#3366cc"];
  const legend: Array<[string, string]> = [];
  classes.forEach((cls, ci) => {
    const sel = hz.map((v, i) => [v === cls, i] as const).filter(([s]) => s).map(([, i]) => i);
    const pts = sel.map((i) => [n[i], log10(Math.max(meanNc[i], 1))] as [number, number])
      .sort((a, b) => a[0] - b[0]);
    chart.polyline(pts, palette[ci % palette.length], 1.5);
    sel.forEach((i) => {
      const y = log10(Math.max(meanNc[i], 1));
      chart.circle(n[i], y, 3, palette[ci % palette.length]);
      const hi = log10(Math.max(meanNc[i] + stdNc[i], 1));
      const lo = log10(Math.max(meanNc[i] - stdNc[i], 1));
      chart.errorBar(n[i], (hi + lo) / 2, (hi - lo) / 2, palette[ci % palette.length]);
    });
    legend.push([`mean n_c, h_z=${cls}`, palette[ci % palette.length]]);
  });
  // right panel: CNOT means, offset on the x axis
  const offset = nHi - nLo + 0.6;
  const dashes = ["", "6,3", "2,2"];
  cnotCols.forEach(([col, label], k) => {
    if (!table.columns.includes(col)) return;
    const vals = numericColumn(table, col, scalingCsv);
    classes.forEach((cls, ci) => {
      const sel = hz.map((v, i) => [v === cls && Number.isFinite(vals[i]) && vals[i] > 0, i] as const)
        .filter(([s]) => s).map(([, i]) => i);
      const pts = sel.map((i) => [n[i] + offset, log10(vals[i])] as [number, number])
        .sort((a, b) => a[0] - b[0]);
      chart.polyline(pts, palette[ci % palette.length], 1.2, dashes[k]);
      sel.forEach((i) => chart.circle(n[i] + offset, log10(vals[i]), 2.4, palette[ci % palette.length]));
    });
    legend.push([`CNOTs ${label}`, "#555555"]);
  });
  chart.legend(legend);
  return { svg: chart.render(), summary: `${n.length} scaling rows, ${classes.length} model classes` };
}

/** Per-step optimizer evaluations against the number of parameters, with a
 * quadratic fit over the steps that finished before the evaluation cap. */
export function figEvals(runDir: string): FigureResult {
  const logPath = join(runDir, "ansatz.jsonl");
  const { configHash, records } = readAnsatzLog(logPath);
  const { trialsPath, configHash: trialsHash, trials } = readRun(runDir);
  requireMatchingHashes([
    { path: logPath, hash: configHash },
    { path: trialsPath, hash: trialsHash },
  ]);
  convergedOrThrow(trials);
  const meta = JSON.parse(readFileSync(join(runDir, "meta.json"), "utf-8"));
  const cap = meta.config?.nm_evals_per_dim ?? Infinity;
  const xs: number[] = [];
  const ys: number[] = [];
  const xsFree: number[] = [];
  const ysFree: number[] = [];
  for (const rec of records as AnsatzRecord[]) {
    rec.steps.forEach((s, i) => {
      const alpha = i + 1;
      xs.push(alpha);
      ys.push(s.nmEvals);
      if (s.nmEvals < 0.97 * cap * alpha) {
        xsFree.push(alpha);
        ysFree.push(s.nmEvals);
      }
    });
  }
  if (xs.length < 3) throw new Error("not enough steps for the evaluation figure");
  const useFree = xsFree.length >= 10;
  const fit = quadraticFit(useFree ? xsFree : xs, useFree ? ysFree : ys);
  const xMax = Math.max(...xs);
  const yMax = Math.max(...ys);
  const chart = new Chart(defaultFrame({
    xMin: 0, xMax: xMax * 1.05, yMin: 0, yMax: yMax * 1.1,
    title: "Optimizer cost evaluations per adaptive step",
    xLabel: "number of variational parameters", yLabel: "evaluations to reoptimize",
  }));
  xs.forEach((x, i) => chart.circle(x, ys[i], 1.8, "#777777", 0.5));
  xsFree.forEach((x, i) => chart.circle(x, ysFree[i], 1.8, TRIAL_RED, 0.7));
  const curve: Array<[number, number]> = [];
  for (let x = 0; x <= xMax; x += xMax / 120) {
    const y = fit.a * x * x + fit.b * x + fit.c;
    if (y >= 0 && y <= yMax * 1.1) curve.push([x, y]);
  }
  chart.polyline(curve, ED_BLUE, 2);
  chart.text(chart.frame.margin.left + 10, chart.frame.margin.top + 14,
    `quadratic fit a = ${fit.a.toFixed(2)} (r2 = ${fit.r2.toFixed(2)})`, 11, ED_BLUE);
  return {
    svg: chart.render(),
    summary: `fit a = ${fit.a.toFixed(3)} over ${useFree ? xsFree.length : xs.length} ` +
      `${useFree ? "uncapped " : ""}steps`,
  };
}
