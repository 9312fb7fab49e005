/**
 * Readers for the vqex artifact schemas.
 *
 * CSVs carry a `# config_hash=...` comment line before the header; the JSONL
 * ansatz log starts with a header record carrying the same hash.  Figures
 * that join multiple inputs must refuse mismatched hashes, so every reader
 * surfaces the hash alongside the parsed rows.
 */

import { readFileSync } from "fs";

export interface Table {
  configHash: string | null;
  columns: string[];
  rows: string[][];
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf-8");
  let configHash: string | null = null;
  let columns: string[] | null = null;
  const rows: string[][] = [];
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    if (line.startsWith("#")) {
      const m = line.match(/config_hash=(\S+)/);
      if (m) configHash = m[1];
      continue;
    }
    if (columns === null) {
      columns = line.split(",");
    } else {
      rows.push(line.split(","));
    }
  }
  if (columns === null) throw new Error(`${path}: no header row`);
  return { configHash, columns, rows };
}

/** Column accessor that names the offending column in errors. */
export function column(table: Table, name: string, path = "table"): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${path}: required column "${name}" is missing (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[idx]);
}

export function numericColumn(table: Table, name: string, path = "table"): number[] {
  return column(table, name, path).map((v) => (v === "" ? NaN : Number(v)));
}

export interface TrialRecord {
  trialId: number;
  lambda: number;
  e0: number;
  converged: boolean;
  nC: number;
  energy: number;
  mZ: number;
  sA: number;
  bestOverlap: number;
  nearestOverlap: number;
}

export function readTrials(path: string): { configHash: string | null; trials: TrialRecord[] } {
  const t = readTable(path);
  const get = (name: string) => numericColumn(t, name, path);
  const conv = column(t, "converged", path);
  const ids = get("trial_id");
  const lambda = get("lambda");
  const e0 = get("e0");
  const nC = get("n_c");
  const energy = get("energy");
  const mZ = get("m_z");
  const sA = get("s_a");
  const best = get("best_overlap");
  const nearest = get("nearest_overlap");
  const trials = ids.map((id, i) => ({
    trialId: id,
    lambda: lambda[i],
    e0: e0[i],
    converged: conv[i] === "true",
    nC: nC[i],
    energy: energy[i],
    mZ: mZ[i],
    sA: sA[i],
    bestOverlap: best[i],
    nearestOverlap: nearest[i],
  }));
  return { configHash: t.configHash, trials };
}

export interface StepRecord {
  op: number;
  theta: number;
  lsEvals: number;
  nmEvals: number;
  cumEvals: number;
}

export interface AnsatzRecord {
  trialId: number;
  converged: boolean;
  steps: StepRecord[];
}

export function readAnsatzLog(path: string): { configHash: string | null; records: AnsatzRecord[] } {
  const lines = readFileSync(path, "utf-8").split("\n").filter((l) => l.trim());
  if (!lines.length) throw new Error(`${path}: empty file`);
  const header = JSON.parse(lines[0]);
  if (header.record !== "header") throw new Error(`${path}: first record must be the header`);
  const records: AnsatzRecord[] = lines.slice(1).map((l) => {
    const rec = JSON.parse(l);
    return {
      trialId: rec.trial_id,
      converged: rec.converged,
      steps: (rec.steps ?? []).map((s: any) => ({
        op: s.op,
        theta: s.theta,
        lsEvals: s.ls_evals,
        nmEvals: s.nm_evals,
        cumEvals: s.cum_evals,
      })),
    };
  });
  return { configHash: header.config_hash ?? null, records };
}

/** All inputs of one figure must come from the same configuration. */
export function requireMatchingHashes(parts: Array<{ path: string; hash: string | null }>): void {
  const hashes = parts.filter((p) => p.hash !== null);
  for (let i = 1; i < hashes.length; i++) {
    if (hashes[i].hash !== hashes[0].hash) {
      throw new Error(
        `config hash mismatch: ${hashes[0].path} carries ${hashes[0].hash} but ` +
        `${hashes[i].path} carries ${hashes[i].hash}`
      );
    }
  }
}
