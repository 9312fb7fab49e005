"""Run configuration and the persistent artifact schemas.

Every run directory holds:

* ``trials.csv``      one row per trial (see TRIAL_COLUMNS)
* ``ansatz.jsonl``    a header record, then one record per trial with the
                      initial angles and the full (op, theta) step log
* ``spectrum.csv``    the exact-diagonalization energy ladder
* ``observables.csv`` per-eigenstate (E, M_Z, S_A) from the oracle
* ``overlaps.csv``    per trial and per grouping window: overlap onto the
                      best and nearest degenerate subspace
* ``meta.json``       the config echo, code version and timing

Each artifact carries the 12-hex config hash (CSV: a leading ``#`` comment
line; JSONL: the header record; meta: a field), so artifacts from different
configurations cannot be mixed silently.  The hash covers everything that
determines the numbers, and deliberately not ``workers`` or ``out``: those
change scheduling, never results.  Floats serialize with 17 significant
digits for exact round-trips.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .circuits import CONNECTIVITY_KINDS

TRIAL_COLUMNS = (
    "trial_id", "seed", "lambda", "e0", "converged", "termination", "n_c",
    "energy", "variance", "f_metric", "m_z", "s_a", "best_overlap",
    "nearest_overlap", "overlap_delta", "ls_evals", "nm_evals", "n_evals",
    "cnot_nn_obc", "cnot_nn_pbc", "cnot_all_to_all",
)

SCALING_COLUMNS = (
    "n_qubits", "j", "h_x", "h_z", "pool", "algorithm", "delta", "n_trials",
    "n_converged", "convergence_rate", "mean_nc", "std_nc", "mean_nc_excited",
    "std_nc_excited", "mean_nc_edge", "std_nc_edge",
    "mean_cnot_nn_obc_excited", "mean_cnot_nn_pbc_excited",
    "mean_cnot_all_to_all_excited",
)


@dataclass
class RunConfig:
    """Everything a run needs; validated up front, echoed into every output."""

    n_qubits: int = 6
    j: float = 1.0
    h_x: float = 0.8
    h_z: float = 0.0
    pool: str = "minimal"
    include_diagonal_pairs: bool = False
    algorithm: str = "vqex"  # vqex | fsm
    delta: float = 1e-4
    n_max: int = 100
    trials: int = 100
    lambda_points: int = 50
    lambda_pad: float = 0.02
    psi0_policy: str = "fixed_random"
    bandwidth_method: str = "exact_extremes"
    seed: int = 1
    region_a: tuple = ()  # empty means the first floor(N/2) sites
    connectivities: tuple = CONNECTIVITY_KINDS
    overlap_deltas: tuple = (1e-6, 0.12)
    postselect_bins: int = 16
    draw_cap: int | None = None
    nm_f_tol: float = 1e-10
    nm_max_evals: int | None = None  # None: 200 per parameter
    nm_evals_per_dim: int = 200
    line_grid: int = 16
    line_tol: float = 1e-6
    workers: int = 1
    out: str = "run"

    def __post_init__(self):
        if self.algorithm not in ("vqex", "fsm"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.pool not in ("minimal", "maximal"):
            raise ValueError(f"unknown pool {self.pool!r}")
        if self.psi0_policy not in ("fixed_random", "qubit_mean_field"):
            raise ValueError(f"unknown psi0 policy {self.psi0_policy!r}")
        if self.bandwidth_method not in ("exact_extremes", "qubit_mean_field"):
            raise ValueError(f"unknown bandwidth method {self.bandwidth_method!r}")
        if self.n_qubits < 3:
            raise ValueError("n_qubits must be at least 3")
        if self.delta <= 0 or self.n_max < 1 or self.trials < 1 or self.lambda_points < 1:
            raise ValueError("delta, n_max, trials and lambda_points must be positive")
        for c in self.connectivities:
            if c not in CONNECTIVITY_KINDS:
                raise ValueError(f"unknown connectivity {c!r}")
        self.region_a = tuple(int(s) for s in self.region_a)
        self.connectivities = tuple(self.connectivities)
        self.overlap_deltas = tuple(float(d) for d in self.overlap_deltas)

    def region_a_sites(self) -> tuple:
        return self.region_a or tuple(range(1, self.n_qubits // 2 + 1))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def config_hash(self) -> str:
        payload = self.to_dict()
        payload.pop("workers")
        payload.pop("out")
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


def fmt_float(x) -> str:
    """17-significant-digit decimal form; exact round-trip for doubles."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def write_csv(path, columns, rows, config_hash: str):
    lines = [f"# config_hash={config_hash}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Returns (config_hash, columns, rows-of-strings)."""
    text = Path(path).read_text().strip().splitlines()
    config_hash = None
    header = None
    rows = []
    for line in text:
        if line.startswith("#"):
            if "config_hash=" in line:
                config_hash = line.split("config_hash=")[1].strip()
            continue
        if header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return config_hash, header, rows


def trial_row_cells(row) -> list:
    cells = [row.trial_id, row.seed, row.lam, row.e0, row.converged, row.termination,
             row.n_c, row.energy, row.variance, row.f_metric, row.m_z, row.s_a,
             row.best_overlap, row.nearest_overlap, row.overlap_delta,
             row.ls_evals, row.nm_evals, row.n_evals]
    for kind in CONNECTIVITY_KINDS:
        cells.append(row.cnot.get(kind))
    return cells


def write_trials_csv(path, rows, config_hash: str):
    write_csv(path, TRIAL_COLUMNS, (trial_row_cells(r) for r in rows), config_hash)


def write_spectrum_csv(path, energies, config_hash: str):
    write_csv(path, ("index", "energy"),
              ((k, float(e)) for k, e in enumerate(energies)), config_hash)


def write_observables_csv(path, table, config_hash: str):
    write_csv(path, ("index", "energy", "m_z", "s_a"),
              ((k, float(r[0]), float(r[1]), float(r[2])) for k, r in enumerate(table)),
              config_hash)


def write_overlaps_csv(path, overlap_tables, config_hash: str):
    write_csv(path, ("trial_id", "delta", "best_overlap", "nearest_overlap"),
              ((tid, float(d), float(b), float(nr)) for tid, d, b, nr in overlap_tables),
              config_hash)


def _json_safe(obj):
    """NaN has no strict-JSON form; map it to null.  Finite floats keep
    Python's shortest-exact repr, which round-trips doubles exactly."""
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def write_ansatz_jsonl(path, stats, config, config_hash: str):
    """Header record, then one record per trial: initial angles plus the full
    step log (op, theta after reoptimization, both costs, eval counters)."""
    lines = [json.dumps({"record": "header", "config_hash": config_hash,
                         "algorithm": config.algorithm, "n_qubits": config.n_qubits})]
    for row, result, angles in zip(stats.rows, stats.results, stats.initial_angles):
        steps = [{
            "op": s.op_id,
            "theta": t,
            "ls_cost": s.line_cost,
            "opt_cost": s.opt_cost,
            "energy": s.energy,
            "f": s.f_metric,
            "ls_evals": s.ls_evals,
            "nm_evals": s.nm_evals,
            "cum_evals": s.cum_evals,
        } for s, (_, t) in zip(result.steps, result.ansatz)]
        rec = {
            "record": "trial",
            "trial_id": row.trial_id,
            "seed": row.seed,
            "lambda": row.lam,
            "e0": row.e0,
            "initial_angles": list(angles),
            "steps": steps,
            "converged": row.converged,
            "termination": row.termination,
            "final_energy": row.energy,
            "final_variance": row.variance,
            "final_f": row.f_metric,
        }
        lines.append(json.dumps(_json_safe(rec), allow_nan=False))
    Path(path).write_text("\n".join(lines) + "\n")


def read_ansatz_jsonl(path):
    """Returns (header dict, list of trial records)."""
    lines = Path(path).read_text().strip().splitlines()
    header = json.loads(lines[0])
    if header.get("record") != "header":
        raise ValueError(f"{path}: first record must be the header")
    return header, [json.loads(ln) for ln in lines[1:]]


def write_meta(path, config: RunConfig, config_hash: str, extra: dict):
    payload = {"config": _json_safe(config.to_dict()), "config_hash": config_hash}
    payload.update(_json_safe(extra))
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_meta(path) -> tuple[RunConfig, dict]:
    payload = json.loads(Path(path).read_text())
    cfg_dict = dict(payload["config"])
    for key in ("region_a", "connectivities", "overlap_deltas"):
        if key in cfg_dict and isinstance(cfg_dict[key], list):
            cfg_dict[key] = tuple(cfg_dict[key])
    return RunConfig.from_dict(cfg_dict), payload
