"""Trial ensembles: postselected initial states, parallel adaptive runs with
per-trial diagnostics, folded-spectrum scans, and aggregate statistics.

Reproducibility contract: every random draw derives from the master seed
through a fixed sequence (the rejection sampler) or a per-trial derived
stream, and results are merged by trial id, so outputs are identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuits import CONNECTIVITY_KINDS, ConnectivityModel, cnot_count_ansatz
from .engine import CostKind, TrialResult, rebuild_state, run_adaptive_trial
from .model import OperatorPool, estimate_bandwidth, magnetization_density
from .optimize import SimplexConfig, nelder_mead_minimize
from .oracle import Spectrum, all_subspace_overlaps, group_degenerate
from .pauli import OperatorSum
from .state import (Bipartition, QubitState, entanglement_entropy, expectation,
                    half_chain, product_state, reduced_density_matrix)


@dataclass(frozen=True)
class InitialStateSpec:
    """One postselected initial product state: its angles, its energy, and
    the integer stream id derived from (master seed, draw index)."""

    angles: tuple
    e0: float
    seed: int


@dataclass
class SampleReport:
    requested: int
    accepted: int
    draws: int
    exhausted: bool
    bin_edges: np.ndarray
    bin_counts: np.ndarray


def _trial_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence((master_seed, index)).generate_state(1)[0])


def sample_initial_states(n_qubits: int, count: int, h: OperatorSum, seed: int, *,
                          bins: int = 16, band: tuple[float, float] | None = None,
                          draw_cap: int | None = None) -> tuple[list[InitialStateSpec], SampleReport]:
    """Rejection-sample random product states into a flat energy histogram.

    Angles are uniform on [0, 2pi); a draw is kept while its energy bin
    (``bins`` equal widths spanning the spectral band) is below its quota of
    ``ceil(count / bins)``.  Bins at the spectral edges may be unreachable by
    product states, so the sampler stops at ``draw_cap`` (default
    ``500 * count``) and reports per-bin fill; the ensemble is then partial.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if band is None:
        band = estimate_bandwidth(h, "exact_extremes")
    e_lo, e_hi = band
    if draw_cap is None:
        draw_cap = 500 * count
    quota = math.ceil(count / bins)
    edges = np.linspace(e_lo, e_hi, bins + 1)
    counts = np.zeros(bins, dtype=int)
    rng = np.random.default_rng(seed)
    specs: list[InitialStateSpec] = []
    draws = 0
    while len(specs) < count and draws < draw_cap:
        angles = rng.uniform(0.0, 2.0 * math.pi, size=n_qubits)
        draws += 1
        e0 = expectation(product_state(angles), h)
        b = min(int((e0 - e_lo) / (e_hi - e_lo) * bins), bins - 1) if e_hi > e_lo else 0
        b = max(b, 0)
        if counts[b] >= quota:
            continue
        counts[b] += 1
        specs.append(InitialStateSpec(angles=tuple(angles), e0=e0,
                                      seed=_trial_seed(seed, len(specs))))
    report = SampleReport(requested=count, accepted=len(specs), draws=draws,
                          exhausted=len(specs) < count, bin_edges=edges, bin_counts=counts)
    return specs, report


@dataclass
class TrialRow:
    """Flat per-trial record, the unit of trials.csv."""

    trial_id: int
    seed: int
    lam: float | None
    e0: float
    converged: bool
    termination: str
    n_c: int
    energy: float
    variance: float
    f_metric: float
    m_z: float
    s_a: float
    best_overlap: float
    nearest_overlap: float
    overlap_delta: float
    ls_evals: int
    nm_evals: int
    cnot: dict = field(default_factory=dict)

    @property
    def n_evals(self) -> int:
        return self.ls_evals + self.nm_evals


@dataclass
class EnsembleStats:
    rows: list
    results: list
    initial_angles: list
    aggregates: dict
    overlap_tables: list  # (trial_id, delta, best, nearest) for every requested delta


@dataclass(frozen=True)
class _TrialTask:
    trial_id: int
    spec: InitialStateSpec
    lam: float | None  # folded shift; None means variance cost


def _run_task(task, h, pool, delta, n_max, simplex, nm_evals_per_dim, spectrum,
              groups_per_delta, overlap_deltas, part, connectivities):
    psi0 = product_state(task.spec.angles)
    kind = CostKind.variance() if task.lam is None else CostKind.folded(task.lam)
    result = run_adaptive_trial(h, pool, psi0, kind, delta=delta, n_max=n_max,
                                simplex=simplex, nm_evals_per_dim=nm_evals_per_dim)
    final = rebuild_state(psi0, result.ansatz, pool)
    m_z = magnetization_density(final)
    s_a = entanglement_entropy(reduced_density_matrix(final, part))
    overlap_rows = []
    best = nearest = math.nan
    lead_delta = math.nan
    if spectrum is not None:
        for d, groups, centers in groups_per_delta:
            ovl = all_subspace_overlaps(final, groups, spectrum)
            b = float(ovl.max())
            near_idx = int(np.argmin(np.abs(centers - result.final_energy)))
            nr = float(ovl[near_idx])
            overlap_rows.append((task.trial_id, d, b, nr))
        best, nearest = overlap_rows[0][2], overlap_rows[0][3]
        lead_delta = overlap_rows[0][1]
    cnot = {c: cnot_count_ansatz(result.ansatz, pool, ConnectivityModel(c, h.n_qubits))
            for c in connectivities}
    row = TrialRow(trial_id=task.trial_id, seed=task.spec.seed, lam=task.lam,
                   e0=task.spec.e0, converged=result.converged,
                   termination=result.termination, n_c=result.n_c,
                   energy=result.final_energy, variance=result.final_variance,
                   f_metric=result.final_f, m_z=m_z, s_a=s_a, best_overlap=best,
                   nearest_overlap=nearest, overlap_delta=lead_delta,
                   ls_evals=result.ls_evals, nm_evals=result.nm_evals, cnot=cnot)
    return task.trial_id, row, result, overlap_rows


def _run_tasks(tasks, h, pool, delta, n_max, simplex, nm_evals_per_dim, spectrum,
               overlap_deltas, part, connectivities, workers, progress=None):
    groups_per_delta = []
    if spectrum is not None:
        for d in overlap_deltas:
            groups = group_degenerate(spectrum, d)
            centers = np.array([spectrum.energies[list(g.indices)].mean() for g in groups])
            groups_per_delta.append((d, groups, centers))
    args = (h, pool, delta, n_max, simplex, nm_evals_per_dim, spectrum,
            groups_per_delta, overlap_deltas, part, connectivities)
    outputs = [None] * len(tasks)
    if workers <= 1:
        for t in tasks:
            outputs[t.trial_id] = _run_task(t, *args)
            if progress:
                progress(t.trial_id)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(_run_task, t, *args): t.trial_id for t in tasks}
            for fut, tid in futures.items():
                outputs[tid] = fut.result()
                if progress:
                    progress(tid)
    rows = [o[1] for o in outputs]
    results = [o[2] for o in outputs]
    overlap_tables = [r for o in outputs for r in o[3]]
    return rows, results, overlap_tables


def classify_energy(energy: float, e_min: float, e_max: float, spacing: float) -> str:
    """"edge" when within half a mean level spacing of a spectral end, else
    "excited"; the edge class covers the ground and highest states including
    their quasi-degenerate partners."""
    half = 0.5 * spacing
    return "edge" if (energy - e_min) <= half or (e_max - energy) <= half else "excited"


def compute_aggregates(rows, e_min: float, e_max: float, spacing: float) -> dict:
    """Ensemble summary over converged trials; recomputable from the rows."""
    conv = [r for r in rows if r.converged]
    out = {
        "n_trials": len(rows),
        "n_converged": len(conv),
        "convergence_rate": len(conv) / len(rows) if rows else math.nan,
    }

    def stats(values):
        if not values:
            return math.nan, math.nan
        arr = np.asarray(values, dtype=float)
        std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        return float(arr.mean()), std

    ncs = [r.n_c for r in conv]
    out["mean_nc"], out["std_nc"] = stats(ncs)
    excited = [r.n_c for r in conv if classify_energy(r.energy, e_min, e_max, spacing) == "excited"]
    edge = [r.n_c for r in conv if classify_energy(r.energy, e_min, e_max, spacing) == "edge"]
    out["mean_nc_excited"], out["std_nc_excited"] = stats(excited)
    out["mean_nc_edge"], out["std_nc_edge"] = stats(edge)
    out["n_excited"], out["n_edge"] = len(excited), len(edge)
    for kind in CONNECTIVITY_KINDS:
        vals = [r.cnot[kind] for r in conv
                if kind in r.cnot and classify_energy(r.energy, e_min, e_max, spacing) == "excited"]
        out[f"mean_cnot_{kind}_excited"], _ = stats(vals)
    return out


def run_vqex_ensemble(h: OperatorSum, pool: OperatorPool, specs, *, delta: float = 1e-4,
                      n_max: int = 100, simplex: SimplexConfig | None = None,
                      nm_evals_per_dim: int = 200, spectrum: Spectrum | None = None,
                      part: Bipartition | None = None,
                      overlap_deltas=(1e-6,), connectivities=CONNECTIVITY_KINDS,
                      workers: int = 1, progress=None) -> EnsembleStats:
    """One variance-minimizing adaptive trial per initial-state spec."""
    part = part or half_chain(h.n_qubits)
    tasks = [_TrialTask(trial_id=i, spec=s, lam=None) for i, s in enumerate(specs)]
    rows, results, overlaps = _run_tasks(tasks, h, pool, delta, n_max, simplex,
                                         nm_evals_per_dim, spectrum, tuple(overlap_deltas),
                                         part, tuple(connectivities), workers, progress)
    aggregates = _aggregates_for(rows, h, spectrum)
    return EnsembleStats(rows=rows, results=results,
                         initial_angles=[s.angles for s in specs],
                         aggregates=aggregates, overlap_tables=overlaps)


def lambda_grid(band: tuple[float, float], points: int, pad: float = 0.02) -> np.ndarray:
    """Uniform shift grid across the band, padded by ``pad`` of the width on
    each side."""
    lo, hi = band
    width = hi - lo
    return np.linspace(lo - pad * width, hi + pad * width, points)


def qubit_mean_field_angles(h: OperatorSum, lam: float, seed: int, *,
                            n_restarts: int = 4) -> tuple:
    """Product-state angles minimizing the folded cost <(H - lam)^2>."""
    n = h.n_qubits
    from .engine import cost

    def folded(angles):
        return cost(product_state(angles), h, CostKind.folded(lam))

    rng = np.random.default_rng(seed)
    cfg = SimplexConfig(f_tol=1e-12, max_evals=3000)
    best = (math.inf, None)
    for _ in range(n_restarts):
        x0 = rng.uniform(0.0, 2.0 * math.pi, size=n)
        res = nelder_mead_minimize(folded, x0, cfg)
        if res.fun < best[0]:
            best = (res.fun, res.x)
    return tuple(np.mod(best[1], 2.0 * math.pi))


def run_fsm_scan(h: OperatorSum, pool: OperatorPool, lambdas, *, seed: int = 1,
                 psi0_policy: str = "fixed_random", delta: float = 1e-4,
                 n_max: int = 100, simplex: SimplexConfig | None = None,
                 nm_evals_per_dim: int = 200, spectrum: Spectrum | None = None,
                 part: Bipartition | None = None, overlap_deltas=(1e-6,),
                 connectivities=CONNECTIVITY_KINDS, workers: int = 1,
                 progress=None) -> EnsembleStats:
    """One folded-spectrum adaptive run per shift value.

    ``fixed_random`` starts every run from the same random product state
    (drawn from ``seed``); ``qubit_mean_field`` instead optimizes a product
    state against each shift's folded cost before the adaptive stage.
    """
    if psi0_policy not in ("fixed_random", "qubit_mean_field"):
        raise ValueError(f"unknown psi0 policy {psi0_policy!r}")
    n = h.n_qubits
    rng = np.random.default_rng(seed)
    fixed_angles = tuple(rng.uniform(0.0, 2.0 * math.pi, size=n))
    tasks = []
    for i, lam in enumerate(lambdas):
        if psi0_policy == "fixed_random":
            angles = fixed_angles
        else:
            angles = qubit_mean_field_angles(h, float(lam), _trial_seed(seed, i))
        e0 = expectation(product_state(angles), h)
        spec = InitialStateSpec(angles=angles, e0=e0, seed=_trial_seed(seed, i))
        tasks.append(_TrialTask(trial_id=i, spec=spec, lam=float(lam)))
    part = part or half_chain(n)
    rows, results, overlaps = _run_tasks(tasks, h, pool, delta, n_max, simplex,
                                         nm_evals_per_dim, spectrum, tuple(overlap_deltas),
                                         part, tuple(connectivities), workers, progress)
    aggregates = _aggregates_for(rows, h, spectrum)
    return EnsembleStats(rows=rows, results=results,
                         initial_angles=[t.spec.angles for t in tasks],
                         aggregates=aggregates, overlap_tables=overlaps)


def _aggregates_for(rows, h, spectrum):
    if spectrum is not None:
        e_min, e_max = float(spectrum.energies[0]), float(spectrum.energies[-1])
        spacing = spectrum.mean_level_spacing()
    else:
        e_min, e_max = estimate_bandwidth(h, "qubit_mean_field")
        spacing = (e_max - e_min) / max((1 << h.n_qubits) - 1, 1)
    return compute_aggregates(rows, e_min, e_max, spacing)


def bin_average(points, bin_width: float) -> list[tuple[float, float]]:
    """Average (x, value) pairs over fixed-width bins anchored at min x;
    empty bins are omitted and each output is its bin's arithmetic mean."""
    pts = list(points)
    if not pts:
        raise ValueError("bin_average needs at least one point")
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    xs = np.array([p[0] for p in pts], dtype=float)
    vs = np.array([p[1] for p in pts], dtype=float)
    base = xs.min()
    idx = np.floor((xs - base) / bin_width).astype(int)
    out = []
    for b in sorted(set(idx.tolist())):
        sel = idx == b
        out.append((float(xs[sel].mean()), float(vs[sel].mean())))
    return out


def nc_scaling(stats_per_n: dict) -> list[tuple[int, float, float]]:
    """Rows (N, mean n_c, std) over converged trials, ascending in N."""
    if len(stats_per_n) < 2:
        raise ValueError("scaling needs at least two system sizes")
    table = []
    for n in sorted(stats_per_n):
        agg = stats_per_n[n].aggregates
        table.append((n, agg["mean_nc"], agg["std_nc"]))
    return table
