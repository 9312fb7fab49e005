"""Command-line entry points: run, oracle, replay, stats.

Configuration comes from an optional JSON file (``--config``) overridden by
flags; everything is explicit, no environment variables.  ``run`` executes a
trial ensemble (vqex) or a shift scan (fsm) and writes the artifact set
described in :mod:`vqex.io`; ``oracle`` exports the exact-diagonalization
baselines; ``replay`` rebuilds every recorded ansatz and checks the stored
convergence metrics; ``stats`` aggregates several run directories into a
scaling table.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .engine import rebuild_state
from .ensemble import (classify_energy, compute_aggregates, lambda_grid,
                       run_fsm_scan, run_vqex_ensemble, sample_initial_states)
from .io import (SCALING_COLUMNS, RunConfig, fmt_float, read_ansatz_jsonl, read_csv,
                 read_meta, write_ansatz_jsonl, write_csv, write_meta,
                 write_observables_csv, write_overlaps_csv, write_spectrum_csv,
                 write_trials_csv)
from .model import ModelParams, build_mfim, build_pool, estimate_bandwidth
from .oracle import DENSE_QUBIT_LIMIT, diagonalize, eigenstate_observable_table
from .state import Bipartition, product_state
from .engine import convergence_metric
from .state import expectation


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON file of RunConfig fields; flags override it")
    p.add_argument("--n-qubits", type=int, dest="n_qubits")
    p.add_argument("--j", type=float, dest="j")
    p.add_argument("--h-x", type=float, dest="h_x")
    p.add_argument("--h-z", type=float, dest="h_z")
    p.add_argument("--pool", choices=("minimal", "maximal"))
    p.add_argument("--include-diagonal-pairs", action="store_true", default=None,
                   dest="include_diagonal_pairs")
    p.add_argument("--algorithm", choices=("vqex", "fsm"))
    p.add_argument("--delta", type=float)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--trials", type=int)
    p.add_argument("--lambda-points", type=int, dest="lambda_points")
    p.add_argument("--lambda-pad", type=float, dest="lambda_pad")
    p.add_argument("--psi0-policy", choices=("fixed_random", "qubit_mean_field"),
                   dest="psi0_policy")
    p.add_argument("--bandwidth-method", choices=("exact_extremes", "qubit_mean_field"),
                   dest="bandwidth_method")
    p.add_argument("--seed", type=int)
    p.add_argument("--region-a", dest="region_a",
                   help="comma-separated 1-based sites of subsystem A")
    p.add_argument("--overlap-deltas", dest="overlap_deltas",
                   help="comma-separated degeneracy windows")
    p.add_argument("--postselect-bins", type=int, dest="postselect_bins")
    p.add_argument("--draw-cap", type=int, dest="draw_cap")
    p.add_argument("--nm-evals-per-dim", type=int, dest="nm_evals_per_dim")
    p.add_argument("--nm-f-tol", type=float, dest="nm_f_tol")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory")


def _config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        data.update(json.loads(Path(args.config).read_text()))
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            data[f.name] = v
    for key in ("region_a", "overlap_deltas"):
        if isinstance(data.get(key), str):
            data[key] = tuple(x for x in data[key].split(",") if x)
    if "region_a" in data:
        data["region_a"] = tuple(int(s) for s in data["region_a"])
    if "overlap_deltas" in data:
        data["overlap_deltas"] = tuple(float(d) for d in data["overlap_deltas"])
    if "connectivities" in data:
        data["connectivities"] = tuple(data["connectivities"])
    return RunConfig.from_dict(data)


def _build_problem(cfg: RunConfig):
    params = ModelParams(n_qubits=cfg.n_qubits, h_x=cfg.h_x, h_z=cfg.h_z, j=cfg.j)
    h = build_mfim(params)
    pool = build_pool(cfg.pool, cfg.n_qubits,
                      include_diagonal_pairs=cfg.include_diagonal_pairs)
    spectrum = diagonalize(h) if cfg.n_qubits <= DENSE_QUBIT_LIMIT else None
    part = Bipartition(cfg.region_a_sites())
    return h, pool, spectrum, part


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    chash = cfg.config_hash()
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    h, pool, spectrum, part = _build_problem(cfg)

    common = dict(delta=cfg.delta, n_max=cfg.n_max, nm_evals_per_dim=cfg.nm_evals_per_dim,
                  spectrum=spectrum, part=part, overlap_deltas=cfg.overlap_deltas,
                  connectivities=cfg.connectivities, workers=cfg.workers)
    extra_meta = {}
    if cfg.algorithm == "vqex":
        band = estimate_bandwidth(h, cfg.bandwidth_method) if spectrum is None \
            else (float(spectrum.energies[0]), float(spectrum.energies[-1]))
        specs, report = sample_initial_states(cfg.n_qubits, cfg.trials, h, cfg.seed,
                                              bins=cfg.postselect_bins, band=band,
                                              draw_cap=cfg.draw_cap)
        if report.exhausted:
            print(f"postselection exhausted after {report.draws} draws: "
                  f"{report.accepted}/{report.requested} states; per-bin fill "
                  f"{report.bin_counts.tolist()}", file=sys.stderr)
        stats = run_vqex_ensemble(h, pool, specs, **common)
        extra_meta["postselection"] = {
            "requested": report.requested, "accepted": report.accepted,
            "draws": report.draws, "bin_counts": report.bin_counts.tolist(),
        }
    else:
        band = estimate_bandwidth(h, cfg.bandwidth_method)
        lambdas = lambda_grid(band, cfg.lambda_points, cfg.lambda_pad)
        stats = run_fsm_scan(h, pool, lambdas, seed=cfg.seed,
                             psi0_policy=cfg.psi0_policy, **common)
        extra_meta["lambda_band"] = list(band)

    write_trials_csv(outdir / "trials.csv", stats.rows, chash)
    write_ansatz_jsonl(outdir / "ansatz.jsonl", stats, cfg, chash)
    write_overlaps_csv(outdir / "overlaps.csv", stats.overlap_tables, chash)
    if spectrum is not None:
        write_spectrum_csv(outdir / "spectrum.csv", spectrum.energies, chash)
    write_meta(outdir / "meta.json", cfg, chash, {
        "package_version": __version__,
        "kernel_backend": BACKEND,
        "wall_seconds": time.time() - t0,
        "aggregates": stats.aggregates,
        **extra_meta,
    })
    agg = stats.aggregates
    print(f"{cfg.algorithm}: {agg['n_converged']}/{agg['n_trials']} converged, "
          f"mean n_c {agg['mean_nc']:.1f} (excited {agg['mean_nc_excited']:.1f}), "
          f"artifacts in {outdir}")
    return 0


def cmd_oracle(args) -> int:
    cfg = _config_from_args(args)
    chash = cfg.config_hash()
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if cfg.n_qubits > DENSE_QUBIT_LIMIT:
        print(f"N={cfg.n_qubits} exceeds the dense diagonalization cap "
              f"({DENSE_QUBIT_LIMIT})", file=sys.stderr)
        return 2
    h, _, spectrum, part = _build_problem(cfg)
    table = eigenstate_observable_table(spectrum, part)
    write_spectrum_csv(outdir / "spectrum.csv", spectrum.energies, chash)
    write_observables_csv(outdir / "observables.csv", table, chash)
    write_meta(outdir / "meta.json", cfg, chash, {
        "package_version": __version__,
        "kernel_backend": BACKEND,
    })
    print(f"oracle: {spectrum.dim} eigenstates -> {outdir}")
    return 0


def cmd_replay(args) -> int:
    rundir = Path(args.run)
    cfg, _ = read_meta(rundir / "meta.json")
    h, pool, _, _ = _build_problem(cfg)
    header, records = read_ansatz_jsonl(rundir / "ansatz.jsonl")
    if header["config_hash"] != cfg.config_hash():
        print("config hash mismatch between meta.json and ansatz.jsonl", file=sys.stderr)
        return 2
    worst = 0.0
    bad = 0
    for rec in records:
        psi0 = product_state(rec["initial_angles"])
        ansatz = [(s["op"], s["theta"]) for s in rec["steps"]]
        state = rebuild_state(psi0, ansatz, pool)
        energy = expectation(state, h)
        stored_f = rec["final_f"]
        if stored_f is None:
            continue  # zero-norm termination has no finite F
        f = convergence_metric(state, h)
        err = max(abs(f - stored_f), abs(energy - rec["final_energy"]))
        worst = max(worst, err)
        if err > args.tol:
            bad += 1
            print(f"trial {rec['trial_id']}: replay mismatch {err:.3e}", file=sys.stderr)
    print(f"replayed {len(records)} trials, worst deviation {worst:.3e}")
    return 1 if bad else 0


def cmd_stats(args) -> int:
    rows = []
    for rundir in map(Path, args.runs):
        cfg, meta = read_meta(rundir / "meta.json")
        chash, header, trial_rows = read_csv(rundir / "trials.csv")
        if chash != cfg.config_hash():
            print(f"{rundir}: trials.csv hash does not match meta.json", file=sys.stderr)
            return 2
        agg = meta["aggregates"]
        rows.append([cfg.n_qubits, cfg.j, cfg.h_x, cfg.h_z, cfg.pool, cfg.algorithm,
                     cfg.delta, agg["n_trials"], agg["n_converged"],
                     agg["convergence_rate"], agg["mean_nc"], agg["std_nc"],
                     agg["mean_nc_excited"], agg["std_nc_excited"], agg["mean_nc_edge"],
                     agg["std_nc_edge"], agg["mean_cnot_nn_obc_excited"],
                     agg["mean_cnot_nn_pbc_excited"], agg["mean_cnot_all_to_all_excited"]])
    rows.sort(key=lambda r: (r[0], r[3], r[4]))
    write_csv(args.out, SCALING_COLUMNS, rows, "aggregate")
    print(f"stats: {len(rows)} runs -> {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vqex",
                                     description="adaptive eigenstate search on the mixed-field Ising chain")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a trial ensemble or shift scan")
    _add_config_flags(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_oracle = sub.add_parser("oracle", help="export exact-diagonalization baselines")
    _add_config_flags(p_oracle)
    p_oracle.set_defaults(fn=cmd_oracle)

    p_replay = sub.add_parser("replay", help="rebuild recorded ans\"atze and recheck metrics")
    p_replay.add_argument("--run", required=True, help="run directory")
    p_replay.add_argument("--tol", type=float, default=1e-9)
    p_replay.set_defaults(fn=cmd_replay)

    p_stats = sub.add_parser("stats", help="aggregate run directories into a scaling table")
    p_stats.add_argument("runs", nargs="+", help="run directories")
    p_stats.add_argument("--out", required=True, help="output CSV path")
    p_stats.set_defaults(fn=cmd_stats)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
