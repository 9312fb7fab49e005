import numpy as np
import pytest

from vqex import (ModelParams, bin_average, build_mfim, build_pool, diagonalize,
                  expectation, lambda_grid, nc_scaling, product_state,
                  run_fsm_scan, run_vqex_ensemble, sample_initial_states)
from vqex.ensemble import classify_energy, compute_aggregates


@pytest.fixture(scope="module")
def small_problem():
    h = build_mfim(ModelParams(n_qubits=4, h_x=0.8, h_z=0.5))
    return h, build_pool("minimal", 4), diagonalize(h)


def test_sampler_determinism_and_binning(small_problem):
    h, _, spec = small_problem
    a, rep_a = sample_initial_states(4, 12, h, seed=42)
    b, _ = sample_initial_states(4, 12, h, seed=42)
    assert [s.angles for s in a] == [s.angles for s in b]
    assert [s.seed for s in a] == [s.seed for s in b]
    c, _ = sample_initial_states(4, 12, h, seed=43)
    assert [s.angles for s in a] != [s.angles for s in c]
    assert rep_a.accepted == len(a) <= 12
    assert rep_a.bin_counts.sum() == rep_a.accepted


def test_sampler_energy_reconstruction(small_problem):
    h, _, _ = small_problem
    specs, _ = sample_initial_states(4, 8, h, seed=1)
    for s in specs:
        assert abs(expectation(product_state(s.angles), h) - s.e0) <= 1e-9


def test_sampler_quota_per_bin(small_problem):
    h, _, _ = small_problem
    # one state per bin when count == bins and all bins are fillable enough
    specs, rep = sample_initial_states(4, 6, h, seed=3, bins=6, draw_cap=20000)
    assert np.all(rep.bin_counts <= 1)


def test_sampler_flat_histogram_n6():
    h = build_mfim(ModelParams(n_qubits=6, h_x=0.8, h_z=0.5))
    specs, rep = sample_initial_states(6, 400, h, seed=7, bins=16)
    filled = rep.bin_counts[rep.bin_counts > 0]
    # interior bins fill to quota; only spectral-edge bins may lag
    assert (rep.bin_counts >= 1).sum() >= 13
    assert filled.max() <= int(np.ceil(400 / 16))


def test_vqex_ensemble_on_eigenstates_and_roundtrip(small_problem):
    h, pool, spec = small_problem
    specs, _ = sample_initial_states(4, 6, h, seed=5)
    stats = run_vqex_ensemble(h, pool, specs, delta=1e-3, n_max=25, spectrum=spec,
                              overlap_deltas=(1e-6, 0.1))
    assert len(stats.rows) == 6
    agg = stats.aggregates
    assert agg["n_trials"] == 6
    assert 0 <= agg["convergence_rate"] <= 1
    # aggregates recomputable from rows
    e_min, e_max = float(spec.energies[0]), float(spec.energies[-1])
    again = compute_aggregates(stats.rows, e_min, e_max, spec.mean_level_spacing())
    assert again == agg
    # per-trial overlap tables carry every requested window
    assert len(stats.overlap_tables) == 2 * len(stats.rows)
    for row in stats.rows:
        assert row.n_evals == row.ls_evals + row.nm_evals
        if row.converged and row.termination == "criterion_met":
            assert row.f_metric < 1e-3


def test_parallel_matches_serial(small_problem):
    h, pool, spec = small_problem
    specs, _ = sample_initial_states(4, 4, h, seed=9)
    serial = run_vqex_ensemble(h, pool, specs, delta=1e-3, n_max=15, spectrum=spec)
    parallel = run_vqex_ensemble(h, pool, specs, delta=1e-3, n_max=15, spectrum=spec,
                                 workers=3)
    for a, b in zip(serial.rows, parallel.rows):
        assert a == b
    assert serial.aggregates == parallel.aggregates


def test_fsm_scan_hits_targets(small_problem):
    h, pool, spec = small_problem
    lams = [float(spec.energies[0]), float(spec.energies[7])]
    stats = run_fsm_scan(h, pool, lams, seed=2, delta=1e-3, n_max=40, spectrum=spec)
    assert [r.lam for r in stats.rows] == lams
    for row in stats.rows:
        if row.converged:
            assert np.min(np.abs(spec.energies - row.energy)) < 3 * spec.mean_level_spacing()


def test_fsm_lambda_grid():
    grid = lambda_grid((-2.0, 2.0), 5, pad=0.0)
    assert np.allclose(grid, [-2, -1, 0, 1, 2])
    padded = lambda_grid((-1.0, 1.0), 3, pad=0.05)
    assert padded[0] == pytest.approx(-1.1) and padded[-1] == pytest.approx(1.1)


def test_fsm_qubit_mean_field_policy(small_problem):
    h, pool, spec = small_problem
    lam = float(spec.energies[3])
    stats = run_fsm_scan(h, pool, [lam], seed=4, psi0_policy="qubit_mean_field",
                         delta=1e-3, n_max=30, spectrum=spec)
    row = stats.rows[0]
    # mean-field start must begin no worse than a random product state's
    # folded cost would typically be; just sanity-check it ran and recorded
    assert row.lam == lam
    with pytest.raises(ValueError):
        run_fsm_scan(h, pool, [lam], psi0_policy="best_guess")


def test_classification_and_aggregate_classes():
    assert classify_energy(-9.99, -10.0, 10.0, 0.4) == "edge"
    assert classify_energy(9.85, -10.0, 10.0, 0.4) == "edge"
    assert classify_energy(0.0, -10.0, 10.0, 0.4) == "excited"


def test_bin_average():
    assert bin_average([(0.5, 2.0)], 1.0) == [(0.5, 2.0)]
    out = bin_average([(0.0, 0.0), (0.1, 1.0)], 1.0)
    assert out == [(pytest.approx(0.05), pytest.approx(0.5))]
    two = bin_average([(0.0, 1.0), (2.5, 3.0)], 1.0)
    assert len(two) == 2
    with pytest.raises(ValueError):
        bin_average([], 1.0)
    with pytest.raises(ValueError):
        bin_average([(0, 0)], 0.0)


def test_nc_scaling_table(small_problem):
    h, pool, spec = small_problem
    specs, _ = sample_initial_states(4, 3, h, seed=11)
    stats = run_vqex_ensemble(h, pool, specs, delta=1e-3, n_max=10, spectrum=spec)
    with pytest.raises(ValueError):
        nc_scaling({4: stats})
    table = nc_scaling({4: stats, 5: stats})
    assert [row[0] for row in table] == [4, 5]
