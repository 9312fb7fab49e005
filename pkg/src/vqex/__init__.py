"""Adaptive variational eigenstate search on the mixed-field Ising chain.

The package simulates, exactly on a dense statevector, an adaptive
variational algorithm that targets arbitrary eigenstates by minimizing the
energy variance (or a folded, shift-targeted variant), and benchmarks it
against full exact diagonalization.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .circuits import ConnectivityModel, cnot_count_ansatz, cnot_count_step
from .engine import (CostKind, TrialResult, convergence_metric, cost,
                     rebuild_state, run_adaptive_trial, select_operator)
from .ensemble import (EnsembleStats, InitialStateSpec, bin_average, lambda_grid,
                       nc_scaling, run_fsm_scan, run_vqex_ensemble,
                       sample_initial_states)
from .io import RunConfig
from .model import (ModelParams, OperatorPool, build_mfim, build_pool,
                    estimate_bandwidth, magnetization_density)
from .optimize import (NMResult, ObjectiveHandle, SimplexConfig,
                       nelder_mead_minimize, periodic_line_minimize)
from .oracle import (DegenerateSubspace, Spectrum, diagonalize,
                     eigenstate_observable_table, group_degenerate,
                     subspace_overlap)
from .pauli import OperatorSum, PauliString
from .state import (Bipartition, QubitState, apply_operator_sum, apply_pauli,
                    entanglement_entropy, expectation, half_chain, inner_product,
                    pauli_rotation, product_state, reduced_density_matrix,
                    zero_state)
