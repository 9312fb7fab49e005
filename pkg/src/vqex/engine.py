"""The adaptive eigenstate search loop.

One trial grows an ansatz ``prod_k exp(i theta_k O_k) |psi0>`` greedily: each
step line-searches every pool generator, keeps the one whose single-angle
optimum lowers the cost most, then jointly reoptimizes all angles with
Nelder-Mead.  The cost is either the energy variance (targets any
eigenstate) or the folded cost ``<(H - lam)^2>`` (targets the spectrum near
``lam``).  Convergence is judged by the dimensionless collinearity metric
``F = 1 - |<H>| / ||H psi||``, with an early exit when ``||H psi||`` itself
drops below the threshold (the state has converged to an E = 0 eigenstate
and F is no longer well conditioned).

The line search never rebuilds states: with ``u`` the current state and
``v = O u``, the rotated state is ``cos(t) u + i sin(t) v``, so <H> and
``||H psi||^2`` along the whole line are trigonometric combinations of six
scalars that cost two operator applications to precompute.  The joint
reoptimization does rebuild from ``psi0`` on every evaluation; that fused
rebuild-and-score is the hot kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kern
from .model import OperatorPool
from .optimize import ObjectiveHandle, SimplexConfig, nelder_mead_minimize, periodic_line_minimize
from .pauli import OperatorSum
from .state import QubitState

ZERO_NORM_FLOOR = 1e-14


@dataclass(frozen=True)
class CostKind:
    """Which cost drives the search: ``variance`` or ``folded_spectrum``."""

    variant: str
    lam: float = 0.0

    def __post_init__(self):
        if self.variant not in ("variance", "folded_spectrum"):
            raise ValueError(f"unknown cost variant {self.variant!r}")
        if not math.isfinite(self.lam):
            raise ValueError("lambda must be finite")

    @classmethod
    def variance(cls) -> "CostKind":
        return cls("variance")

    @classmethod
    def folded(cls, lam: float) -> "CostKind":
        return cls("folded_spectrum", float(lam))

    @property
    def flag(self) -> int:
        return 0 if self.variant == "variance" else 1


@dataclass
class TrialStep:
    """Per-step record of one ansatz growth iteration."""

    op_id: int
    theta: float
    line_cost: float
    opt_cost: float
    energy: float
    f_metric: float
    hnorm: float
    ls_evals: int
    nm_evals: int
    cum_evals: int


@dataclass
class TrialResult:
    """Full record of one adaptive trial.

    ``n_c`` equals the ansatz length at termination.  Evaluation counters
    cover optimizer objective calls only (line searches and Nelder-Mead);
    the once-per-step convergence bookkeeping is not an optimizer call.
    """

    converged: bool
    termination: str  # criterion_met | zero_norm_eigenstate | max_steps
    n_c: int
    final_energy: float
    final_variance: float
    final_f: float
    ansatz: list = field(default_factory=list)  # (op_id, theta) in application order
    steps: list = field(default_factory=list)  # TrialStep log
    ls_evals: int = 0
    nm_evals: int = 0

    @property
    def n_evals(self) -> int:
        return self.ls_evals + self.nm_evals


def _moments(amps, ham_arrays, scratch):
    coeffs, xs, zs, phases = ham_arrays
    e_re, e_im, h2 = kern.h_moments(amps, coeffs, xs, zs, phases, scratch)
    return e_re, h2


def cost(state: QubitState, h: OperatorSum, kind: CostKind = CostKind.variance()) -> float:
    """Energy variance or folded cost of a normalized state; clamped at 0."""
    if not state.normalized:
        raise ValueError("cost requires a normalized state")
    scratch = np.empty_like(state.amplitudes)
    e, h2 = _moments(state.amplitudes, h.arrays(), scratch)
    if kind.flag == 0:
        value = h2 - e * e
    else:
        value = h2 - 2.0 * kind.lam * e + kind.lam**2
    if value < -1e-10:
        raise AssertionError(f"cost {value:.3e} below the floating slack; state not normalized?")
    return max(value, 0.0)


def convergence_metric(state: QubitState, h: OperatorSum) -> float:
    """``F = 1 - |<H>| / ||H psi||`` in [0, 1]; zero iff H|psi> is collinear
    with |psi>.  Callers must check ``||H psi||`` against their threshold
    first; a vanishing norm raises instead of dividing."""
    if not state.normalized:
        raise ValueError("convergence metric requires a normalized state")
    scratch = np.empty_like(state.amplitudes)
    e, h2 = _moments(state.amplitudes, h.arrays(), scratch)
    hnorm = math.sqrt(h2)
    if hnorm < ZERO_NORM_FLOOR:
        raise ZeroDivisionError(
            "||H psi|| is numerically zero; the state is an E=0 eigenstate and "
            "F is undefined (handle via the zero-norm termination branch)"
        )
    return min(max(1.0 - abs(e) / hnorm, 0.0), 1.0)


def _line_objective(A, B, im_uhv, huu, hvv, im_huhv, kind: CostKind):
    """Cost along ``cos(t) u + i sin(t) v`` from precomputed scalars."""
    lam = kind.lam
    folded = kind.flag == 1

    def f(t):
        c = math.cos(t)
        s = math.sin(t)
        cc = c * c
        ss = s * s
        cs2 = 2.0 * c * s
        e = cc * A + ss * B - cs2 * im_uhv
        h2 = cc * huu + ss * hvv - cs2 * im_huhv
        if folded:
            return h2 - 2.0 * lam * e + lam * lam
        return h2 - e * e

    return f


def select_operator(state, pool: OperatorPool, h: OperatorSum,
                    kind: CostKind = CostKind.variance(), *,
                    grid_points: int = 16, tol: float = 1e-6):
    """Greedy pick: line-minimize the cost along every pool generator and
    return ``(op_id, theta, cost_after, n_evals)`` for the best one, ties
    broken toward the lowest operator id.  ``state`` may be a QubitState or
    a raw amplitude array."""
    amps = state.amplitudes if isinstance(state, QubitState) else state
    hu = np.empty_like(amps)
    ham = h.arrays()
    kern.apply_opsum(amps, *ham, hu)
    e = np.vdot(amps, hu)
    huu = float(np.vdot(hu, hu).real)
    return _select_operator_fast(amps, hu, float(e.real), huu, pool, ham, kind,
                                 grid_points=grid_points, tol=tol)


def _select_operator_fast(amps, hu, e_u, huu, pool, ham_arrays, kind, *,
                          grid_points=16, tol=1e-6):
    pool_xs, pool_zs, pool_phases = pool.arrays
    hv = np.empty_like(amps)
    best_cost = math.inf
    best_id = -1
    best_theta = 0.0
    total_evals = 0
    coeffs, xs, zs, phases = ham_arrays
    for op_id in range(len(pool_xs)):
        v = kern.apply_pauli(amps, pool_xs[op_id], pool_zs[op_id], pool_phases[op_id])
        kern.apply_opsum(v, coeffs, xs, zs, phases, hv)
        B = float(np.vdot(v, hv).real)
        im_uhv = float(np.vdot(amps, hv).imag)
        hvv = float(np.vdot(hv, hv).real)
        im_huhv = float(np.vdot(hu, hv).imag)
        handle = ObjectiveHandle(_line_objective(e_u, B, im_uhv, huu, hvv, im_huhv, kind))
        theta, val = periodic_line_minimize(handle, grid_points=grid_points, tol=tol)
        total_evals += handle.n_evals
        if val < best_cost:
            best_cost = val
            best_id = op_id
            best_theta = theta
    return best_id, best_theta, best_cost, total_evals


def run_adaptive_trial(h: OperatorSum, pool: OperatorPool, psi0: QubitState,
                       kind: CostKind = CostKind.variance(), *, delta: float = 1e-4,
                       n_max: int = 100, simplex: SimplexConfig | None = None,
                       nm_evals_per_dim: int = 200, grid_points: int = 16,
                       tol: float = 1e-6) -> TrialResult:
    """Run one adaptive trial to convergence, budget exhaustion (``n_max``
    steps), or the zero-norm early exit.

    Per iteration: (a) terminate as ``zero_norm_eigenstate`` when
    ``||H psi|| < delta``; (b) terminate as ``criterion_met`` when
    ``F < delta`` (so an eigenstate input converges with an empty ansatz);
    (c) greedily select and append a generator; (d) reoptimize all angles
    jointly, warm-started from the current optimum, wrapping angles back
    into [0, 2pi) afterwards.  Non-convergence is a recorded outcome, not an
    error.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if pool.n_qubits != h.n_qubits or psi0.n_qubits != h.n_qubits:
        raise ValueError("dimension mismatch between Hamiltonian, pool and state")
    base_cfg = simplex or SimplexConfig()

    ham = h.arrays()
    psi0_amps = np.ascontiguousarray(psi0.amplitudes, dtype=np.complex128)
    amps = psi0_amps.copy()
    hwork = np.empty_like(amps)
    work = np.empty_like(amps)

    steps: list[TrialStep] = []
    thetas = np.zeros(0)
    step_xs = np.zeros(0, dtype=np.uint64)
    step_zs = np.zeros(0, dtype=np.uint64)
    step_phases = np.zeros(0, dtype=np.complex128)
    ls_total = 0
    nm_total = 0
    pending = None  # selection info for the step whose post-reopt state is current

    while True:
        coeffs, xs, zs, phases = ham
        e_re, _, h2 = kern.h_moments(amps, coeffs, xs, zs, phases, hwork)
        hnorm = math.sqrt(max(h2, 0.0))
        variance = max(h2 - e_re * e_re, 0.0)
        f_metric = math.nan if hnorm < ZERO_NORM_FLOOR else min(max(1.0 - abs(e_re) / hnorm, 0.0), 1.0)
        if pending is not None:
            op_id, theta_sel, ls_cost, ls_n, opt_cost, nm_n = pending
            steps.append(TrialStep(op_id=op_id, theta=float(thetas[-1]), line_cost=ls_cost,
                                   opt_cost=opt_cost, energy=e_re, f_metric=f_metric,
                                   hnorm=hnorm, ls_evals=ls_n, nm_evals=nm_n,
                                   cum_evals=ls_total + nm_total))
            pending = None

        if hnorm < delta:
            return _finish(True, "zero_norm_eigenstate", steps, thetas, e_re, variance,
                           f_metric, ls_total, nm_total)
        if f_metric < delta:
            return _finish(True, "criterion_met", steps, thetas, e_re, variance,
                           f_metric, ls_total, nm_total)
        if len(steps) >= n_max:
            return _finish(False, "max_steps", steps, thetas, e_re, variance,
                           f_metric, ls_total, nm_total)

        # (c) greedy operator selection via the scalar line search
        op_id, theta, ls_cost, ls_n = _select_operator_fast(
            amps, hwork, e_re, h2, pool, ham, kind, grid_points=grid_points, tol=tol)
        ls_total += ls_n
        thetas = np.append(thetas, theta)
        p = pool[op_id]
        step_xs = np.append(step_xs, np.uint64(p.x_mask))
        step_zs = np.append(step_zs, np.uint64(p.z_mask))
        step_phases = np.append(step_phases, np.complex128(p.phase))

        # (d) joint reoptimization of every angle, warm-started
        def objective(x):
            return kern.ansatz_cost(psi0_amps, step_xs, step_zs, step_phases, x,
                                    coeffs, xs, zs, phases, kind.flag, kind.lam,
                                    work, hwork)

        dim = thetas.shape[0]
        cfg = base_cfg if base_cfg.max_evals is not None else SimplexConfig(
            alpha=base_cfg.alpha, gamma=base_cfg.gamma, rho=base_cfg.rho,
            sigma=base_cfg.sigma, f_tol=base_cfg.f_tol,
            max_evals=nm_evals_per_dim * dim, initial_step=base_cfg.initial_step)
        handle = ObjectiveHandle(objective)
        res = nelder_mead_minimize(handle, thetas, cfg)
        nm_total += res.n_evals
        thetas = np.mod(res.x, 2.0 * math.pi)
        kern.build_state(psi0_amps, step_xs, step_zs, step_phases, thetas, amps)
        pending = (op_id, theta, ls_cost, ls_n, res.fun, res.n_evals)


def _finish(converged, termination, steps, thetas, energy, variance, f_metric,
            ls_total, nm_total) -> TrialResult:
    ansatz = [(s.op_id, float(t)) for s, t in zip(steps, thetas)]
    return TrialResult(converged=converged, termination=termination, n_c=len(steps),
                       final_energy=energy, final_variance=variance, final_f=f_metric,
                       ansatz=ansatz, steps=steps, ls_evals=ls_total, nm_evals=nm_total)


def rebuild_state(psi0: QubitState, ansatz, pool: OperatorPool) -> QubitState:
    """Apply a recorded ansatz (op_id, theta) list to an initial state."""
    amps = psi0.amplitudes.copy()
    out = np.empty_like(amps)
    if not ansatz:
        return QubitState(amps)
    op_xs = np.array([pool[i].x_mask for i, _ in ansatz], dtype=np.uint64)
    op_zs = np.array([pool[i].z_mask for i, _ in ansatz], dtype=np.uint64)
    op_ph = np.array([pool[i].phase for i, _ in ansatz], dtype=np.complex128)
    th = np.array([t for _, t in ansatz], dtype=np.float64)
    kern.build_state(amps, op_xs, op_zs, op_ph, th, out)
    return QubitState(out)
