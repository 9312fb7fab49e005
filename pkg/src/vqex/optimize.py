"""Derivative-free optimizers with exact evaluation accounting.

Two routines, matching how the adaptive loop uses them: a one-parameter
minimizer over the periodic angle domain [0, 2pi) (coarse grid, then
golden-section refinement between the bracketing neighbors), and a standard
Nelder-Mead simplex for the joint reoptimization of all angles.  Both are
fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class ObjectiveHandle:
    """Wraps an evaluator and counts evaluations, one tick per call."""

    __slots__ = ("_fn", "n_evals")

    def __init__(self, fn: Callable):
        self._fn = fn
        self.n_evals = 0

    def __call__(self, x):
        self.n_evals += 1
        return self._fn(x)


def periodic_line_minimize(f: Callable[[float], float], *, grid_points: int = 16,
                           tol: float = 1e-6) -> tuple[float, float]:
    """Minimize ``f`` over [0, 2pi).

    A uniform scan of ``grid_points`` angles locates the best bracket; a
    golden-section search then refines between its two neighbors down to an
    angle width of ``tol``.  The landscape along one Pauli rotation is a
    low-degree trigonometric polynomial, so the scan guards against the
    multimodality a bare golden section cannot handle.  Never returns a
    point worse than the best scanned one.
    """
    if grid_points < 3:
        raise ValueError("need at least 3 grid points")
    h = TWO_PI / grid_points
    grid = [g * h for g in range(grid_points)]
    values = [f(t) for t in grid]
    g_best = min(range(grid_points), key=values.__getitem__)
    best_t, best_v = grid[g_best], values[g_best]

    # golden section inside the (possibly wrapping) bracket around g_best
    a = best_t - h
    b = best_t + h
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c % TWO_PI)
    fd = f(d % TWO_PI)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c % TWO_PI)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d % TWO_PI)
    for t, v in ((c % TWO_PI, fc), (d % TWO_PI, fd)):
        if v < best_v:
            best_t, best_v = t, v
    return best_t, best_v


@dataclass(frozen=True)
class SimplexConfig:
    """Standard Nelder-Mead coefficients plus termination controls.

    Termination needs the cost spread (worst minus best vertex) below
    ``f_tol`` and the coordinate spread below ``x_tol``: cost spread alone
    is fooled by vertices placed symmetrically around a minimum.
    ``max_evals`` caps objective evaluations (None means uncapped);
    ``initial_step`` is the absolute per-coordinate displacement building
    the first simplex.
    """

    alpha: float = 1.0
    gamma: float = 2.0
    rho: float = 0.5
    sigma: float = 0.5
    f_tol: float = 1e-10
    x_tol: float = 1e-8
    max_evals: int | None = None
    initial_step: float = 0.1

    def __post_init__(self):
        if not (self.alpha > 0 and self.gamma > 1 and 0 < self.rho < 1 and 0 < self.sigma < 1):
            raise ValueError("simplex coefficients out of range")


class NMResult(NamedTuple):
    x: np.ndarray
    fun: float
    n_evals: int
    exhausted: bool


def nelder_mead_minimize(f: Callable, x0, cfg: SimplexConfig = SimplexConfig()) -> NMResult:
    """Nelder-Mead simplex descent from ``x0``.

    Terminates when the simplex cost spread drops below ``cfg.f_tol`` or the
    evaluation budget runs out (``exhausted`` flags the latter; the best
    point found is returned either way).  ``n_evals`` counts objective calls
    exactly.  A 1-dimensional input degenerates to a 2-point simplex.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=np.float64))
    dim = x0.shape[0]
    budget = math.inf if cfg.max_evals is None else int(cfg.max_evals)

    n_evals = 0

    def call(x):
        nonlocal n_evals
        n_evals += 1
        return float(f(x))

    verts = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        verts[i + 1, i] += cfg.initial_step
    costs = np.empty(dim + 1)
    for i in range(dim + 1):
        if n_evals >= budget:
            # budget smaller than the initial simplex: score the rest as the
            # worst seen so the sort below still works
            costs[i:] = np.inf
            break
        costs[i] = call(verts[i])

    while True:
        order = np.argsort(costs, kind="stable")
        verts = verts[order]
        costs = costs[order]
        if costs[-1] - costs[0] < cfg.f_tol and \
                np.max(np.abs(verts[1:] - verts[0])) < cfg.x_tol:
            return NMResult(verts[0].copy(), costs[0], n_evals, False)
        if n_evals >= budget:
            return NMResult(verts[0].copy(), costs[0], n_evals, True)

        centroid = verts[:-1].mean(axis=0)
        xr = centroid + cfg.alpha * (centroid - verts[-1])
        fr = call(xr)
        if fr < costs[0]:
            if n_evals < budget:
                xe = centroid + cfg.gamma * (xr - centroid)
                fe = call(xe)
                if fe < fr:
                    verts[-1], costs[-1] = xe, fe
                    continue
            verts[-1], costs[-1] = xr, fr
            continue
        if fr < costs[-2]:
            verts[-1], costs[-1] = xr, fr
            continue
        if n_evals >= budget:
            continue  # loop head returns exhausted with current best
        if fr < costs[-1]:
            xc = centroid + cfg.rho * (xr - centroid)  # outside contraction
            fc = call(xc)
            if fc <= fr:
                verts[-1], costs[-1] = xc, fc
                continue
        else:
            xc = centroid - cfg.rho * (centroid - verts[-1])  # inside contraction
            fc = call(xc)
            if fc < costs[-1]:
                verts[-1], costs[-1] = xc, fc
                continue
        for i in range(1, dim + 1):  # shrink toward the best vertex
            if n_evals >= budget:
                break
            verts[i] = verts[0] + cfg.sigma * (verts[i] - verts[0])
            costs[i] = call(verts[i])
