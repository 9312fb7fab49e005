#!/usr/bin/env python3
"""Benchmark the compiled statevector kernels against the numpy fallback.

Times the three workloads that dominate a run: single Pauli rotations,
Hamiltonian application, and the fused ansatz-rebuild cost evaluation the
joint reoptimizer calls millions of times.  Also times one full adaptive
trial end to end on each backend.

Usage: python benchmarks/bench_kernels.py [--n-qubits 6] [--depth 75]
"""

import argparse
import time

import numpy as np

from vqex import ModelParams, build_mfim, build_pool, product_state, run_adaptive_trial
from vqex import _pykern

try:
    from vqex import _ckern
except ImportError:
    _ckern = None


def timeit(fn, min_seconds=0.4):
    fn()  # warm up
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / n
        n = max(n * 2, int(n * min_seconds / max(dt, 1e-9)))


def bench_backend(mod, n_qubits, depth, seed=0):
    h = build_mfim(ModelParams(n_qubits=n_qubits, h_x=0.8, h_z=0.5))
    coeffs, xs, zs, phases = h.arrays()
    pool = build_pool("maximal", n_qubits)
    pxs, pzs, pph = pool.arrays
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps = np.ascontiguousarray(amps / np.linalg.norm(amps))
    sel = rng.integers(0, len(pool), size=depth)
    ox, oz, oph = pxs[sel], pzs[sel], pph[sel]
    th = rng.uniform(0, 2 * np.pi, size=depth)
    work = np.empty_like(amps)
    hwork = np.empty_like(amps)

    rot = timeit(lambda: mod.rotate_inplace(work, int(ox[0]), int(oz[0]), oph[0], 0.3),
                 min_seconds=0.2)
    work[:] = amps
    ops = timeit(lambda: mod.apply_opsum(amps, coeffs, xs, zs, phases, hwork))
    fused = timeit(lambda: mod.ansatz_cost(amps, ox, oz, oph, th, coeffs, xs, zs,
                                           phases, 0, 0.0, work, hwork))
    return rot, ops, fused


def bench_trial(backend_name, n_qubits, seed=1):
    import os
    import subprocess
    import sys

    # run in a subprocess so the kernel dispatcher re-selects the backend
    code = (
        "import time, numpy as np\n"
        "from vqex import ModelParams, build_mfim, build_pool, product_state, run_adaptive_trial\n"
        "import vqex\n"
        f"h = build_mfim(ModelParams(n_qubits={n_qubits}, h_x=0.8, h_z=0.5))\n"
        f"pool = build_pool('maximal', {n_qubits})\n"
        f"rng = np.random.default_rng({seed})\n"
        f"psi0 = product_state(rng.uniform(0, 2 * np.pi, {n_qubits}))\n"
        "t0 = time.perf_counter()\n"
        "res = run_adaptive_trial(h, pool, psi0, delta=1e-4, n_max=40)\n"
        "print(f'{vqex.BACKEND} trial: {time.perf_counter() - t0:.2f}s, "
        "n_c={res.n_c}, converged={res.converged}')\n"
    )
    env = dict(os.environ)
    if backend_name == "python":
        env["VQEX_PURE_PYTHON"] = "1"
    else:
        env.pop("VQEX_PURE_PYTHON", None)
    subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-qubits", type=int, default=6)
    ap.add_argument("--depth", type=int, default=75)
    ap.add_argument("--skip-trial", action="store_true",
                    help="skip the end-to-end adaptive-trial timing")
    args = ap.parse_args()

    backends = [("python", _pykern)]
    if _ckern is not None:
        backends.insert(0, ("compiled", _ckern))

    print(f"N={args.n_qubits}, ansatz depth={args.depth}")
    print(f"{'backend':>9} | {'rotation':>10} | {'H apply':>10} | {'fused cost eval':>15}")
    results = {}
    for name, mod in backends:
        rot, ops, fused = bench_backend(mod, args.n_qubits, args.depth)
        results[name] = fused
        print(f"{name:>9} | {rot * 1e6:8.2f} us | {ops * 1e6:8.2f} us | {fused * 1e6:13.2f} us")
    if len(results) == 2:
        print(f"fused-eval speedup: {results['python'] / results['compiled']:.1f}x")
    if not args.skip_trial:
        for name, _ in backends:
            bench_trial(name, args.n_qubits)


if __name__ == "__main__":
    main()
