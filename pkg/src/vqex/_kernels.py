"""Kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the pure-numpy
fallback.  ``VQEX_PURE_PYTHON=1`` forces the fallback; ``BACKEND`` reports
what was picked so callers (and the benchmark) can verify.
"""

import os

if os.environ.get("VQEX_PURE_PYTHON"):
    from . import _pykern as impl

    BACKEND = "python"
else:
    try:
        from . import _ckern as impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykern as impl

        BACKEND = "python"

apply_pauli = impl.apply_pauli
rotate_inplace = impl.rotate_inplace
apply_opsum = impl.apply_opsum
h_moments = impl.h_moments
build_state = impl.build_state
ansatz_cost = impl.ansatz_cost
