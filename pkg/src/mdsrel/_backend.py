"""Selects the kernel implementation at import time.

The compiled Cython extension is preferred; the numpy implementation in
_kernels_py is the fallback.  Set MDSREL_PURE_PYTHON=1 to force the
fallback (the benchmark suite uses this to compare the two).
"""

import os

_force_py = os.environ.get("MDSREL_PURE_PYTHON", "").lower() in {"1", "true", "yes"}

if _force_py:
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name() -> str:
    """'compiled' when the Cython kernels are active, 'python' otherwise."""
    return kernels.name


log_binom_tails = kernels.log_binom_tails
log_binom_tails_grid = kernels.log_binom_tails_grid
uniform_matrix = kernels.uniform_matrix
sim_chunk_powerlaw = kernels.sim_chunk_powerlaw
