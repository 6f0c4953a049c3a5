"""Backend selection for the lattice-sum hot loops.

The numba implementation is used when importable; set LAMELLAR_FORCE_NUMPY=1
to force the pure-numpy path (same contracts, vectorized over image chunks).
benchmarks/bench_kernels.py times the two side by side.
"""

import os

FORCE_NUMPY = os.environ.get("LAMELLAR_FORCE_NUMPY", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

if not FORCE_NUMPY:
    try:
        from . import _lattice_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _lattice_numpy as _impl

        BACKEND = "numpy"
else:
    from . import _lattice_numpy as _impl

    BACKEND = "numpy"

em_tail = _impl.em_tail
zeta_tail = _impl.zeta_tail
point_sum = _impl.point_sum
phi_sum = _impl.phi_sum
f_sum = _impl.f_sum
