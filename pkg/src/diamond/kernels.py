"""Backend selection for the pairwise energy kernels.

The compiled extension is used when it imports; set
``DIAMOND_PURE_PYTHON=1`` to force the numpy fallback.
``DIAMOND_THREADS`` caps the OpenMP thread count of the compiled kernel.
"""

import math
import os

import numpy as np

from . import _pykernels

_c = None
if not os.environ.get("DIAMOND_PURE_PYTHON"):
    try:
        from . import _ckernels as _c
    except ImportError:  # pragma: no cover - depends on build
        _c = None

BACKEND = "cython" if _c is not None else "python"
BACKENDS = {"python": _pykernels}
if _c is not None:
    BACKENDS["cython"] = _c

LOG, RIESZ = 0, 1


class DuplicatePoints(ValueError):
    pass


def default_threads() -> int:
    env = os.environ.get("DIAMOND_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def pair_sum(points, kind=LOG, s=0.0, *, threads=None, backend=None):
    """Sum of the pair kernel over unordered pairs ``i < j``.

    Per-row partials are combined with ``math.fsum`` in row order, so the
    result does not depend on the thread count.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) array, got shape {pts.shape}")
    impl = BACKENDS[backend] if backend else (_c or _pykernels)
    partials, dup = impl.row_partials(pts, int(kind), float(s), int(threads or default_threads()))
    if dup >= 0:
        raise DuplicatePoints(f"point {dup} coincides with a later point (distance < 1e-14)")
    return math.fsum(partials)
