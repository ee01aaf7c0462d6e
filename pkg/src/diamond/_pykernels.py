"""Pure numpy fallback with the same contract as ``_ckernels``."""

import math

import numpy as np

DUP_TOL2 = 1e-28
_BLOCK_ELEMS = 1 << 20


def row_partials(pts, kind, s, threads):
    """Per-row upper-triangle sums; ``threads`` is accepted and ignored."""
    pts = np.ascontiguousarray(pts, dtype=float)
    n = len(pts)
    out = np.zeros(n)
    dup = -1
    block = max(1, _BLOCK_ELEMS // max(n, 1))
    for a in range(0, n, block):
        b = min(n, a + block)
        diff = pts[a:b, None, :] - pts[None, a:, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        for i in range(a, b):
            row = d2[i - a, i - a + 1 :]
            if row.size == 0:
                continue
            if dup < 0 and np.any(row < DUP_TOL2):
                dup = i
            row = row[row >= DUP_TOL2]
            vals = -0.5 * np.log(row) if kind == 0 else np.power(row, -0.5 * s)
            out[i] = math.fsum(vals)
    return out, dup
