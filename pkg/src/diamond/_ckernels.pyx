# cython: language_level=3
"""Compiled pairwise-energy kernels.

Each row ``i`` accumulates ``phi(|x_i - x_j|)`` over ``j > i`` with
Neumaier compensation. Rows are independent, so the per-row partials do
not depend on how OpenMP schedules them; the caller reduces them in a
fixed order.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport log, pow, fabs

cnp.import_array()

cdef double DUP_TOL2 = 1e-28


def row_partials(const double[:, ::1] pts, int kind, double s, int threads):
    """Per-row upper-triangle sums.

    kind 0: -log|x_i - x_j|; kind 1: |x_i - x_j|^(-s).
    Returns ``(partials, duplicate_row)`` where ``duplicate_row`` is -1
    if no pair was closer than 1e-14.
    """
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, comp, tt, dx, dy, dz, d2, v, half_s = -0.5 * s
    out_arr = np.zeros(n, dtype=np.float64)
    dup_arr = np.zeros(n, dtype=np.int8)
    cdef double[::1] out = out_arr
    cdef signed char[::1] dup = dup_arr
    if threads < 1:
        threads = 1

    for i in prange(n, nogil=True, schedule="dynamic", chunksize=8, num_threads=threads):
        acc = 0.0
        comp = 0.0
        for j in range(i + 1, n):
            dx = pts[i, 0] - pts[j, 0]
            dy = pts[i, 1] - pts[j, 1]
            dz = pts[i, 2] - pts[j, 2]
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < DUP_TOL2:
                dup[i] = 1
                continue
            if kind == 0:
                v = -0.5 * log(d2)
            else:
                v = pow(d2, half_s)
            # Neumaier step
            tt = acc + v
            if fabs(acc) >= fabs(v):
                comp = comp + ((acc - tt) + v)
            else:
                comp = comp + ((v - tt) + acc)
            acc = tt
        out[i] = acc + comp

    hit = np.flatnonzero(dup_arr)
    return out_arr, (int(hit[0]) if hit.size else -1)
