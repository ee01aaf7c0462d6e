"""Point-cloud energies and closed-form expected energies of layouts.

All energies sum over ordered pairs ``i != j``, so every unordered pair
is counted twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import ParallelLayout, PointSet
from .kernels import LOG, RIESZ, DuplicatePoints, pair_sum

__all__ = [
    "DuplicatePoints",
    "EnergyBreakdown",
    "NotSymmetric",
    "NotOptimalHeights",
    "riesz_energy",
    "log_energy",
    "roots_of_unity_energy",
    "expected_cross_pair",
    "expected_energy_general",
    "expected_energy_single_sum",
    "expected_energy_symmetric",
    "sampled_breakdown",
]

LOG2 = math.log(2.0)


class NotSymmetric(ValueError):
    pass


class NotOptimalHeights(ValueError):
    pass


@dataclass(frozen=True)
class EnergyBreakdown:
    """Pole terms (A), intra-parallel terms (B), cross-parallel terms (C)."""

    pole_terms: float
    intra_parallel: float
    cross_parallel: float
    total: float
    N: int
    p: int

    def to_dict(self) -> dict:
        return {
            "A": self.pole_terms,
            "B": self.intra_parallel,
            "C": self.cross_parallel,
            "total": self.total,
            "N": self.N,
            "p": self.p,
        }


def riesz_energy(points, s: float, *, threads=None, backend=None) -> float:
    if not s > 0:
        raise ValueError(f"Riesz exponent must be positive, got {s}")
    return 2.0 * pair_sum(points, RIESZ, s, threads=threads, backend=backend)


def log_energy(points, *, threads=None, backend=None) -> float:
    return 2.0 * pair_sum(points, LOG, threads=threads, backend=backend)


def roots_of_unity_energy(n: int, radius: float = 1.0) -> float:
    """Log energy of ``n`` equally spaced points on a circle of given radius."""
    if n < 2:
        raise ValueError("need at least two points")
    return -n * math.log(n) - n * (n - 1) * math.log(radius)


def expected_cross_pair(z_i: float, z_j: float) -> float:
    """Mean of -log|x - y| for x, y uniform on the parallels at z_i and z_j.

    ``1 - z_i z_j + |z_i - z_j|`` factors as ``(1 + max)(1 - min)``; the
    factored form is continuous at ``z_i == z_j`` and avoids cancellation.
    """
    hi, lo = (z_i, z_j) if z_i >= z_j else (z_j, z_i)
    return -0.5 * (math.log1p(hi) + math.log1p(-lo))


def _check_layout(layout: ParallelLayout) -> None:
    if layout.numerators is None:
        z = layout.free_heights
        if np.any(np.diff(z) >= 0) or np.any(np.abs(z) >= 1):
            raise ValueError("heights must be strictly decreasing in (-1, 1)")


def expected_energy_general(layout: ParallelLayout) -> EnergyBreakdown:
    """Expected log energy over independent uniform phases, split as A + B + C.

    C runs over pairs of distinct parallels only; for ``j < k`` the pair
    term factors into ``log(1 + z_j) + log(1 - z_k)``, which makes C a
    pair of prefix/suffix sums.
    """
    _check_layout(layout)
    r = layout.counts.astype(float)
    lm, lp = layout.log_one_minus_z, layout.log_one_plus_z
    log_rad2 = lm + lp

    A = math.fsum([-2.0 * LOG2, *(-r * (2.0 * LOG2 + log_rad2))])
    B = -math.fsum([*(r * np.log(r)), *(0.5 * r * (r - 1.0) * log_rad2)])

    after = np.concatenate((np.cumsum(r[::-1])[::-1][1:], [0.0]))
    before = np.concatenate(([0.0], np.cumsum(r)[:-1]))
    C = -math.fsum([*(r * lp * after), *(r * lm * before)])

    return EnergyBreakdown(A, B, C, math.fsum([A, B, C]), layout.N, layout.p)


def expected_energy_single_sum(layout: ParallelLayout) -> float:
    """Same expectation via the single expression with a full p x p double sum.

    Deliberately literal: heights as floats and the pair argument
    ``1 - z_j z_k + |z_j - z_k|`` formed directly, so that it checks
    :func:`expected_energy_general` along an independent path.
    """
    _check_layout(layout)
    r = layout.counts.astype(float)
    z = layout.z
    zi, zj = z[:, None], z[None, :]
    pair = np.log(1.0 - zi * zj + np.abs(zi - zj))
    double = (r[:, None] * r[None, :] * 0.5 * pair).ravel()
    single = -r * (np.log(4.0) + 0.5 * np.log(1.0 - z * z) + np.log(r))
    return math.fsum([-2.0 * LOG2, *single, *(-double)])


def expected_energy_symmetric(layout: ParallelLayout) -> float:
    """Expected log energy of a symmetric layout with optimal heights.

    Uses the half-sum form over ``j = 1..M``, which needs O(p) work and
    only the exact height numerators.
    """
    if layout.numerators is None:
        raise NotOptimalHeights("layout heights are not the optimal ones")
    if layout.p % 2 != 1 or not layout.is_symmetric:
        raise NotSymmetric("counts must satisfy r_j = r_{p+1-j} with p odd")
    N = layout.N
    d = N - 1
    M = (layout.p + 1) // 2
    r = layout.counts[:M].astype(float)
    u = layout.numerators[:M].astype(float)
    v = 2.0 * d - u
    log_d = math.log(d)
    lm = np.log(u) - log_d
    lp = np.log(v) - log_d
    rM = r[-1]
    terms = [
        -d * 2.0 * LOG2,
        rM * math.log(rM),
        *(-2.0 * r * np.log(r)),
        # (N - 1) r_j (1 - z_j) = r_j u_j exactly
        *(-r * u * lm),
        *(-r * v * lp),
    ]
    return math.fsum(terms)


def sampled_breakdown(ps: PointSet, *, threads=None, backend=None) -> EnergyBreakdown:
    """Split the actual log energy of one realization into A, B and C.

    A: every pair involving a pole; B: pairs inside one parallel;
    C: the remainder (pairs on distinct parallels).
    """
    pts = ps.points
    total = log_energy(pts, threads=threads, backend=backend)
    body = pts[1:-1]
    poles = pts[[0, -1]]
    d_pole = np.linalg.norm(body[:, None, :] - poles[None, :, :], axis=2)
    if np.any(d_pole < 1e-14):
        raise DuplicatePoints("a parallel point coincides with a pole")
    A = math.fsum([-2.0 * math.log(np.linalg.norm(poles[0] - poles[1])), *(-2.0 * np.log(d_pole).ravel())])
    B = math.fsum(
        log_energy(pts[sl], threads=threads, backend=backend) for sl in ps.parallel_slices() if sl.stop - sl.start > 1
    )
    C = total - A - B
    return EnergyBreakdown(A, B, C, total, len(pts), ps.layout.p)
