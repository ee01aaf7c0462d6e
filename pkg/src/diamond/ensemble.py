"""Parallel layouts and random-phase point sets on the unit sphere.

Heights of optimal layouts are kept as exact integer numerators
``u_j = 1 + r_j + 2 * sum_{k<j} r_k`` over the denominator ``N - 1``, so
that ``1 - z_j = u_j / (N - 1)`` and ``1 + z_j = (2(N - 1) - u_j) / (N - 1)``
never go through a floating-point subtraction from 1.

Phases come from numpy's PCG64 seeded through ``SeedSequence``; the
identifier :data:`GENERATOR_ID` is written into every export.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .profile import IntegerOverflow, MAX_POINTS, Profile, total_points, validate

__all__ = [
    "GENERATOR_ID",
    "LayoutError",
    "EmptyCounts",
    "OutOfPiece",
    "ParallelLayout",
    "PointSet",
    "optimal_heights",
    "with_heights",
    "layout_from_profile",
    "height_numerator",
    "height_polynomial",
    "derive_seed",
    "draw_phases",
    "sample",
    "points_to_csv",
    "write_pointset",
    "read_points_csv",
    "MalformedCsv",
    "NonUnitPoint",
]

GENERATOR_ID = "numpy-PCG64/SeedSequence; theta=2*pi*random() (53-bit)"


class LayoutError(ValueError):
    pass


class EmptyCounts(LayoutError):
    pass


class OutOfPiece(ValueError):
    pass


class MalformedCsv(ValueError):
    pass


class NonUnitPoint(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ParallelLayout:
    """Per-parallel counts and heights.

    Exactly one of ``numerators`` (optimal layouts) and ``free_heights``
    (arbitrary strictly decreasing heights) is set.
    """

    counts: np.ndarray
    numerators: np.ndarray | None = None
    free_heights: np.ndarray | None = None
    profile: Profile | None = field(default=None, compare=False)

    @property
    def p(self) -> int:
        return len(self.counts)

    @property
    def N(self) -> int:
        return 2 + int(sum(int(r) for r in self.counts))

    @property
    def is_optimal(self) -> bool:
        return self.numerators is not None

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.counts, self.counts[::-1]))

    @property
    def z(self) -> np.ndarray:
        if self.numerators is None:
            return self.free_heights.copy()
        d = self.N - 1
        # (d - u) is exact in int64; one rounding on division
        return (d - self.numerators) / d

    def heights_exact(self) -> list[Fraction]:
        if self.numerators is None:
            return [Fraction(float(z)) for z in self.free_heights]
        d = self.N - 1
        return [Fraction(d - int(u), d) for u in self.numerators]

    @property
    def log_one_minus_z(self) -> np.ndarray:
        if self.numerators is None:
            return np.log1p(-self.free_heights)
        return np.log(self.numerators.astype(float)) - math.log(self.N - 1)

    @property
    def log_one_plus_z(self) -> np.ndarray:
        if self.numerators is None:
            return np.log1p(self.free_heights)
        d = self.N - 1
        return np.log((2 * d - self.numerators).astype(float)) - math.log(d)

    @property
    def one_minus_z(self) -> np.ndarray:
        if self.numerators is None:
            return 1.0 - self.free_heights
        return self.numerators / (self.N - 1)

    @property
    def one_plus_z(self) -> np.ndarray:
        if self.numerators is None:
            return 1.0 + self.free_heights
        d = self.N - 1
        return (2 * d - self.numerators) / d

    @property
    def radii(self) -> np.ndarray:
        """sqrt(1 - z_j^2), formed from factors that never cancel."""
        if self.numerators is None:
            return np.sqrt((1.0 - self.free_heights) * (1.0 + self.free_heights))
        d = self.N - 1
        u = self.numerators.astype(float)
        return np.sqrt(u) * np.sqrt(2.0 * d - u) / d


def _check_counts(counts: Sequence[int]) -> np.ndarray:
    if len(counts) == 0:
        raise EmptyCounts("at least one parallel is required")
    arr = np.asarray([int(r) for r in counts], dtype=np.int64)
    if np.any(arr < 1):
        raise LayoutError(f"every parallel needs r_j >= 1, got {list(arr)}")
    if 2 + sum(int(r) for r in counts) > MAX_POINTS:
        raise IntegerOverflow("total point count exceeds the supported integer width")
    return arr


def optimal_heights(counts: Sequence[int], profile: Profile | None = None) -> ParallelLayout:
    """Layout with the energy-minimizing heights for the given counts."""
    arr = _check_counts(counts)
    before = np.concatenate(([0], np.cumsum(arr)[:-1]))
    u = 1 + arr + 2 * before
    return ParallelLayout(counts=arr, numerators=u, profile=profile)


def with_heights(counts: Sequence[int], heights: Sequence[float]) -> ParallelLayout:
    """Layout with user-supplied, strictly decreasing heights in (-1, 1)."""
    arr = _check_counts(counts)
    z = np.asarray(heights, dtype=float)
    if z.shape != arr.shape:
        raise LayoutError(f"{len(arr)} counts but {z.size} heights")
    if np.any(np.abs(z) >= 1.0) or not np.all(np.isfinite(z)):
        raise LayoutError("heights must lie in (-1, 1)")
    if np.any(np.diff(z) >= 0):
        raise LayoutError("heights must be strictly decreasing")
    return ParallelLayout(counts=arr, free_heights=z)


def layout_from_profile(profile: Profile) -> ParallelLayout:
    validate(profile)
    layout = optimal_heights(profile.counts(), profile=profile)
    assert layout.N == total_points(profile)
    return layout


def _partial_before(profile: Profile, t: int) -> int:
    """Sum of r_j for 1 <= j <= t - 1 (N_l in the height formula)."""
    return sum(profile.r(j) for j in range(1, t))


def height_numerator(profile: Profile, ell: int, x: float) -> float:
    """u_l(x) = (N - 1)(1 - z_l(x)), the quadratic interpolating u_j on piece ``ell``."""
    t0, t1 = profile.knots[ell], profile.knots[ell + 1]
    if not t0 <= x <= t1:
        raise OutOfPiece(f"x={x} outside piece {ell} = [{t0}, {t1}]")
    a, b = profile.pieces[ell]
    n_before = _partial_before(profile, t0)
    return 1 + 2 * n_before - (a + b * x) + 2 * a * (x - t0 + 1) + b * (x + t0) * (x - t0 + 1)


def height_polynomial(profile: Profile, ell: int, x: float) -> float:
    """Continuous height z_l(x) on piece ``ell``; agrees with z_j at integers."""
    d = total_points(profile) - 1
    return (d - height_numerator(profile, ell, x)) / d


@dataclass(frozen=True, eq=False)
class PointSet:
    """Sampled points, north pole first, then parallels top-down, south pole last."""

    points: np.ndarray
    phases: np.ndarray
    layout: ParallelLayout
    seed: int

    def __len__(self) -> int:
        return len(self.points)

    def parallel_slices(self) -> list[slice]:
        out, start = [], 1
        for r in self.layout.counts:
            out.append(slice(start, start + int(r)))
            start += int(r)
        return out

    def metadata(self) -> dict:
        prof = self.layout.profile
        return {
            "seed": int(self.seed),
            "generator_id": GENERATOR_ID,
            "profile": None if prof is None else {"name": prof.name, **prof.to_dict()},
            "N": len(self.points),
            "p": self.layout.p,
            "phases": [float(t) for t in self.phases],
        }


def derive_seed(base_seed: int, k: int) -> int:
    """Seed of the k-th child stream of ``base_seed``.

    Uses ``SeedSequence(base_seed, spawn_key=(k,))``, the same child that
    ``SeedSequence(base_seed).spawn`` hands out at position ``k``.
    """
    ss = np.random.SeedSequence(int(base_seed), spawn_key=(int(k),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def draw_phases(p: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    return 2.0 * np.pi * rng.random(p)


def sample(layout: ParallelLayout, seed: int) -> PointSet:
    """Rotate each parallel's roots of unity by an independent uniform phase."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    phases = draw_phases(layout.p, seed)
    z = layout.z
    radii = layout.radii
    pts = np.empty((layout.N, 3))
    pts[0] = (0.0, 0.0, 1.0)
    pts[-1] = (0.0, 0.0, -1.0)
    row = 1
    for j, r in enumerate(layout.counts):
        r = int(r)
        ang = 2.0 * np.pi * np.arange(1, r + 1) / r + phases[j]
        blk = pts[row : row + r]
        blk[:, 0] = radii[j] * np.cos(ang)
        blk[:, 1] = radii[j] * np.sin(ang)
        blk[:, 2] = z[j]
        row += r
    return PointSet(points=pts, phases=phases, layout=layout, seed=seed)


def points_to_csv(points: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("x,y,z\n")
    for x, y, z in points:
        buf.write(f"{x:.17g},{y:.17g},{z:.17g}\n")
    return buf.getvalue()


def write_pointset(ps: PointSet, csv_path, meta_path=None) -> None:
    with open(csv_path, "w", newline="") as fh:
        fh.write(points_to_csv(ps.points))
    if meta_path is not None:
        with open(meta_path, "w") as fh:
            json.dump(ps.metadata(), fh, indent=2)
            fh.write("\n")


def read_points_csv(path, unit_tol: float = 1e-6) -> np.ndarray:
    """Read an ``x,y,z`` CSV of unit vectors."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCsv(f"{path}: empty file") from None
        if [h.strip() for h in header] != ["x", "y", "z"]:
            raise MalformedCsv(f"{path}: expected header x,y,z, got {header}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 3:
                raise MalformedCsv(f"{path}:{lineno}: expected 3 fields, got {len(rec)}")
            try:
                vals = [float(v) for v in rec]
            except ValueError:
                raise MalformedCsv(f"{path}:{lineno}: non-numeric field in {rec}") from None
            if not all(math.isfinite(v) for v in vals):
                raise MalformedCsv(f"{path}:{lineno}: non-finite value in {rec}")
            rows.append(vals)
    pts = np.array(rows, dtype=float).reshape(-1, 3)
    norms = np.linalg.norm(pts, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > unit_tol)
    if bad.size:
        raise NonUnitPoint(f"{path}: row {bad[0] + 2} has norm {norms[bad[0]]!r}")
    return pts
