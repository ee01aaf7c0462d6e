"""Piecewise-linear parallel population functions r(x).

A profile stores the half ``[0, M]`` of a continuous, piecewise-linear
function with integer knots and integer coefficients. The other half is
its mirror image, ``r(x) = r(2M - x)``, and parallel ``j`` (for
``1 <= j <= 2M - 1``) carries ``r(j)`` points.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Any

__all__ = [
    "Profile",
    "ProfileError",
    "NonIntegerKnot",
    "BadKnots",
    "DiscontinuousAtKnot",
    "NonPositiveFirstSlope",
    "NegativeCoefficient",
    "EmptyParallel",
    "OutOfRange",
    "IntegerOverflow",
    "BadSpec",
    "MAX_POINTS",
    "validate",
    "eval_r",
    "total_points",
    "builtin_simple",
    "builtin_elaborated",
    "builtin_quasioptimal",
    "heuristic_r",
    "lint",
    "parse_spec",
]

# heights are stored as int64 numerators over N - 1, and u_j < 2(N - 1)
MAX_POINTS = 2**62


class ProfileError(ValueError):
    """Base class for invalid profiles."""


class NonIntegerKnot(ProfileError):
    pass


class BadKnots(ProfileError):
    pass


class DiscontinuousAtKnot(ProfileError):
    pass


class NonPositiveFirstSlope(ProfileError):
    pass


class NegativeCoefficient(ProfileError):
    pass


class EmptyParallel(ProfileError):
    pass


class OutOfRange(IndexError):
    pass


class IntegerOverflow(OverflowError):
    pass


class BadSpec(ValueError):
    """Unparseable or out-of-domain profile spec string."""


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class Profile:
    """Half of a symmetric piecewise-linear population function.

    ``pieces[l] = (alpha, beta)`` gives ``r(x) = alpha + beta * x`` on
    ``[knots[l], knots[l + 1]]``.
    """

    M: int
    knots: tuple[int, ...]
    pieces: tuple[tuple[int, int], ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "knots", tuple(self.knots))
        object.__setattr__(self, "pieces", tuple(tuple(pc) for pc in self.pieces))

    @property
    def p(self) -> int:
        return 2 * self.M - 1

    @property
    def n(self) -> int:
        return len(self.pieces)

    def piece_index(self, x: float) -> int:
        """Index of the first piece whose closed interval contains ``x``."""
        for ell in range(self.n):
            if self.knots[ell] <= x <= self.knots[ell + 1]:
                return ell
        raise OutOfRange(f"x={x} outside [0, {self.M}]")

    def r(self, x: float) -> float:
        """Evaluate r on the stored half, at real ``x`` in ``[0, M]``."""
        a, b = self.pieces[self.piece_index(x)]
        return a + b * x

    def counts(self) -> list[int]:
        """All parallel counts ``r_1, ..., r_{2M-1}``."""
        half = [eval_r(self, j) for j in range(1, self.M + 1)]
        return half + half[-2::-1]

    def to_dict(self) -> dict:
        return {"M": self.M, "knots": list(self.knots), "pieces": [list(pc) for pc in self.pieces]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict, name: str = "custom") -> "Profile":
        try:
            prof = cls(M=d["M"], knots=d["knots"], pieces=d["pieces"], name=d.get("name", name))
        except (KeyError, TypeError) as exc:
            raise ProfileError(f"malformed profile document: {exc}") from exc
        validate(prof)
        return prof

    @classmethod
    def from_json(cls, text: str) -> "Profile":
        return cls.from_dict(json.loads(text))


def validate(profile: Profile) -> None:
    """Raise the first violated invariant, or return None."""
    M, knots, pieces = profile.M, profile.knots, profile.pieces
    if not _is_int(M) or M < 1:
        raise BadKnots(f"M must be a positive integer, got {M!r}")
    for t in knots:
        if not _is_int(t):
            raise NonIntegerKnot(f"knot {t!r} is not an integer")
    if len(knots) < 2 or knots[0] != 0 or knots[-1] != M:
        raise BadKnots(f"knots must run from 0 to M={M}, got {knots}")
    if any(b <= a for a, b in zip(knots, knots[1:])):
        raise BadKnots(f"knots must be strictly increasing, got {knots}")
    if len(pieces) != len(knots) - 1:
        raise BadKnots(f"{len(knots)} knots need {len(knots) - 1} pieces, got {len(pieces)}")
    for ell, pc in enumerate(pieces):
        if len(pc) != 2 or not all(_is_int(v) for v in pc):
            raise NonIntegerKnot(f"piece {ell} coefficients {pc!r} are not integers")
        if pc[0] < 0 or pc[1] < 0:
            raise NegativeCoefficient(f"piece {ell} has a negative coefficient {pc}")

    alpha1, beta1 = pieces[0]
    if alpha1 != 0 or beta1 <= 0:
        raise NonPositiveFirstSlope(f"first piece must be 0 + beta*x with beta > 0, got {pieces[0]}")

    for ell in range(len(pieces) - 1):
        t = knots[ell + 1]
        left = pieces[ell][0] + pieces[ell][1] * t
        right = pieces[ell + 1][0] + pieces[ell + 1][1] * t
        if left != right:
            raise DiscontinuousAtKnot(f"r jumps from {left} to {right} at x={t}")

    # nonnegative slopes make r nondecreasing, so checking every j is cheap insurance
    for ell, (a, b) in enumerate(pieces):
        lo = max(knots[ell], 1)
        if a + b * lo < 1:
            raise EmptyParallel(f"parallel j={lo} would carry no points")

    if _half_sum(profile) * 2 > MAX_POINTS:
        raise IntegerOverflow("total point count does not fit the supported integer width")


def _half_sum(profile: Profile) -> int:
    """Exact sum of r(j) for j = 1..M (arithmetic series per piece)."""
    total = 0
    for ell, (a, b) in enumerate(profile.pieces):
        lo, hi = profile.knots[ell] + 1, profile.knots[ell + 1]
        cnt = hi - lo + 1
        total += a * cnt + b * (lo + hi) * cnt // 2
    return total


def eval_r(profile: Profile, j: int) -> int:
    """Number of points on parallel ``j``, for ``1 <= j <= 2M - 1``."""
    M = profile.M
    if not 1 <= j <= 2 * M - 1:
        raise OutOfRange(f"parallel index {j} outside [1, {2 * M - 1}]")
    if j > M:
        j = 2 * M - j
    a, b = profile.pieces[profile.piece_index(j)]
    return a + b * j


def total_points(profile: Profile) -> int:
    """N = 2 + sum of all r_j, in exact integer arithmetic."""
    half = _half_sum(profile)
    r_m = profile.pieces[-1][0] + profile.pieces[-1][1] * profile.M
    n = 2 + 2 * half - r_m
    if n > MAX_POINTS:
        raise IntegerOverflow(f"N={n} exceeds {MAX_POINTS}")
    return n


def _positive_int(name: str, value: Any) -> int:
    if not _is_int(value) or value < 1:
        raise BadSpec(f"{name} must be a positive integer, got {value!r}")
    return value


def builtin_simple(K: int, M: int) -> Profile:
    """r(x) = K x on [0, M]; N = 2 + K M^2."""
    K, M = _positive_int("K", K), _positive_int("M", M)
    prof = Profile(M=M, knots=(0, M), pieces=((0, K),), name=f"simple:K={K},M={M}")
    validate(prof)
    return prof


def builtin_elaborated(m: int) -> Profile:
    """Three-piece profile with M = 4m and N = 82 m^2 + 2."""
    m = _positive_int("m", m)
    prof = Profile(
        M=4 * m,
        knots=(0, 2 * m, 3 * m, 4 * m),
        pieces=((0, 6), (6 * m, 3), (12 * m, 1)),
        name=f"elaborated:m={m}",
    )
    validate(prof)
    return prof


def builtin_quasioptimal(m: int) -> Profile:
    """Six-piece profile with M = 7m and N = 239 m^2 + 2."""
    m = _positive_int("m", m)
    prof = Profile(
        M=7 * m,
        knots=tuple(k * m for k in (0, 2, 3, 4, 5, 6, 7)),
        pieces=((0, 6), (2 * m, 5), (5 * m, 4), (9 * m, 3), (14 * m, 2), (20 * m, 1)),
        name=f"quasioptimal:m={m}",
    )
    validate(prof)
    return prof


def heuristic_r(K0: float, p: int, j: float) -> float:
    """Real-valued reference population of parallel ``j`` out of ``p``."""
    return K0 * math.pi * math.sin(j * math.pi / (p + 1)) / math.sin(math.pi / (2 * (p + 1)))


def lint(profile: Profile) -> dict:
    """Smallest A and largest c for which the asymptotic hypotheses hold.

    The asymptotic expansion assumes ``alpha_l <= A M``, ``beta_l <= A``
    with ``A >= 2`` and ``t_1 >= c M``. These are not validity conditions.
    """
    M = profile.M
    A = max(
        2.0,
        max(a / M for a, _ in profile.pieces),
        float(max(b for _, b in profile.pieces)),
    )
    return {"A": A, "c": profile.knots[1] / M}


_BUILTINS = {
    "simple": (builtin_simple, ("K", "M")),
    "elaborated": (builtin_elaborated, ("m",)),
    "quasioptimal": (builtin_quasioptimal, ("m",)),
}

_SPEC_RE = re.compile(r"^([a-z]+):(.+)$")


def parse_params(text: str) -> dict[str, int]:
    params: dict[str, int] = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not re.fullmatch(r"[+-]?\d+", value):
            raise BadSpec(f"bad parameter {item!r}; expected key=integer")
        if key in params:
            raise BadSpec(f"duplicate parameter {key!r}")
        params[key] = int(value)
    return params


def parse_spec(spec: str) -> Profile:
    """Build a profile from ``name:key=value[,key=value]``.

    Accepted forms: ``simple:K=4,M=20``, ``elaborated:m=4``,
    ``quasioptimal:m=2``.
    """
    match = _SPEC_RE.match(spec.strip())
    if not match:
        raise BadSpec(f"cannot parse profile spec {spec!r}")
    name, rest = match.groups()
    if name not in _BUILTINS:
        raise BadSpec(f"unknown profile {name!r}; choose from {sorted(_BUILTINS)}")
    factory, keys = _BUILTINS[name]
    params = parse_params(rest)
    if set(params) != set(keys):
        raise BadSpec(f"{name} takes parameters {keys}, got {tuple(params)}")
    try:
        return factory(**params)
    except ProfileError as exc:
        raise BadSpec(str(exc)) from exc
