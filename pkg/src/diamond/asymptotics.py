"""Trapezoid-rule form of the expected energy and its continuum limit.

On piece ``l`` of a profile the expected energy involves

    f(x) = r(x) log r(x)
    g(x) = r(x) (1 - z(x)) log(1 - z(x))
    h(x) = r(x) (1 + z(x)) log(1 + z(x))

where ``r`` is linear and ``(N - 1)(1 - z)`` is a quadratic ``u(x)``.
Summing these with the composite trapezoid rule reproduces the exact
expected energy; replacing the sums by integrals plus the first
Euler-Maclaurin correction gives the continuum estimate whose order-N
coefficient is the asymptotic constant.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import xlogy

from .energy import expected_energy_symmetric
from .ensemble import layout_from_profile
from .profile import Profile, total_points, validate

__all__ = [
    "W_LOG",
    "C_DIAMOND",
    "C_ELABORATED",
    "QuadratureFailure",
    "AsymptoticReport",
    "PieceFunctions",
    "reference_constants",
    "c_simple",
    "heuristic_constant",
    "extract_constant",
    "trapezoid_sum",
    "fgh_pieces",
    "trapezoid_energy",
    "trapezoid_energy_counts",
    "integrate_piece",
    "continuum_estimate",
    "em_remainder",
    "em_bound",
    "em_error_check",
    "family_target",
    "asymptotic_report",
]

W_LOG = 0.5 - math.log(2.0)
C_DIAMOND = -0.0492220914515784
C_ELABORATED = -0.048033870622806
C_LOG_LOWER = -0.2232823526
EULER_GAMMA = 0.5772156649015329


class QuadratureFailure(RuntimeError):
    pass


def c_simple(K: float) -> float:
    """Order-N constant of the r(x) = K x family."""
    return math.log(2.0) / 6.0 * K - 0.5 + math.log(2.0) - math.log(K) / 2.0


def heuristic_constant(K0: float) -> float:
    """Order-N constant for the idealized real-valued populations K0 pi sin(.)/sin(.)."""
    return K0 * math.pi / 6.0 - 0.5 * math.log(K0) - 0.5 * math.log(math.pi)


def _c_log_upper() -> float:
    return 2 * math.log(2) + 0.5 * math.log(2 / 3) + 3 * math.log(math.sqrt(math.pi) / math.gamma(1 / 3))


def reference_constants() -> dict[str, float]:
    return {
        "W_log": W_LOG,
        "C_log_lower": C_LOG_LOWER,
        "C_log_upper": _c_log_upper(),
        "c_spherical_ensemble": math.log(2.0) - EULER_GAMMA / 2.0,
        "c_random_polynomials": -W_LOG,
        "c_simple_K4": c_simple(4),
        "c_elaborated": C_ELABORATED,
        "c_diamond": C_DIAMOND,
        "heuristic_K0_opt": 3.0 / math.pi,
        "heuristic_c_opt": (1.0 - math.log(3.0)) / 2.0,
    }


def extract_constant(E: float, N: int) -> float:
    """Order-N coefficient of E after removing W_log N^2 - N log(N) / 2."""
    if N < 3:
        raise ValueError("N must be at least 3")
    return (E - W_LOG * N * N + 0.5 * N * math.log(N)) / N


def trapezoid_sum(f: Callable[[float], float], a: int, b: int) -> float:
    if not b > a:
        raise ValueError("need a < b")
    inner = [f(j) for j in range(a + 1, b)]
    return math.fsum([0.5 * f(a), 0.5 * f(b), *inner])


@dataclass(frozen=True)
class PieceFunctions:
    """f, g, h and the derivatives needed for Euler-Maclaurin on one piece."""

    alpha: int
    beta: int
    t0: int
    t1: int
    N: int
    # u(x) = c0 + c1 x + c2 x^2 = (N - 1)(1 - z(x))
    c0: int
    c1: int
    c2: int

    @property
    def d(self) -> int:
        return self.N - 1

    def r(self, x):
        return self.alpha + self.beta * np.asarray(x, dtype=float)

    def u(self, x):
        x = np.asarray(x, dtype=float)
        return self.c0 + (self.c1 + self.c2 * x) * x

    def z(self, x):
        return 1.0 - self.u(x) / self.d

    def f(self, x):
        r = self.r(x)
        return xlogy(r, r)

    def _v(self, x, sign):
        # v = 1 - z (sign=+1) or 1 + z (sign=-1); log taken from the integer-scaled numerator
        u = self.u(x)
        num = u if sign > 0 else 2.0 * self.d - u
        return num / self.d, np.log(num) - math.log(self.d)

    def _dv(self, x, sign):
        x = np.asarray(x, dtype=float)
        du = self.c1 + 2.0 * self.c2 * x
        return sign * du / self.d, sign * 2.0 * self.c2 / self.d

    def _uvw(self, x, sign, order):
        r = self.r(x)
        v, w = self._v(x, sign)
        v1, v2 = self._dv(x, sign)
        r1 = float(self.beta)
        if order == 0:
            return r * v * w
        if order == 1:
            return r1 * v * w + r * v1 * (w + 1.0)
        w1 = v1 / v
        w2 = v2 / v - w1**2
        w3 = -3.0 * v1 * v2 / v**2 + 2.0 * w1**3
        # Leibniz rule with r'' = 0 and v''' = 0
        return r * v * w3 + 6 * r1 * v1 * w1 + 3 * r1 * v2 * w + 3 * r * v2 * w1 + 3 * r1 * v * w2 + 3 * r * v1 * w2

    def g(self, x):
        return self._uvw(x, +1, 0)

    def h(self, x):
        return self._uvw(x, -1, 0)

    def dg(self, x):
        return self._uvw(x, +1, 1)

    def dh(self, x):
        return self._uvw(x, -1, 1)

    def d3g(self, x):
        return self._uvw(x, +1, 3)

    def d3h(self, x):
        return self._uvw(x, -1, 3)

    def funcs(self, which: str):
        """(value, first derivative, third derivative) for 'g' or 'h'."""
        if which == "g":
            return self.g, self.dg, self.d3g
        if which == "h":
            return self.h, self.dh, self.d3h
        raise ValueError(f"which must be 'g' or 'h', got {which!r}")


def _piece(a: int, b: int, t0: int, t1: int, N: int, n_before: int) -> PieceFunctions:
    c0 = 1 + 2 * n_before + a - 2 * a * t0 + b * (t0 - t0 * t0)
    return PieceFunctions(a, b, t0, t1, N, c0, 2 * a, b)


def fgh_pieces(profile: Profile, ell: int) -> PieceFunctions:
    validate(profile)
    if not 0 <= ell < profile.n:
        raise IndexError(f"piece {ell} out of range for {profile.n} pieces")
    a, b = profile.pieces[ell]
    t0, t1 = profile.knots[ell], profile.knots[ell + 1]
    n_before = sum(profile.r(j) for j in range(1, t0))
    return _piece(a, b, t0, t1, total_points(profile), n_before)


def _trapezoid_total(pieces: list[PieceFunctions], N: int) -> float:
    d = N - 1
    terms = [-d * 2.0 * math.log(2.0)]
    for pf in pieces:
        x = np.arange(pf.t0, pf.t1 + 1, dtype=float)
        w = np.ones_like(x)
        w[0] = w[-1] = 0.5
        terms += list(-2.0 * w * pf.f(x))
        terms += list(-d * w * pf.g(x))
        terms += list(-d * w * pf.h(x))
    return math.fsum(terms)


def trapezoid_energy(profile: Profile) -> float:
    """Exact expected energy written as composite trapezoid sums of f, g, h."""
    pieces = [fgh_pieces(profile, ell) for ell in range(profile.n)]
    return _trapezoid_total(pieces, total_points(profile))


def trapezoid_energy_counts(half_counts) -> float:
    """The trapezoid form for counts ``r_1..r_M`` mirrored about ``r_M``.

    Each unit interval ``[j-1, j]`` gets the linear interpolant of the
    counts (with ``r_0 = 0``), so slopes and intercepts may be negative.
    """
    r = [0, *(int(v) for v in half_counts)]
    if len(r) < 2 or min(r[1:]) < 1:
        raise ValueError("counts must be positive")
    M = len(r) - 1
    N = 2 + 2 * sum(r[1:M]) + r[M]
    pieces = []
    n_before = 0
    for j in range(1, M + 1):
        b = r[j] - r[j - 1]
        a = r[j - 1] - b * (j - 1)
        pieces.append(_piece(a, b, j - 1, j, N, n_before))
        n_before += r[j - 1]
    return _trapezoid_total(pieces, N)


def integrate_piece(func, a: float, b: float, *, epsabs: float = 1e-12, epsrel: float = 1e-13) -> float:
    """Adaptive Gauss-Kronrod integral; raises if the error estimate is too large.

    Accepts ``abserr <= max(epsabs, 100 * epsrel * |I|)``: an absolute
    1e-12 alone cannot be met in double precision once ``|I|`` is large.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda x: float(func(x)), a, b, epsabs=epsabs, epsrel=epsrel, limit=1000)
    if not math.isfinite(val) or err > max(epsabs, 100.0 * epsrel * abs(val)):
        raise QuadratureFailure(f"quad on [{a}, {b}] reached error {err:.3g} for value {val:.6g}")
    return val


def continuum_estimate(profile: Profile) -> float:
    """Integrals of f, g, h plus the Euler-Maclaurin end corrections for g and h."""
    N = total_points(profile)
    d = N - 1
    f_terms, gh_terms = [], []
    for ell in range(profile.n):
        pf = fgh_pieces(profile, ell)
        a, b = pf.t0, pf.t1
        f_terms.append(integrate_piece(pf.f, a, b))
        for fn, dfn in ((pf.g, pf.dg), (pf.h, pf.dh)):
            gh_terms.append(integrate_piece(fn, a, b))
            gh_terms.append((float(dfn(b)) - float(dfn(a))) / 12.0)
    return math.fsum([-d * 2.0 * math.log(2.0), -2.0 * math.fsum(f_terms), -d * math.fsum(gh_terms)])


def em_remainder(func, dfunc, a: int, b: int, integral: float | None = None) -> float:
    """|T(f) - int f - (f'(b) - f'(a)) / 12| on ``[a, b]``."""
    x = np.arange(a, b + 1, dtype=float)
    vals = np.asarray(func(x), dtype=float)
    trap = math.fsum([0.5 * vals[0], 0.5 * vals[-1], *vals[1:-1]])
    if integral is None:
        integral = integrate_piece(func, a, b)
    corr = (float(dfunc(b)) - float(dfunc(a))) / 12.0
    return abs(math.fsum([trap, -integral, -corr]))


def em_bound(d3func, a: int, b: int, samples_per_unit: int = 16) -> float:
    """(b - a) max|f'''| / (24 pi) with the max taken over a dense sample."""
    n = max(2, int(samples_per_unit * (b - a)) + 1)
    x = np.linspace(a, b, n)
    c3 = float(np.max(np.abs(d3func(x))))
    return c3 * (b - a) / (24.0 * math.pi)


def em_error_check(profile: Profile, ell: int, which: str) -> tuple[float, float]:
    """Observed Euler-Maclaurin remainder on one piece, and its third-derivative bound."""
    pf = fgh_pieces(profile, ell)
    fn, dfn, d3fn = pf.funcs(which)
    return em_remainder(fn, dfn, pf.t0, pf.t1), em_bound(d3fn, pf.t0, pf.t1)


def family_target(profile: Profile) -> float | None:
    family, _, _ = profile.name.partition(":")
    if family == "simple":
        return c_simple(profile.pieces[0][1])
    if family == "elaborated":
        return C_ELABORATED
    if family == "quasioptimal":
        return C_DIAMOND
    return None


@dataclass(frozen=True)
class AsymptoticReport:
    N: int
    E_exact: float
    c_N: float
    target: float | None
    abs_error: float | None
    profile: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def asymptotic_report(profile: Profile, target: float | None = None) -> AsymptoticReport:
    layout = layout_from_profile(profile)
    E = expected_energy_symmetric(layout)
    c = extract_constant(E, layout.N)
    if target is None:
        target = family_target(profile)
    err = None if target is None else abs(c - target)
    return AsymptoticReport(layout.N, E, c, target, err, profile.name)
