"""Self-check suites run by ``diamond verify``."""

from __future__ import annotations

import math
from typing import Callable, Iterator

import numpy as np

from . import asymptotics as asy
from .energy import (
    expected_energy_general,
    expected_energy_single_sum,
    expected_energy_symmetric,
    log_energy,
    roots_of_unity_energy,
)
from .ensemble import layout_from_profile, optimal_heights
from .montecarlo import mc_expected_energy
from .profile import builtin_elaborated, builtin_quasioptimal, builtin_simple

Check = tuple[str, bool, str]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _builtins(limit: int):
    for k in range(1, limit + 1):
        yield builtin_simple(4, k)
        yield builtin_elaborated(k)
        yield builtin_quasioptimal(k)


def formulas() -> Iterator[Check]:
    worst = 0.0
    for prof in _builtins(6):
        lay = layout_from_profile(prof)
        vals = [
            expected_energy_general(lay).total,
            expected_energy_single_sum(lay),
            expected_energy_symmetric(lay),
            asy.trapezoid_energy(prof),
        ]
        worst = max(worst, max(_rel(a, vals[0]) for a in vals))
    yield "expected-energy routes agree on built-ins", worst <= 1e-11, f"max rel diff {worst:.2e}"

    e1 = expected_energy_general(optimal_heights([1])).total
    yield "three-point configuration", abs(e1 + 4 * math.log(2)) <= 1e-13, f"{e1!r}"

    worst = 0.0
    for n in range(2, 33):
        ang = 2 * np.pi * np.arange(n) / n
        pts = np.column_stack([np.cos(ang), np.sin(ang), np.zeros(n)])
        worst = max(worst, abs(log_energy(pts) - roots_of_unity_energy(n)))
    yield "roots of unity closed form", worst <= 1e-10, f"max abs diff {worst:.2e}"


def montecarlo(trials: int = 200, base_seed: int = 2024) -> Iterator[Check]:
    for counts in ([1], [2, 2], [3, 5, 3], [1, 4, 6, 4, 1]):
        rep = mc_expected_energy(optimal_heights(counts), trials, base_seed)
        yield f"z-score counts={counts}", abs(rep.z_score) <= 4.0, f"z={rep.z_score:+.3f}"
    rep = mc_expected_energy(layout_from_profile(builtin_quasioptimal(1)), trials, base_seed)
    yield "z-score quasioptimal:m=1", abs(rep.z_score) <= 4.0, f"z={rep.z_score:+.3f}"


def asymptotics() -> Iterator[Check]:
    cases = [
        ("quasioptimal", builtin_quasioptimal, [16, 32, 64, 128, 256], asy.C_DIAMOND),
        ("elaborated", builtin_elaborated, [16, 32, 64, 128, 256], asy.C_ELABORATED),
        ("simple:K=4", lambda M: builtin_simple(4, M), [128, 256, 512, 1024, 2048], asy.c_simple(4)),
    ]
    for name, factory, ms, target in cases:
        errs = [asy.asymptotic_report(factory(m), target).abs_error for m in ms]
        ok = all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] <= 5e-3
        yield f"constant {name}", ok, " -> ".join(f"{e:.2e}" for e in errs)


SUITES: dict[str, Callable[[], Iterator[Check]]] = {
    "formulas": formulas,
    "montecarlo": montecarlo,
    "asymptotics": asymptotics,
}


def run(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    return list(SUITES[name]())
