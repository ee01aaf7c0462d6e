"""Sampled log energies against the closed-form expectation.

Trial ``k`` samples with ``derive_seed(base_seed, k)``, i.e. the k-th
``SeedSequence`` child of ``base_seed``; the report is a pure function of
``(layout, trials, base_seed)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .energy import expected_energy_general, log_energy
from .ensemble import ParallelLayout, derive_seed, sample

__all__ = ["McReport", "mc_expected_energy", "trial_energies"]

# sampled energies of phase-independent layouts still wobble at round-off level
_ROUNDOFF_REL = 1e-12


@dataclass(frozen=True)
class McReport:
    trials: int
    mean_energy: float
    stderr: float
    closed_form: float
    z_score: float
    base_seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def trial_energies(layout: ParallelLayout, trials: int, base_seed: int, *, threads=None, backend=None) -> np.ndarray:
    return np.array(
        [
            log_energy(sample(layout, derive_seed(base_seed, k)).points, threads=threads, backend=backend)
            for k in range(trials)
        ]
    )


def mc_expected_energy(layout: ParallelLayout, trials: int, base_seed: int, *, threads=None, backend=None) -> McReport:
    """Mean and standard error of sampled log energies, with a z-score.

    The z-score denominator adds a round-off floor of 1e-12 |closed form|
    in quadrature to the standard error, so layouts whose energy does not
    depend on the phases report a finite, small score.
    """
    if trials < 2:
        raise ValueError("need at least two trials")
    e = trial_energies(layout, trials, base_seed, threads=threads, backend=backend)
    mean = math.fsum(e) / trials
    var = math.fsum((e - mean) ** 2) / (trials - 1)
    stderr = math.sqrt(var / trials)
    closed = expected_energy_general(layout).total
    floor = _ROUNDOFF_REL * max(1.0, abs(closed))
    z = (mean - closed) / math.hypot(stderr, floor)
    return McReport(trials, mean, stderr, closed, z, int(base_seed))
