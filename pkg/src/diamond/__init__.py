"""Random sphere point sets built from parallels, and their logarithmic energy."""

from .asymptotics import AsymptoticReport, asymptotic_report, extract_constant, reference_constants
from .energy import (
    EnergyBreakdown,
    expected_energy_general,
    expected_energy_symmetric,
    log_energy,
    riesz_energy,
    roots_of_unity_energy,
)
from .ensemble import ParallelLayout, PointSet, layout_from_profile, optimal_heights, sample, with_heights
from .kernels import BACKEND
from .montecarlo import McReport, mc_expected_energy
from .profile import (
    Profile,
    builtin_elaborated,
    builtin_quasioptimal,
    builtin_simple,
    parse_spec,
    total_points,
    validate,
)

__version__ = "0.1.0"
