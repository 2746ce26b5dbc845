"""Lyapunov spectra, filtrations, and Oseledets splittings for operator cocycles.

Modules
-------
grassmann : subspace geometry (projections, gap metric, norm-adapted bases)
cocycle   : matrix cocycles over shift driving: exponents, filtration,
            splitting, and the quantitative diagnostics built on them
interval  : transfer operators of piecewise monotone expanding interval maps
sft       : weighted transfer operators on subshifts of finite type
harness   : configuration, experiment runners, result records, and the CLI
"""

from .grassmann import (
    Subspace,
    ProjectionPair,
    project_along,
    local_norm,
    conditioned_basis,
    gap,
)
from .cocycle import (
    DrivingSystem,
    Generator,
    OmegaWindow,
    SpectrumReport,
    compose,
    lyapunov_exponents,
    forward_filtration,
    oseledets_splitting,
    uniform_growth_check,
    backward_decay_check,
    uniqueness_diagnostic,
    noncommuting_base_demo,
    sweep_reports,
)

__all__ = [
    "Subspace",
    "ProjectionPair",
    "project_along",
    "local_norm",
    "conditioned_basis",
    "gap",
    "DrivingSystem",
    "Generator",
    "OmegaWindow",
    "SpectrumReport",
    "compose",
    "lyapunov_exponents",
    "forward_filtration",
    "oseledets_splitting",
    "uniform_growth_check",
    "backward_decay_check",
    "uniqueness_diagnostic",
    "noncommuting_base_demo",
    "sweep_reports",
]

__version__ = "0.1.0"
