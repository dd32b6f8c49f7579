"""Ant colony optimization over a growing pheromone reference network.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    DecisionParams,
    GrowthParams,
    IsingParams,
    TheoryPoint,
    TrialResult,
    derive_seed,
    effective_field,
    energy,
    energy_of_magnetization,
    grow_network,
    histogram,
    integrate,
    mean_magnetization,
    potential,
    run_trial,
    stationary_density_lattice,
    success_probability,
    theory_point,
    total_popularity,
)

__all__ = [
    "DecisionParams",
    "GrowthParams",
    "IsingParams",
    "TheoryPoint",
    "TrialResult",
    "derive_seed",
    "effective_field",
    "energy",
    "energy_of_magnetization",
    "grow_network",
    "histogram",
    "integrate",
    "mean_magnetization",
    "potential",
    "run_trial",
    "stationary_density_lattice",
    "success_probability",
    "theory_point",
    "total_popularity",
]

__version__ = "0.1.0"
