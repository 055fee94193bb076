"""Quadrature point sets on compact manifolds via heat-kernel repulsion.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._heatquad import (
    AnnealResult,
    ErrorSpectrum,
    ManifoldSpec,
    PointSet,
    anneal,
    constraint,
    constraint_grad,
    cooling_schedule,
    default_bandwidth,
    dented_sphere_lift,
    disk_to_hyperboloid,
    ensemble_stats,
    error_spectrum,
    fibonacci_index_of,
    fibonacci_lattice,
    gaussian_energy,
    gaussian_energy_grad,
    halton,
    hyperboloid_to_disk,
    korobov_lattice,
    lhs,
    load_spherical_design,
    riesz_energy,
    riesz_energy_grad,
    sobol,
    solve_weights,
    sph_harm,
    sphere_error,
    spherical_fibonacci,
    torus_error,
    uniform_random,
    vol_normalizer,
    weighted_gaussian_energy,
)

__all__ = [
    "AnnealResult",
    "ErrorSpectrum",
    "ManifoldSpec",
    "PointSet",
    "anneal",
    "constraint",
    "constraint_grad",
    "cooling_schedule",
    "default_bandwidth",
    "dented_sphere_lift",
    "disk_to_hyperboloid",
    "ensemble_stats",
    "error_spectrum",
    "fibonacci_index_of",
    "fibonacci_lattice",
    "gaussian_energy",
    "gaussian_energy_grad",
    "halton",
    "hyperboloid_to_disk",
    "korobov_lattice",
    "lhs",
    "load_spherical_design",
    "riesz_energy",
    "riesz_energy_grad",
    "sobol",
    "solve_weights",
    "sph_harm",
    "sphere_error",
    "spherical_fibonacci",
    "torus_error",
    "uniform_random",
    "vol_normalizer",
    "weighted_gaussian_energy",
]

__version__ = "0.1.0"
