"""Probability domains of generalized quantum measurements."""

from ._core import (
    Feasibility,
    build_affine_map,
    classify,
    dispersion,
    effective_dimension,
    extreme_point_sample,
    linear_inversion,
    membership,
    probabilities,
    project_to_physical,
    pure_state,
    random_density,
    random_povm,
    simulate_counts,
    spectral_decompose,
    subspace_dimension,
    tetrahedral_povm,
    tetrahedron_coordinates,
    bloch_state,
    computational_povm,
    validate_povm,
)

__all__ = [
    "Feasibility",
    "bloch_state",
    "build_affine_map",
    "classify",
    "computational_povm",
    "dispersion",
    "effective_dimension",
    "extreme_point_sample",
    "linear_inversion",
    "membership",
    "probabilities",
    "project_to_physical",
    "pure_state",
    "random_density",
    "random_povm",
    "simulate_counts",
    "spectral_decompose",
    "subspace_dimension",
    "tetrahedral_povm",
    "tetrahedron_coordinates",
    "validate_povm",
]
