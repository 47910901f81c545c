"""Geometric entanglement of permutation-symmetric multiqubit states."""

from ._core import (
    FormatError,
    NumericError,
    __version__,
    bounds,
    dicke,
    find_cpps,
    geometric_measure,
    maximize,
    named_state,
    named_state_names,
    normalize,
    overlap,
    points_to_state,
    solve_thomson,
    solve_toth,
    sphere_mean_g2,
    state_to_points,
)

__all__ = [
    "FormatError",
    "NumericError",
    "__version__",
    "bounds",
    "dicke",
    "find_cpps",
    "geometric_measure",
    "maximize",
    "named_state",
    "named_state_names",
    "normalize",
    "overlap",
    "points_to_state",
    "solve_thomson",
    "solve_toth",
    "sphere_mean_g2",
    "state_to_points",
]
