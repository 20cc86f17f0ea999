"""Separating planar point sets by lines."""

from ._core import (
    LinesepError,
    cell_count_lower_bound,
    count_cell_vertices,
    exact,
    greedy,
    grid,
    halving,
    properize,
    random_points,
    reweight,
    throw_balls,
    verify,
)

__all__ = [
    "LinesepError",
    "cell_count_lower_bound",
    "count_cell_vertices",
    "exact",
    "greedy",
    "grid",
    "halving",
    "properize",
    "random_points",
    "reweight",
    "throw_balls",
    "verify",
]
