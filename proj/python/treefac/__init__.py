"""Factorial sequences of metric trees."""

from ._core import (
    Source,
    Tree,
    TreeFacError,
    bhargava_factorials,
    branching_number,
    factorials,
    factorials_removed,
    realize,
    resistance,
    unit_flow,
)

__all__ = [
    "Source",
    "Tree",
    "TreeFacError",
    "bhargava_factorials",
    "branching_number",
    "factorials",
    "factorials_removed",
    "realize",
    "resistance",
    "unit_flow",
]
