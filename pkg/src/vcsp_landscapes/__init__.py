"""Fitness landscapes of binary Boolean valued constraint satisfaction problems."""

import logging

from .core import (
    Assignment,
    DimensionError,
    InstanceParseError,
    TabularBinaryConstraint,
    VcspInstance,
    delta_flip,
    evaluate,
    from_tabular,
    induced_subproblem,
    is_local_peak,
    merge,
    parse_assignment,
    parse_instance,
)

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "Assignment",
    "DimensionError",
    "InstanceParseError",
    "TabularBinaryConstraint",
    "VcspInstance",
    "delta_flip",
    "evaluate",
    "from_tabular",
    "induced_subproblem",
    "is_local_peak",
    "merge",
    "parse_assignment",
    "parse_instance",
]
