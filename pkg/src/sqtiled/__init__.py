"""Exact census of primitive genus-two square-tiled surfaces by cylinder diagram."""

from .formulas import CensusRow, CensusTables, census_rows, count_H2, limit_densities
from .origami import Origami, brute_force_census, build_from_params, canonical_form
from .params import ParamsA, ParamsB, ParamsC, ParamsD, count_by_enumeration, iter_params

__all__ = [
    "CensusRow",
    "CensusTables",
    "Origami",
    "ParamsA",
    "ParamsB",
    "ParamsC",
    "ParamsD",
    "brute_force_census",
    "build_from_params",
    "canonical_form",
    "census_rows",
    "count_H2",
    "count_by_enumeration",
    "iter_params",
    "limit_densities",
]

__version__ = "0.1.0"
