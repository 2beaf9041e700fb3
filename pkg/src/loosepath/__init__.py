"""Monochromatic loose paths in r-colored complete k-uniform hypergraphs."""

from __future__ import annotations

from .bounds import bound_table, n_min_con, n_min_con2, n_min_cor1, round_target, t_bin, tau
from .coloring import (ColoringSource, ConstantColoring, PlantedStarColoring, QueryCounter, RandomColoring,
                       StarColoring, TableColoring, mix_color)
from .core import (LoosePath, Params, PartiteFamily, build_partite_path, colex_rank, colex_unrank,
                   enumerate_partite_edges, validate_loose_path)
from .dfs import FinderResult, find_monochromatic_path
from .errors import (InsufficientPartError, InvariantViolation, LoosePathError, NoGuaranteeError, ParseError,
                     ThresholdError, TooLargeError, ValidationError)
from .oracle import exhaustive_mono_path_search, generate_coloring, verify_small_ramsey, verify_witness
from .selfish import find_via_reduction

__version__ = "0.1.0"

__all__ = [
    "bound_table", "n_min_con", "n_min_con2", "n_min_cor1", "round_target", "t_bin", "tau",
    "ColoringSource", "ConstantColoring", "PlantedStarColoring", "QueryCounter", "RandomColoring",
    "StarColoring", "TableColoring", "mix_color",
    "LoosePath", "Params", "PartiteFamily", "build_partite_path", "colex_rank", "colex_unrank",
    "enumerate_partite_edges", "validate_loose_path",
    "FinderResult", "find_monochromatic_path",
    "InsufficientPartError", "InvariantViolation", "LoosePathError", "NoGuaranteeError", "ParseError",
    "ThresholdError", "TooLargeError", "ValidationError",
    "exhaustive_mono_path_search", "generate_coloring", "verify_small_ramsey", "verify_witness",
    "find_via_reduction",
]
