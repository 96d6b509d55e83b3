"""Exact solvers for the basic semifluid packing problem.

A semifluid is rigid along one axis (its length) and fluid along the
others, like a bundle of thin tubes: any fraction of its volume can be
packed, and whatever is packed spreads over the full container width.  The
library maximizes the value packed into a single container using exact
rational arithmetic throughout: construction heuristics, first-improve
local ascent, and three complete tree searches over the ceiling-split-only
solution space, plus an instance generator and a benchmark harness.
"""

from .rational import (Rational, FractionSyntaxError, format_decimal,
                       format_fraction, parse_fraction)
from .model import (FLOOR, Holder, Instance, InstanceError, InstanceFormatError,
                    Item, Placement, Solution, Violation, canonicalize,
                    read_instance, read_solution, stack_height, validate,
                    write_instance, write_solution)
from .heuristics import PackState, Rule, ascent, choose, pack
from .search import (Limits, NO_LIMITS, SearchNode, SearchOutcome, SearchStats,
                     branch_and_bound, bfd, expand, lds, make_root, upper_bound)
from .generator import (EASY, HARD, GenResult, GenSpec, GeneratorError,
                        generate, generate_easy, generate_hard, read_header)
from . import bench
from .render import ReplayError, render_svg, replay

__version__ = "0.1.0"

__all__ = [
    "Rational", "FractionSyntaxError", "format_decimal", "format_fraction",
    "parse_fraction",
    "FLOOR", "Holder", "Instance", "InstanceError", "InstanceFormatError",
    "Item", "Placement", "Solution", "Violation", "canonicalize",
    "read_instance", "read_solution", "stack_height", "validate",
    "write_instance", "write_solution",
    "PackState", "Rule", "ascent", "choose", "pack",
    "Limits", "NO_LIMITS", "SearchNode", "SearchOutcome", "SearchStats",
    "branch_and_bound", "bfd", "expand", "lds", "make_root", "upper_bound",
    "EASY", "HARD", "GenResult", "GenSpec", "GeneratorError", "generate",
    "generate_easy", "generate_hard", "read_header",
    "bench", "ReplayError", "render_svg", "replay",
    "__version__",
]
