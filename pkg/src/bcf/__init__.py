"""Pick-class functions with prescribed derivatives at a real point.

Solvability is decided exactly from Hankel matrices of the targets. Solutions
are built as continued fractions, plus a numeric disc construction when the
targets are not all real.
"""

from .errors import BCFError, Unsolvable
from .hankel import Classification, Tag, build_hankel, classify
from .rational import ContinuedFraction, LftMatrix, Poly, RationalFunction, Tail, build_continued_fraction
from .series import ProblemData, TruncatedSeries, augment_series, parse_number, reduce_series, rho
from .solver import (
    ParameterTable,
    Parametrization,
    Reason,
    Status,
    Verdict,
    check_relaxed,
    check_solvable,
    compute_parameters,
    parametrize,
    solve,
    unique_solution,
)

__version__ = "0.1.0"

__all__ = [
    "BCFError",
    "Classification",
    "ContinuedFraction",
    "LftMatrix",
    "ParameterTable",
    "Parametrization",
    "Poly",
    "ProblemData",
    "RationalFunction",
    "Reason",
    "Status",
    "Tag",
    "Tail",
    "TruncatedSeries",
    "Unsolvable",
    "Verdict",
    "augment_series",
    "build_continued_fraction",
    "build_hankel",
    "check_relaxed",
    "check_solvable",
    "classify",
    "compute_parameters",
    "parametrize",
    "parse_number",
    "reduce_series",
    "rho",
    "solve",
    "unique_solution",
]
