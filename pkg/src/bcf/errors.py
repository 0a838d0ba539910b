"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`BCFError`,
so callers (the CLI in particular) can separate domain failures from bugs.
"""

from __future__ import annotations


class BCFError(Exception):
    """Base class for all library errors."""

    code = "error"


class DegenerateDerivative(BCFError):
    """Reduction requested for a series whose first-order coefficient is zero."""

    code = "degenerate_derivative"


class InvalidAugmentation(BCFError):
    code = "invalid_augmentation"


class NonRealEntry(BCFError):
    code = "non_real_entry"


class SingularPivot(BCFError):
    code = "singular_pivot"


class PoleAtNode(BCFError):
    code = "pole_at_node"


class DegenerateLft(BCFError):
    code = "degenerate_lft"


class InvalidTail(BCFError):
    code = "invalid_tail"


class TrivialProblem(BCFError):
    """n = 0: the constant a^0 (plus the pole term) always solves the problem."""

    code = "trivial_problem"


class InternalInconsistency(BCFError):
    """A state that the theory rules out; indicates a bug upstream."""

    code = "internal_inconsistency"


class NotDeterminate(BCFError):
    code = "not_determinate"


class ParametrizationUnsupported(BCFError):
    code = "parametrization_unsupported"


class NotInterior(BCFError):
    code = "not_interior"


class NotSchurData(BCFError):
    code = "not_schur_data"


class SelectionBudgetExceeded(BCFError):
    code = "selection_budget_exceeded"


class Unsolvable(BCFError):
    """Raised by :func:`bcf.solver.solve`; carries the verdict that rejected the data."""

    code = "unsolvable"

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"problem is unsolvable ({verdict.reason.value})")


class ProblemFileError(BCFError):
    """Malformed problem or solution document."""

    code = "problem_file_error"

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
