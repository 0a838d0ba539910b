"""Solvability decisions and solution construction for the boundary problem.

Given a real node ``x``, a residue ``a_neg1`` and targets ``a^0..a^n``, decide
whether some Pick function has exactly these Laurent coefficients at ``x``, and
produce one (or all of them) when it does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    InternalInconsistency,
    NotDeterminate,
    ParametrizationUnsupported,
    TrivialProblem,
    Unsolvable,
)
from .hankel import (
    Classification,
    Tag,
    build_hankel,
    classify,
    determinant,
    is_psd,
    solve_linear,
)
from .rational import (
    LftMatrix,
    Poly,
    RationalFunction,
    Tail,
    as_rational,
    augment_function,
    compose_lft_chain,
    lft_apply,
    numeric_value,
)
from .series import (
    Number,
    ProblemData,
    TruncatedSeries,
    exact,
    imag,
    is_real,
    reduce_series,
    rho,
)


class Status(str, Enum):
    UNSOLVABLE = "unsolvable"
    SOLVABLE_DETERMINATE = "solvable_determinate"
    SOLVABLE_INDETERMINATE = "solvable_indeterminate"


class Reason(str, Enum):
    RESIDUE_NON_REAL = "residue_non_real"
    RESIDUE_POSITIVE = "residue_positive"
    IM_A0_NEGATIVE = "im_a0_negative"
    RHO_ODD = "rho_odd"
    HANKEL_NOT_PD = "hankel_not_pd"
    IM_CORNER_NOT_POSITIVE = "im_corner_not_positive"
    HANKEL_NOT_POSITIVE = "hankel_not_positive"
    HANKEL_NOT_PD_NOT_SE_MINIMAL = "hankel_not_pd_not_se_minimal"
    EVEN_RANK_CONDITION_FAILS = "even_rank_condition_fails"
    POSITIVE_DEFINITE = "positive_definite"
    SE_MINIMALLY_POSITIVE = "se_minimally_positive"
    SE_MINIMAL_RANK_CONDITION_HOLDS = "se_minimal_rank_condition_holds"
    RANK_ZERO_CONSTANT = "rank_zero_constant"
    COMPLEX_HANKEL_PD = "complex_hankel_pd"


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: Reason
    rho: float | int
    m: int | None = None
    rank: int | None = None
    classification: Classification | None = None
    determinacy_basis: str = "cited"

    @property
    def solvable(self) -> bool:
        return self.status is not Status.UNSOLVABLE

    @property
    def determinate(self) -> bool:
        return self.status is Status.SOLVABLE_DETERMINATE

    def to_dict(self) -> dict:
        c = self.classification
        return {
            "status": self.status.value,
            "reason": self.reason.value,
            "rho": "inf" if self.rho == math.inf else self.rho,
            "m": self.m,
            "rank": self.rank,
            "classification": c.tag.value if c else None,
            "leading_minors": [str(d) for d in c.leading_minors] if c else [],
            "determinacy_basis": self.determinacy_basis,
        }


def _reject(reason: Reason, r, **kw) -> Verdict:
    return Verdict(Status.UNSOLVABLE, reason, r, **kw)


def _precondition_failure(p: ProblemData) -> Reason | None:
    res = p.residue
    if not is_real(res):
        return Reason.RESIDUE_NON_REAL
    if res > 0:
        return Reason.RESIDUE_POSITIVE
    if imag(p.a[0]) < 0:
        return Reason.IM_A0_NEGATIVE
    return None


def check_solvable(p: ProblemData) -> Verdict:
    """Decide solvability and determinacy.

    Raises :class:`TrivialProblem` when ``n = 0`` and the residue and ``a^0``
    are admissible (the constant ``a^0`` then solves the problem).
    """
    r = rho(p.a)
    bad = _precondition_failure(p)
    if bad is not None:
        return _reject(bad, r)
    n = p.n
    if n == 0:
        raise TrivialProblem("n = 0: the constant a^0 solves the problem")

    if r != math.inf:
        if r % 2 == 1:
            return _reject(Reason.RHO_ODD, r)
        m = r // 2
        cls = classify(build_hankel(p.a, m))
        kw = dict(m=m, rank=cls.rank, classification=cls, determinacy_basis="derived")
        if cls.tag is not Tag.POSITIVE_DEFINITE:
            return _reject(Reason.HANKEL_NOT_PD, r, **kw)
        if imag(p.a[2 * m]) <= 0:
            return _reject(Reason.IM_CORNER_NOT_POSITIVE, r, **kw)
        return Verdict(Status.SOLVABLE_INDETERMINATE, Reason.COMPLEX_HANKEL_PD, r, **kw)

    m = (n + 1) // 2 if n % 2 else n // 2
    cls = classify(build_hankel(p.a, m))
    kw = dict(m=m, rank=cls.rank, classification=cls)
    if cls.tag is Tag.NOT_POSITIVE:
        return _reject(Reason.HANKEL_NOT_POSITIVE, r, **kw)
    if cls.tag is Tag.POSITIVE_SINGULAR_NOT_SE_MINIMAL:
        return _reject(Reason.HANKEL_NOT_PD_NOT_SE_MINIMAL, r, **kw)
    if cls.tag is Tag.POSITIVE_DEFINITE:
        return Verdict(Status.SOLVABLE_INDETERMINATE, Reason.POSITIVE_DEFINITE, r, **kw)
    if n % 2:
        return Verdict(Status.SOLVABLE_DETERMINATE, Reason.SE_MINIMALLY_POSITIVE, r, **kw)
    if cls.rank == 0:
        if all(v == 0 for v in p.a[2:]):
            return Verdict(Status.SOLVABLE_DETERMINATE, Reason.RANK_ZERO_CONSTANT, r, **kw)
        return _reject(Reason.EVEN_RANK_CONDITION_FAILS, r, **kw)
    if even_rank_condition(p.a, m, cls.rank):
        return Verdict(Status.SOLVABLE_DETERMINATE, Reason.SE_MINIMAL_RANK_CONDITION_HOLDS, r, **kw)
    return _reject(Reason.EVEN_RANK_CONDITION_FAILS, r, **kw)


def check_relaxed(x, a: Sequence) -> bool:
    """Real data, odd n: some Pick f has ``f^(k)(x)/k! = a^k`` for k < n and
    an n-th angular coefficient at most ``a^n`` iff ``H_m(a) >= 0``."""
    a = tuple(exact(v) for v in a)
    n = len(a) - 1
    if n % 2 == 0:
        raise ValueError(f"the relaxed criterion applies to odd n, got n = {n}")
    return is_psd(build_hankel(a, (n + 1) // 2))


def even_rank_condition(a: Sequence, m: int, r: int) -> bool:
    """``a^(2m) == [a^m .. a^(m+r-1)] H_r^-1 [a^(m+1) .. a^(m+r)]^T``, exactly."""
    a = tuple(exact(v) for v in a)
    Hr = build_hankel(a, r)
    if determinant(Hr) == 0:
        raise InternalInconsistency(f"H_{r} is singular although H_{m} is SE-minimal of rank {r}")
    left = a[m : m + r]
    y = solve_linear(Hr.rows(), a[m + 1 : m + r + 1])
    value = sum((u * v for u, v in zip(left, y)), Fraction(0))
    return a[2 * m] == value


def _attach_pole(f, x, residue):
    residue = exact(residue)
    if residue == 0:
        return f
    if isinstance(f, RationalFunction):
        return RationalFunction(f.num, f.den, x, residue)
    return _PoleAttached(f, Fraction(x), residue)


@dataclass(frozen=True)
class _PoleAttached:
    inner: Callable
    x: Fraction
    residue: Fraction

    def __call__(self, z):
        return self.inner(z) + numeric_value(self.residue, z) / (z - numeric_value(self.x, z))


def unique_solution(p: ProblemData, verdict: Verdict | None = None) -> RationalFunction:
    """The unique interpolant of determinate real data, as a reduced rational function."""
    verdict = verdict or check_solvable(p)
    if not verdict.determinate:
        raise NotDeterminate(f"data is {verdict.status.value}")
    x, a, r = p.x, p.a, verdict.rank
    if r == 0:
        return _attach_pole(RationalFunction.constant(a[0]), x, p.residue)
    y = solve_linear(build_hankel(a, r).rows(), a[r + 1 : 2 * r + 1])
    c = [Fraction(-1)] + list(reversed(y))  # c_0 = -1, c_1..c_r
    num_u = Poly([sum((c[k] * a[j - k] for k in range(j + 1)), Fraction(0)) for j in range(r + 1)])
    den_u = Poly(c)
    f = RationalFunction(num_u.shift(-x), den_u.shift(-x))
    return _attach_pole(f, x, p.residue)


@dataclass(frozen=True)
class ParameterTable:
    """Continued-fraction parameters ``s_j = a^0(j)``, ``t_j = a^1(j)``.

    ``stages[j]`` holds the data after ``j`` reductions. When ``terminated``
    the fraction stops at depth ``len(t)`` and ``s_extra`` is its constant
    tail; otherwise, for even ``n``, ``s_extra`` is the value the tail must
    take at the node.
    """

    x: Fraction
    s: tuple
    t: tuple
    s_extra: Number | None
    stages: tuple
    terminated: bool

    @property
    def depth(self) -> int:
        return len(self.t)

    def to_dict(self) -> dict:
        return {
            "x": str(self.x),
            "s": [str(v) for v in self.s],
            "t": [str(v) for v in self.t],
            "s_extra": None if self.s_extra is None else str(self.s_extra),
            "terminated": self.terminated,
        }


def compute_parameters(p: ProblemData, verdict: Verdict | None = None) -> ParameterTable:
    """Run the reduction recursion on real data with a PD or SE-minimal Hankel matrix."""
    verdict = verdict or check_solvable(p)
    if verdict.rho != math.inf:
        raise ParametrizationUnsupported("parameters are defined for real data only")
    if not verdict.solvable:
        raise Unsolvable(verdict)
    m, rank = verdict.m, verdict.rank
    stage = TruncatedSeries(p.x, p.a)
    stages = [stage]
    s: list = []
    t: list = []
    for j in range(1, m + 1):
        s0, t0 = stage[0], stage[1]
        if t0 == 0:
            if j - 1 != rank or any(v != 0 for v in stage.coeffs[1:]):
                raise InternalInconsistency(f"recursion stopped at level {j} but rank is {rank}")
            return ParameterTable(p.x, tuple(s), tuple(t), s0, tuple(stages), True)
        if t0 < 0:
            raise InternalInconsistency(f"t_{j} = {t0} is negative for positive data")
        s.append(s0)
        t.append(t0)
        if stage.order >= 2:
            stage = reduce_series(stage)
            stages.append(stage)
    if rank < m:
        raise InternalInconsistency(f"recursion ran to depth {m} but rank is {rank}")
    s_extra = stage[0] if p.n % 2 == 0 else None
    return ParameterTable(p.x, tuple(s), tuple(t), s_extra, tuple(stages), False)


def nevanlinna_t_formulas(D: Sequence, t: Sequence) -> bool:
    """Check the three determinant/parameter identities for levels within range.

    ``D[k-1]`` is ``det H_k`` and ``t[k-1]`` is ``t_k``; levels with vanishing
    minors are skipped where an identity would divide by them.
    """
    D = [Fraction(1), Fraction(1)] + [Fraction(v) for v in D]  # D[-1], D[0], D[1], ...
    t = [None] + [Fraction(v) for v in t]
    L = min(len(D) - 2, len(t) - 1)
    Dk = lambda k: D[k + 1]  # noqa: E731
    for k in range(1, L + 1):
        prod = Fraction(1)
        for j in range(1, k + 1):
            prod *= t[j] ** (2 * (k - j) + 1)
        if Dk(k) != prod:
            return False
    for l in range(1, L):
        if Dk(l) != 0 and t[l] * t[l + 1] != Dk(l - 1) * Dk(l + 1) / Dk(l) ** 2:
            return False
    for l in range(1, L + 1):
        if any(Dk(k) == 0 for k in range(1, l)):
            continue
        closed = Dk(l) / Dk(l - 1) ** 3
        inner = Fraction(1)
        for k in range(1, l - 1):
            inner *= Dk(k) ** ((-1) ** (k + l))
        if t[l] != closed * inner**4:
            return False
    return True


@dataclass(frozen=True)
class Parametrization:
    """All solutions of indeterminate real data as an LFT of a free tail."""

    table: ParameterTable
    matrix: LftMatrix
    K: Fraction
    n: int
    residue: Fraction
    contract: str

    @property
    def x(self) -> Fraction:
        return self.table.x

    def tail_function(self, tail=None, t=None):
        """Innermost function fed into the LFT for a user tail."""
        h = Tail.constant(0) if tail is None else tail
        if isinstance(h, Tail):
            t = h.t if t is None else t
            h = h.function(self.x)
        if self.n % 2 == 0:
            t = Fraction(1) if t is None else exact(t)
            return augment_function(h, self.table.s_extra, t, self.x)
        return h

    def instantiate(self, tail=None, t=None):
        """Solution obtained from ``tail`` (default: the constant 0)."""
        h = self.tail_function(tail, t)
        if not callable(h) or isinstance(h, (Poly, RationalFunction)):
            h = as_rational(h)
        f = lft_apply(self.matrix, h)
        return _attach_pole(f, self.x, self.residue)

    def to_dict(self) -> dict:
        return {
            **self.table.to_dict(),
            "lft": self.matrix.to_dict(),
            "K": str(self.K),
            "tail_contract": self.contract,
        }


ODD_CONTRACT = "tail: any Pick function analytic at x"
EVEN_CONTRACT = "tail: augmentation of a Pick function h analytic at x by (s_extra, t) with t > 0"


def parametrize(p: ProblemData, verdict: Verdict | None = None) -> Parametrization:
    verdict = verdict or check_solvable(p)
    if verdict.rho != math.inf:
        raise ParametrizationUnsupported("no closed parametrization for non-real data")
    if not verdict.solvable:
        raise Unsolvable(verdict)
    if verdict.classification.tag is not Tag.POSITIVE_DEFINITE:
        raise ParametrizationUnsupported("data is determinate; use unique_solution")
    table = compute_parameters(p, verdict)
    A = compose_lft_chain(table, p.x)
    K = Fraction(1)
    for tk in table.t:
        K *= tk * tk
    contract = EVEN_CONTRACT if p.n % 2 == 0 else ODD_CONTRACT
    return Parametrization(table, A, K, p.n, p.residue, contract)


@dataclass(frozen=True)
class NumericSolution:
    """Solution of non-real data: exact augmentations around a numeric interior core.

    Callable on complex scalars (double precision) or mpmath numbers.
    """

    x: Fraction
    s: tuple
    t: tuple
    residue: Fraction
    interior: object
    evaluator: Callable = field(repr=False, compare=False)
    safe_radius: float = 0.0

    def __call__(self, z):
        return self.evaluator(z)

    def to_dict(self) -> dict:
        return {
            "kind": "numeric",
            "x": str(self.x),
            "s": [str(v) for v in self.s],
            "t": [str(v) for v in self.t],
            "pole_residue": str(self.residue),
            "interior": self.interior.to_dict(),
            "safe_radius": self.safe_radius,
        }


def _complex_solution(p: ProblemData, verdict: Verdict, config=None):
    from .interior import interior_solution

    m = verdict.m
    stage = TruncatedSeries(p.x, p.a)
    s, t = [], []
    for j in range(m):
        s.append(stage[0])
        t.append(stage[1])
        stage = reduce_series(stage)
    if imag(stage[0]) <= 0:
        raise InternalInconsistency("reduced data left the upper half plane")
    if stage.order == 0:
        f = RationalFunction.constant(stage[0])
        for sj, tj in zip(reversed(s), reversed(t)):
            f = augment_function(f, sj, tj, p.x)
        return _attach_pole(f, p.x, p.residue)
    inner = interior_solution(ProblemData(p.x, stage.coeffs), config=config)
    return _assemble(p.x, tuple(s), tuple(t), p.residue, inner)


def _assemble(x, s, t, residue, inner, safe_radius=None) -> NumericSolution:
    f = inner.pick
    for sj, tj in zip(reversed(s), reversed(t)):
        f = augment_function(f, sj, tj, x)
    f = _attach_pole(f, x, residue)
    if safe_radius is None:
        from .verify import estimate_safe_radius

        # the scaled core can hide nearly cancelling singularities just outside
        # its own analytic disc; never search beyond that disc
        start = min(0.5, getattr(inner, "taylor_radius", 0.5))
        safe_radius = estimate_safe_radius(f, x, residue, start=start, floor=start * 1e-6)
    return NumericSolution(x, s, t, residue, inner, f, safe_radius)


def numeric_solution_from_dict(doc: dict) -> NumericSolution:
    """Rebuild a :class:`NumericSolution` from its recorded construction."""
    from .interior import InteriorInterpolant, ScaledInterior, SchurData

    rec = doc["interior"]
    num = lambda v: exact(v)  # noqa: E731
    x = Fraction(num(doc["x"]))
    scaling = rec.get("scaling")
    data = SchurData(num(rec["tau"]), tuple(num(v) for v in rec["b"]))
    inner = InteriorInterpolant(
        data,
        Fraction(0) if scaling else x,
        num(rec["moebius_center"]),
        tuple(num(v) for v in rec["b_hat"]),
        int(rec["q"]),
        Poly([num(v) for v in rec["Q"]]),
        int(rec["N"]),
        int(rec["m_exp"]),
    )
    if scaling:
        inner = ScaledInterior(inner, x, *(Fraction(num(scaling[k])) for k in ("lam", "alpha", "beta")))
    s = tuple(num(v) for v in doc["s"])
    t = tuple(num(v) for v in doc["t"])
    return _assemble(x, s, t, num(doc["pole_residue"]), inner, float(doc["safe_radius"]))


def solve(p: ProblemData, tail=None, config=None):
    """A concrete solution.

    Determinate data gives the unique solution; indeterminate real data the
    parametrized solution for ``tail``; non-real data the interior pipeline.
    Raises :class:`Unsolvable` carrying the verdict otherwise.
    """
    try:
        verdict = check_solvable(p)
    except TrivialProblem:
        return _attach_pole(RationalFunction.constant(p.a[0]), p.x, p.residue)
    if not verdict.solvable:
        raise Unsolvable(verdict)
    if verdict.determinate:
        return unique_solution(p, verdict)
    if verdict.rho != math.inf:
        return _complex_solution(p, verdict, config)
    return parametrize(p, verdict).instantiate(tail)
