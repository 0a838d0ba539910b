"""Generators shared by the test modules: random continued fractions, Hankel
matrices and problem data, all exact and seeded."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from bcf.rational import ContinuedFraction, RationalFunction, Tail, build_continued_fraction, taylor_at
from bcf.series import ProblemData, crat


def small_fraction(rng: random.Random, lo=-3, hi=3, max_den=4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def positive_fraction(rng: random.Random, hi=3, max_den=4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(1, hi * den), den)


def fractions(lo=-3, hi=3, max_den=6):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_den)


def positive_fractions(hi=3, max_den=6):
    return st.fractions(min_value=Fraction(1, max_den), max_value=hi, max_denominator=max_den)


def continued_fraction_function(x, s, t, tail_const) -> RationalFunction:
    """Generator function of a depth-len(t) fraction with constant tail."""
    return build_continued_fraction(ContinuedFraction(x, tuple(s), tuple(t), Tail.constant(tail_const)))


def taylor_data(f: RationalFunction, x, n: int, residue=0) -> ProblemData:
    return ProblemData(x, taylor_at(f, x, n).coeffs, residue)


def random_pd_problem(rng: random.Random, n: int | None = None) -> tuple[ProblemData, RationalFunction]:
    """Real data with positive definite H_m, synthesized from a random fraction."""
    n = rng.randint(1, 8) if n is None else n
    m = (n + 1) // 2
    depth = m + rng.randint(0, 2)
    x = small_fraction(rng, -2, 2)
    s = [small_fraction(rng) for _ in range(depth)]
    t = [positive_fraction(rng) for _ in range(depth)]
    f = continued_fraction_function(x, s, t, small_fraction(rng))
    residue = -positive_fraction(rng) if rng.random() < 0.3 else Fraction(0)
    return taylor_data(f, x, n, residue), f


def random_interior_data(rng: random.Random, n: int) -> ProblemData:
    a0 = crat(small_fraction(rng), positive_fraction(rng))
    rest = [crat(small_fraction(rng), small_fraction(rng)) for _ in range(n)]
    return ProblemData(small_fraction(rng, -2, 2), [a0] + rest)


def random_rho_even_data(rng: random.Random, m: int, extra: int) -> ProblemData:
    """rho = 2m: real prefix with H_m > 0, then a^(2m) with positive imaginary part."""
    x = small_fraction(rng, -2, 2)
    depth = m + 1
    f = continued_fraction_function(
        x, [small_fraction(rng) for _ in range(depth)], [positive_fraction(rng) for _ in range(depth)], 0
    )
    real = list(taylor_at(f, x, 2 * m - 1).coeffs) if m else []
    corner = crat(small_fraction(rng), positive_fraction(rng))
    tail = [crat(small_fraction(rng), small_fraction(rng)) for _ in range(extra)]
    return ProblemData(x, real + [corner] + tail)


def moment_hankel(rng: random.Random, m: int, atoms: int) -> list[list[Fraction]]:
    """PSD Hankel matrix of moments of ``atoms`` point masses in [-1, 1]."""
    nodes = rng.sample([Fraction(k, 2) for k in range(-2, 3)], min(atoms, 5))
    weights = [Fraction(rng.randint(1, 4), 4 * len(nodes)) * 3 for _ in nodes]
    moments = [sum((w * xi**k for w, xi in zip(weights, nodes)), Fraction(0)) for k in range(2 * m - 1)]
    return [[moments[i + j] for j in range(m)] for i in range(m)]


def uniform_hankel(rng: random.Random, m: int) -> list[list[Fraction]]:
    entries = [small_fraction(rng) for _ in range(2 * m - 1)]
    return [[entries[i + j] for j in range(m)] for i in range(m)]
