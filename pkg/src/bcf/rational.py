"""Exact rational functions, 2x2 polynomial LFT matrices and continued fractions.

Polynomials carry exact coefficients (``Fraction`` or ``ComplexRational``),
lowest degree first. Rational functions are kept in lowest terms with a monic
denominator, plus an optional simple-pole term ``residue/(z - node)`` stored
separately so the analytic part can be expanded directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import DegenerateLft, InvalidTail, PoleAtNode
from .series import (
    Number,
    TruncatedSeries,
    divide,
    exact,
    imag,
    is_real,
    real,
    to_complex,
)

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def numeric_value(c: Number, like):
    """Exact ``c`` as a number of the same kind as ``like`` (mpmath or complex)."""
    if isinstance(like, _MP_TYPES):
        re, im = real(c), imag(c)
        return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator)
    return to_complex(c)


class Poly:
    """Univariate polynomial with exact coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [exact(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple = tuple(c)

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def linear(cls, root, slope=1) -> Poly:
        """``slope * (z - root)``."""
        slope, root = exact(slope), exact(root)
        return cls([-slope * root, slope])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Number:
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly([other]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def _coerce(self, other) -> Poly:
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        result = Poly([1])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        inv_lead = 1 / other.lead
        for k in range(len(rem) - len(other.coeffs), -1, -1):
            coef = rem[k + other.degree] * inv_lead
            q[k] = coef
            if coef != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - coef * b
        return Poly(q), Poly(rem[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, z):
        """Exact Horner evaluation at an exact point."""
        acc: Number = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def evalf(self, z):
        """Floating evaluation at complex scalars, numpy arrays or mpmath numbers."""
        if isinstance(z, np.ndarray):
            acc = np.zeros_like(z, dtype=complex)
        else:
            acc = numeric_value(Fraction(0), z)
        for c in reversed(self.coeffs):
            acc = acc * z + (numeric_value(c, z) if not isinstance(z, np.ndarray) else to_complex(c))
        return acc

    def monic(self) -> Poly:
        return Poly([c / self.lead for c in self.coeffs])

    def shift(self, h) -> Poly:
        """Coefficients of ``p(u + h)`` as a polynomial in ``u``."""
        h = exact(h)
        result = Poly()
        base = Poly([h, 1])
        for c in reversed(self.coeffs):
            result = result * base + c
        return result

    def derivative(self) -> Poly:
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def is_real(self) -> bool:
        return all(is_real(c) for c in self.coeffs)


Z = Poly([0, 1])


def poly_gcd(p: Poly, q: Poly) -> Poly:
    while not q.is_zero():
        p, q = q, p % q
    return p.monic() if not p.is_zero() else Poly([1])


@dataclass(frozen=True, init=False, eq=False)
class RationalFunction:
    """``num/den + pole_residue/(z - pole_node)`` in canonical form."""

    num: Poly
    den: Poly
    pole_node: Fraction
    pole_residue: Number

    def __init__(self, num, den=Poly([1]), pole_node=Fraction(0), pole_residue=Fraction(0)):
        num = num if isinstance(num, Poly) else Poly([num]) if not isinstance(num, (list, tuple)) else Poly(num)
        den = den if isinstance(den, Poly) else Poly([den]) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lead = den.lead
        num = Poly([c / lead for c in num.coeffs])
        den = den.monic()
        pole_residue = exact(pole_residue)
        if not is_real(pole_residue) or pole_residue > 0:
            raise ValueError(f"pole residue must be real and <= 0, got {pole_residue}")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "pole_node", Fraction(pole_node))
        object.__setattr__(self, "pole_residue", pole_residue)

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(Poly([c]))

    @classmethod
    def identity(cls) -> RationalFunction:
        return cls(Z)

    @property
    def has_pole(self) -> bool:
        return self.pole_residue != 0

    def analytic(self) -> RationalFunction:
        return RationalFunction(self.num, self.den)

    def folded(self) -> tuple[Poly, Poly]:
        """Single quotient ``p/q`` with the pole term merged in."""
        if not self.has_pole:
            return self.num, self.den
        lin = Poly.linear(self.pole_node)
        return self.num * lin + self.den * self.pole_residue, self.den * lin

    @property
    def degree(self) -> int:
        p, q = self.folded()
        g = poly_gcd(p, q)
        p, q = p // g, q // g
        return max(p.degree, q.degree, 0)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.has_pole or other.has_pole:
            return _folded_equal(self, other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        p, q = self.folded()
        return hash((p, q))

    def __repr__(self):
        pole = f" + {self.pole_residue}/(z - {self.pole_node})" if self.has_pole else ""
        return f"RationalFunction({self.num!r} / {self.den!r}{pole})"

    # arithmetic folds the pole term; results never carry a separate pole part

    def _pq(self) -> tuple[Poly, Poly]:
        return self.folded()

    @staticmethod
    def _coerce(other) -> tuple[Poly, Poly]:
        if isinstance(other, RationalFunction):
            return other._pq()
        if isinstance(other, Poly):
            return other, Poly([1])
        return Poly([other]), Poly([1])

    def __add__(self, other):
        p, q = self._pq()
        r, s = self._coerce(other)
        return RationalFunction(p * s + r * q, q * s)

    __radd__ = __add__

    def __sub__(self, other):
        p, q = self._pq()
        r, s = self._coerce(other)
        return RationalFunction(p * s - r * q, q * s)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p, q = self._pq()
        return RationalFunction(-p, q)

    def __mul__(self, other):
        p, q = self._pq()
        r, s = self._coerce(other)
        return RationalFunction(p * r, q * s)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p, q = self._pq()
        r, s = self._coerce(other)
        if r.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(p * s, q * r)

    def __rtruediv__(self, other):
        p, q = self._pq()
        r, s = self._coerce(other)
        if p.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(r * q, s * p)

    def __call__(self, z):
        """Exact evaluation at an exact point."""
        value = self.num(z) / self.den(z)
        if self.has_pole:
            value = value + self.pole_residue / (z - self.pole_node)
        return value

    def evalf(self, z):
        """Double-precision evaluation; accepts complex scalars or numpy arrays."""
        value = self.num.evalf(z) / self.den.evalf(z)
        if self.has_pole:
            value = value + numeric_value(self.pole_residue, z) / (z - numeric_value(self.pole_node, z))
        return value

    def is_real(self) -> bool:
        return self.num.is_real() and self.den.is_real()

    def to_dict(self) -> dict:
        return {
            "num": [str(c) for c in self.num.coeffs],
            "den": [str(c) for c in self.den.coeffs],
            "pole_node": str(self.pole_node),
            "pole_residue": str(self.pole_residue),
        }


def _folded_equal(f: RationalFunction, g: RationalFunction) -> bool:
    p, q = f.folded()
    r, s = g.folded()
    return (p * s - r * q).is_zero()


def as_rational(h) -> RationalFunction:
    if isinstance(h, RationalFunction):
        return h
    if isinstance(h, Poly):
        return RationalFunction(h)
    return RationalFunction.constant(h)


def taylor_at(f: RationalFunction, x, N: int) -> TruncatedSeries:
    """Taylor coefficients through order N at ``x`` by series long division.

    A pole term located at ``x`` is excluded (it is the Laurent coefficient
    ``L_-1``, see :func:`laurent_at`); a pole term elsewhere is expanded.
    """
    x = Fraction(x)
    if f.has_pole and f.pole_node != x:
        p, q = f.folded()
    else:
        p, q = f.num, f.den
    P = p.shift(x).coeffs
    Q = q.shift(x).coeffs
    if not Q or Q[0] == 0:
        raise PoleAtNode(f"denominator vanishes at {x}")
    P = list(P) + [Fraction(0)] * (N + 1 - len(P))
    Q = list(Q) + [Fraction(0)] * (N + 1 - len(Q))
    return TruncatedSeries(x, tuple(divide(P, Q, N)))


def laurent_at(f: RationalFunction, x, N: int) -> tuple[Number, TruncatedSeries]:
    """``(L_-1, (L_0..L_N))`` at ``x``."""
    x = Fraction(x)
    residue = f.pole_residue if (f.has_pole and f.pole_node == x) else Fraction(0)
    return residue, taylor_at(f, x, N)


def degree(f: RationalFunction) -> int:
    return f.degree


@dataclass(frozen=True)
class LftMatrix:
    """2x2 matrix of polynomials acting by ``w -> (a w + b)/(c w + d)``."""

    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @classmethod
    def identity(cls) -> LftMatrix:
        return cls(Poly([1]), Poly(), Poly(), Poly([1]))

    @classmethod
    def of(cls, rows) -> LftMatrix:
        (a, b), (c, d) = rows
        p = lambda v: v if isinstance(v, Poly) else Poly([v])  # noqa: E731
        return cls(p(a), p(b), p(c), p(d))

    @classmethod
    def step(cls, s, t, x) -> LftMatrix:
        """Matrix of one augmentation by ``(s, t)`` at ``x``."""
        s, t = exact(s), exact(t)
        tu = Poly.linear(x, t)
        return cls(tu * s, -tu - s, tu, Poly([-1]))

    def __matmul__(self, other: LftMatrix) -> LftMatrix:
        return LftMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> Poly:
        return self.a * self.d - self.b * self.c

    def rows(self) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]]:
        return ((self.a, self.b), (self.c, self.d))

    def to_dict(self) -> dict:
        return {k: [str(c) for c in getattr(self, k).coeffs] for k in "abcd"}


def lft_apply(A: LftMatrix, h):
    """``L[A](h)``: closed form for rational/constant ``h``, evaluator for callables."""
    if callable(h) and not isinstance(h, (RationalFunction, Poly)):
        def evaluate(z):
            w = h(z)
            return (A.a.evalf(z) * w + A.b.evalf(z)) / (A.c.evalf(z) * w + A.d.evalf(z))

        return evaluate
    hp, hq = as_rational(h).folded()
    num = A.a * hp + A.b * hq
    den = A.c * hp + A.d * hq
    if den.is_zero():
        raise DegenerateLft("denominator of the linear fractional image vanishes identically")
    return RationalFunction(num, den)


def augment_function(h, s, t, x):
    """``s + 1/(1/(t (z - x)) - h(z))`` for rational or callable ``h``."""
    return lft_apply(LftMatrix.step(s, t, x), h)


@dataclass(frozen=True)
class Tail:
    """Built-in Pick-class tails that are analytic at the node.

    ``constant`` c (im c >= 0), ``affine`` alpha*z + beta (alpha >= 0, beta
    real), ``mobius`` -1/(z - p) + q (p, q real, p away from the node). The
    optional ``t`` is the augmentation slope used for even-n problems.
    """

    kind: str
    params: tuple = ()
    t: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(exact(v) for v in self.params))
        if self.t is not None:
            t = exact(self.t)
            if not is_real(t) or t <= 0:
                raise InvalidTail(f"augmentation slope t must be a positive real, got {t}")
            object.__setattr__(self, "t", t)
        arity = {"constant": 1, "affine": 2, "mobius": 2}
        if self.kind not in arity:
            raise InvalidTail(f"unknown tail kind {self.kind!r}")
        if len(self.params) != arity[self.kind]:
            raise InvalidTail(f"{self.kind} tail takes {arity[self.kind]} parameter(s)")
        if self.kind == "constant" and imag(self.params[0]) < 0:
            raise InvalidTail("constant tail must have non-negative imaginary part")
        if self.kind == "affine":
            alpha, beta = self.params
            if not (is_real(alpha) and is_real(beta)) or alpha < 0:
                raise InvalidTail("affine tail needs real alpha >= 0 and real beta")
        if self.kind == "mobius" and not all(is_real(v) for v in self.params):
            raise InvalidTail("mobius tail needs real pole and shift")

    @classmethod
    def constant(cls, c, t=None) -> Tail:
        return cls("constant", (c,), t)

    @classmethod
    def affine(cls, alpha, beta, t=None) -> Tail:
        return cls("affine", (alpha, beta), t)

    @classmethod
    def mobius(cls, pole, shift, t=None) -> Tail:
        return cls("mobius", (pole, shift), t)

    def function(self, x=None) -> RationalFunction:
        if self.kind == "constant":
            return RationalFunction.constant(self.params[0])
        if self.kind == "affine":
            alpha, beta = self.params
            return RationalFunction(Poly([beta, alpha]))
        pole, shift = self.params
        if x is not None and pole == Fraction(x):
            raise InvalidTail("mobius tail pole coincides with the interpolation node")
        return RationalFunction(Poly([-1]), Poly.linear(pole)) + shift

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": [str(v) for v in self.params]}
        if self.t is not None:
            d["t"] = str(self.t)
        return d


@dataclass(frozen=True)
class AugmentedTail:
    """Tail obtained by augmenting ``h`` at the node by ``(s, t)``; even-n problems."""

    s: Fraction
    t: Fraction
    h: object


@dataclass(frozen=True)
class ContinuedFraction:
    """``s1 + 1/(1/(t1 u) - s2 - 1/(1/(t2 u) - ... - tail))`` with ``u = z - x``.

    A zero ``t_j`` terminates the fraction at depth ``j - 1``; the tail is then
    the constant ``s_j``.
    """

    x: Fraction
    s: tuple
    t: tuple
    tail: object = None

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "s", tuple(exact(v) for v in self.s))
        object.__setattr__(self, "t", tuple(exact(v) for v in self.t))

    def resolved(self) -> tuple[int, object]:
        """Effective depth and innermost function after applying termination."""
        for j, tj in enumerate(self.t):
            if tj == 0:
                if j >= len(self.s):
                    raise InvalidTail(f"terminating at level {j + 1} needs s_{j + 1}")
                return j, self.s[j]
            if not is_real(tj) or tj < 0:
                raise InvalidTail(f"t_{j + 1} = {tj} must be a non-negative real")
        depth = len(self.t)
        if len(self.s) < depth:
            raise InvalidTail(f"{depth} levels need {depth} values of s, got {len(self.s)}")
        tail = self.tail
        if tail is None:
            if len(self.s) > depth:
                return depth, self.s[depth]
            raise InvalidTail("non-terminating fraction needs a tail")
        return depth, tail


def _tail_value(tail, x):
    if isinstance(tail, Tail):
        return tail.function(x)
    if isinstance(tail, AugmentedTail):
        return augment_function(_tail_value(tail.h, x), tail.s, tail.t, x)
    if isinstance(tail, (RationalFunction, Poly)) or callable(tail):
        return tail
    try:
        return exact(tail)
    except (TypeError, ValueError) as exc:
        raise InvalidTail(f"unsupported tail {tail!r}") from exc


def build_continued_fraction(cf: ContinuedFraction):
    """Assemble the fraction from the inside out.

    Returns a :class:`RationalFunction` when the tail is a constant or rational
    function, otherwise a pointwise evaluator.
    """
    depth, tail = cf.resolved()
    f = _tail_value(tail, cf.x)
    if isinstance(f, Poly) or not callable(f):
        f = as_rational(f)
    for j in range(depth - 1, -1, -1):
        f = augment_function(f, cf.s[j], cf.t[j], cf.x)
    return f


def compose_lft_chain(params, x) -> LftMatrix:
    """``A_1(z) A_2(z) ... A_m(z)`` for a table exposing ``s`` and ``t``."""
    A = LftMatrix.identity()
    for s, t in zip(params.s, params.t):
        A = A @ LftMatrix.step(s, t, x)
    return A
