"""Exact truncated power series at a real node.

Coefficients are :class:`fractions.Fraction` for real values and
:class:`ComplexRational` otherwise; arithmetic never touches floating point.
The module also provides the Julia reduction/augmentation pair at the level of
Taylor coefficients, which is the workhorse of the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DegenerateDerivative, InvalidAugmentation, ProblemFileError

__all__ = [
    "ComplexRational",
    "Number",
    "ProblemData",
    "TruncatedSeries",
    "augment_series",
    "compose",
    "conj",
    "crat",
    "exact",
    "imag",
    "inverse",
    "is_real",
    "multiply",
    "parse_number",
    "real",
    "reduce_series",
    "rho",
    "split_pole",
    "to_complex",
]


@dataclass(frozen=True, slots=True)
class ComplexRational:
    """Gaussian rational ``re + im*i`` with exact parts.

    Arithmetic results with zero imaginary part come back as plain
    ``Fraction`` so real data stays real through every computation.
    """

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re + ore, self.im + oim)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re - ore, self.im - oim)

    def __rsub__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return crat(ore - self.re, oim - self.im)

    def __mul__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re * ore - self.im * oim, self.re * oim + self.im * ore)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        d = ore * ore + oim * oim
        if d == 0:
            raise ZeroDivisionError("complex rational division by zero")
        return crat((self.re * ore + self.im * oim) / d, (self.im * ore - self.re * oim) / d)

    def __rtruediv__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(ore, oim) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        result: Number = Fraction(1)
        base: Number = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        try:
            ore, oim = _parts(other)
        except TypeError:
            return NotImplemented
        return self.re == ore and self.im == oim

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> Number:
        return crat(self.re, -self.im)

    def __str__(self):
        if self.re == 0:
            return f"{_imag_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}i"

    def __repr__(self):
        return f"ComplexRational({self})"


Number = Union[Fraction, ComplexRational]

I = ComplexRational(Fraction(0), Fraction(1))


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return ""
    if v == -1:
        return "-"
    return str(v)


def _parts(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, ComplexRational):
        return v.re, v.im
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return Fraction(v), Fraction(0)
    raise TypeError(f"not an exact number: {v!r}")


def crat(re, im=0) -> Number:
    """Exact number from parts; real results are returned as ``Fraction``."""
    re, im = Fraction(re), Fraction(im)
    if im == 0:
        return re
    return ComplexRational(re, im)


def exact(v) -> Number:
    """Coerce ``int``/``Fraction``/``ComplexRational``/``str`` to an exact number.

    Floats are refused: they would smuggle rounding into exact data.
    """
    if isinstance(v, str):
        return parse_number(v)
    if isinstance(v, (float, complex)):
        raise TypeError(f"refusing inexact value {v!r}; pass a Fraction or a string")
    return crat(*_parts(v))


def real(v: Number) -> Fraction:
    return _parts(v)[0]


def imag(v: Number) -> Fraction:
    return _parts(v)[1]


def is_real(v: Number) -> bool:
    return _parts(v)[1] == 0


def conj(v: Number) -> Number:
    re, im = _parts(v)
    return crat(re, -im)


def to_complex(v: Number) -> complex:
    re, im = _parts(v)
    return complex(float(re), float(im))


def parse_number(text: str) -> Number:
    """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"i"``, ``"-2i"``, ``"0.25"`` exactly."""
    s = text.replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty number")
    try:
        if not s.endswith("i"):
            return Fraction(s)
        body = s[:-1]
        split = None
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                split = k
                break
        re_text, im_text = ("", body) if split is None else (body[:split], body[split:])
        if im_text in ("", "+"):
            im = Fraction(1)
        elif im_text == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_text)
        re = Fraction(re_text) if re_text else Fraction(0)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as an exact number") from exc
    return crat(re, im)


def format_number(v: Number) -> str:
    return str(exact(v))


@dataclass(frozen=True)
class ProblemData:
    """Node ``x``, optional Laurent coefficient ``a_neg1`` and targets ``a[0..n]``."""

    x: Fraction
    a: tuple
    a_neg1: Number | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "a", tuple(exact(v) for v in self.a))
        if self.a_neg1 is not None:
            object.__setattr__(self, "a_neg1", exact(self.a_neg1))
        if not self.a:
            raise ProblemFileError("at least one target coefficient a^0 is required", field="a")

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def residue(self) -> Number:
        return Fraction(0) if self.a_neg1 is None else self.a_neg1

    def series(self) -> TruncatedSeries:
        return TruncatedSeries(self.x, self.a)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c[0..N]`` of a power series in ``u = z - base_point``.

    Nothing is assumed about coefficients past index ``N``.
    """

    base_point: Fraction
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "base_point", Fraction(self.base_point))
        object.__setattr__(self, "coeffs", tuple(exact(v) for v in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return replace(self, coeffs=self.coeffs[: order + 1])


def _as_series(f) -> TruncatedSeries:
    if isinstance(f, TruncatedSeries):
        return f
    return TruncatedSeries(Fraction(0), tuple(f))


# -- plain coefficient-list arithmetic, all truncated at a caller-given order --


def multiply(a: Sequence[Number], b: Sequence[Number], order: int) -> list[Number]:
    out: list[Number] = []
    for k in range(order + 1):
        acc: Number = Fraction(0)
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


def inverse(a: Sequence[Number], order: int) -> list[Number]:
    """Reciprocal series; requires ``a[0] != 0`` and ``len(a) > order``."""
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = 1 / a[0]
    out: list[Number] = [inv0]
    for k in range(1, order + 1):
        acc: Number = Fraction(0)
        for i in range(1, min(k, len(a) - 1) + 1):
            acc = acc + a[i] * out[k - i]
        out.append(-acc * inv0)
    return out


def divide(a: Sequence[Number], b: Sequence[Number], order: int) -> list[Number]:
    return multiply(a, inverse(b, order), order)


def compose(outer: Sequence[Number], inner: Sequence[Number], order: int) -> list[Number]:
    """``outer(inner(v))`` for an inner series without constant term."""
    if inner and inner[0] != 0:
        raise ValueError("inner series must vanish at the origin")
    result: list[Number] = [outer[-1]] + [Fraction(0)] * order
    for c in reversed(outer[:-1]):
        result = multiply(result, inner, order)
        result[0] = result[0] + c
    return result[: order + 1]


def rho(a: Iterable[Number]) -> float | int:
    """Index of the first non-real term, or ``math.inf`` when all are real."""
    for k, v in enumerate(a):
        if not is_real(v):
            return k
    return math.inf


def reduce_series(f) -> TruncatedSeries:
    """Julia reduction ``-1/(f - f0) + 1/(f1 u)`` of an order-N series.

    Returns the order ``N - 2`` coefficients ``g`` obtained by forward
    substitution in the triangular Toeplitz system whose rows are built from
    ``f1, f2, ...`` and whose right-hand side is ``(f2, f3, ...)/f1``.
    """
    f = _as_series(f)
    if f.order < 2:
        raise ValueError(f"reduction needs a series of order >= 2, got {f.order}")
    c = f.coeffs
    f1 = c[1]
    if f1 == 0:
        raise DegenerateDerivative("first-order coefficient vanishes; reduction undefined")
    g: list[Number] = []
    for k in range(f.order - 1):
        acc: Number = c[k + 2] / f1
        for i in range(1, k + 1):
            acc = acc - c[i + 1] * g[k - i]
        g.append(acc / f1)
    return TruncatedSeries(f.base_point, tuple(g))


def augment_series(g, a0, a1) -> TruncatedSeries:
    """Coefficients of ``a0 + 1/(1/(a1 u) - g(u))`` through order ``g.order + 2``.

    Inverse of :func:`reduce_series` when ``a1`` equals the first-order
    coefficient of the original series.
    """
    g = _as_series(g)
    a0, a1 = exact(a0), exact(a1)
    if not is_real(a1) or a1 <= 0:
        raise InvalidAugmentation(f"augmentation slope must be a positive real, got {a1}")
    order = g.order + 2
    # a0 + a1 u / (1 - a1 u g(u))
    w: list[Number] = [Fraction(1)] + [-a1 * gk for gk in g.coeffs]
    inv = inverse(w, order - 1)
    return TruncatedSeries(g.base_point, (a0,) + tuple(a1 * v for v in inv))


def split_pole(p: ProblemData) -> tuple[Number, ProblemData]:
    """Separate the prescribed residue from the analytic sub-problem.

    Sign and reality of the residue are judged by the caller.
    """
    return p.residue, replace(p, a_neg1=None)
