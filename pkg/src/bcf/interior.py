"""Interior interpolation: targets with ``im a^0 > 0``.

The data are carried to the unit disc by the Cayley transform, where a Schur
function with the transported Taylor data at the boundary point ``tau`` is
built as a polynomial

    phi_hat(z) = b^q (z - tau)^q Q(z) h_N(z),
    h_N(z)     = 1 - (1 - ((tau + z) / (2 tau))^N)^m_exp,

after a disc automorphism has moved ``b^0`` to the origin. ``N`` is chosen
numerically so that ``|phi_hat| <= 1`` on the circle.

Coefficient bookkeeping is exact (Gaussian rationals); evaluation is in double
precision, or in mpmath when called with mpmath numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotInterior, NotSchurData, SelectionBudgetExceeded
from .rational import Poly, numeric_value
from .series import (
    I,
    Number,
    ProblemData,
    compose,
    conj,
    divide,
    imag,
    real,
    to_complex,
)


@dataclass(frozen=True)
class SchurData:
    """Boundary node ``tau`` (exactly unimodular) and Taylor targets ``b`` there."""

    tau: Number
    b: tuple

    def __post_init__(self):
        if real(self.tau) ** 2 + imag(self.tau) ** 2 != 1:
            raise NotSchurData(f"tau = {self.tau} is not on the unit circle")
        b0 = self.b[0]
        if real(b0) ** 2 + imag(b0) ** 2 >= 1:
            raise NotSchurData(f"|b^0| must be < 1, got b^0 = {b0}")

    @property
    def n(self) -> int:
        return len(self.b) - 1


def cayley_node(x) -> Number:
    """``(x - i)/(x + i)``: image of the real node on the unit circle."""
    x = Fraction(x)
    return (x - I) / (x + I)


def transport_to_disc(p: ProblemData) -> SchurData:
    """Taylor data at ``tau`` of ``zeta -> C(f(z(zeta)))`` for any ``f`` with data ``a`` at ``x``.

    ``z(zeta) = i (1 + zeta)/(1 - zeta)`` and ``C(w) = (w - i)/(w + i)``; the
    composition is carried out exactly on truncated series in ``v = zeta - tau``.
    """
    a = p.a
    if imag(a[0]) <= 0:
        raise NotInterior(f"im a^0 must be positive, got a^0 = {a[0]}")
    n = p.n
    tau = cayley_node(p.x)
    # z(tau + v) - x as a series in v
    num = [I * (1 + tau), I]
    den = [1 - tau, Fraction(-1)]
    zs = divide(num + [Fraction(0)] * n, den + [Fraction(0)] * n, n)
    zs[0] = zs[0] - p.x
    if zs[0] != 0:
        raise AssertionError("Cayley node mismatch")
    F = compose(list(a), zs, n)
    top = [F[0] - I] + F[1:]
    bottom = [F[0] + I] + F[1:]
    b = divide(top, bottom, n)
    return SchurData(tau, tuple(b))


def h_N(z, tau: complex, N: int, m_exp: int):
    """``1 - (1 - ((tau + z)/(2 tau))^N)^m_exp``; works on arrays and mpmath numbers."""
    w = (tau + z) / (2 * tau)
    return 1 - (1 - w**N) ** m_exp


def h_N_derivative(z, tau: complex, N: int, m_exp: int):
    w = (tau + z) / (2 * tau)
    return m_exp * (1 - w**N) ** (m_exp - 1) * N * w ** (N - 1) / (2 * tau)


@dataclass(frozen=True)
class InteriorInterpolant:
    """Recorded construction of a Schur interpolant and its Pick-class image.

    ``moebius`` is the disc automorphism centre ``c = b^0``; ``q = 0`` marks the
    degenerate case ``phi_hat == 0`` (then ``phi`` is the constant ``c``).
    """

    data: SchurData
    x: Fraction | None
    moebius: Number
    b_hat: tuple
    q: int
    Q: Poly
    N: int
    m_exp: int

    @property
    def tau(self) -> Number:
        return self.data.tau

    def _scalars(self, z):
        return numeric_value(self.tau, z), numeric_value(self.moebius, z)

    def phi_hat(self, z):
        if self.q == 0:
            return 0 * z
        if isinstance(z, np.ndarray):
            tau = to_complex(self.tau)
            lead = to_complex(self.b_hat[self.q])
        else:
            tau = numeric_value(self.tau, z)
            lead = numeric_value(self.b_hat[self.q], z)
        v = z - tau
        return lead * v**self.q * self.Q.evalf(v) * h_N(z, tau, self.N, self.m_exp)

    def phi(self, z):
        """Schur interpolant at ``tau``: Möbius image of :meth:`phi_hat`."""
        ph = self.phi_hat(z)
        c = to_complex(self.moebius) if isinstance(z, np.ndarray) else numeric_value(self.moebius, z)
        cbar = c.conjugate()
        return (ph + c) / (1 + cbar * ph)

    def pick(self, z):
        """Pick-class interpolant at ``x``: ``i (1 + phi)/(1 - phi)`` at ``zeta(z)``."""
        i = 1j if isinstance(z, np.ndarray) else numeric_value(I, z)
        zeta = (z - i) / (z + i)
        ph = self.phi(zeta)
        return i * (1 + ph) / (1 - ph)

    __call__ = pick

    def to_dict(self) -> dict:
        return {
            "tau": str(self.tau),
            "b": [str(v) for v in self.data.b],
            "moebius_center": str(self.moebius),
            "b_hat": [str(v) for v in self.b_hat],
            "q": self.q,
            "Q": [str(c) for c in self.Q.coeffs],
            "N": self.N,
            "m_exp": self.m_exp,
        }


def _core_factor(b_hat: tuple, q: int, tau: complex):
    """``B(z) = b^q (z - tau)^q Q(z)`` and its derivative as numpy callables."""
    lead = to_complex(b_hat[q])
    Qc = np.array([to_complex(v / b_hat[q]) for v in b_hat[q:]], dtype=complex)
    P = np.polynomial.Polynomial(np.concatenate([np.zeros(q, dtype=complex), Qc]) * lead)
    dP = P.deriv()
    return (lambda z: P(z - tau)), (lambda z: dP(z - tau))


def boundary_excess(b_hat, q, tau, N, m_exp, grid: int):
    """``max |phi_hat| + Lipschitz pad`` over an equispaced grid of the circle.

    The pad bounds the growth between grid points by the largest sampled
    derivative times the half spacing, doubled for safety.
    """
    tau_c = to_complex(tau)
    theta = 2 * np.pi * np.arange(grid) / grid
    z = tau_c * np.exp(1j * theta)
    B, dB = _core_factor(b_hat, q, tau_c)
    Bz = B(z)
    hz = h_N(z, tau_c, N, m_exp)
    vals = np.abs(Bz * hz)
    deriv = np.abs(dB(z) * hz + Bz * h_N_derivative(z, tau_c, N, m_exp))
    pad = 2 * deriv.max() * (np.pi / grid)
    return float(vals.max() + pad)


def grid_size(N: int, m_exp: int, base: int = 4096) -> int:
    # h_N oscillates on the scale 1/N; keep several points per oscillation
    return max(base, 8 * N * m_exp)


def select_N(b_hat, q, tau, m_exp, base_grid: int = 4096, N_max: int = 1 << 16) -> int:
    """Smallest ``N`` (linear scan to 256, then doubling and bisection) certifying ``|phi_hat| <= 1``."""
    if q == 0:
        return 1

    def ok(N):
        return boundary_excess(b_hat, q, tau, N, m_exp, grid_size(N, m_exp, base_grid)) <= 1

    for N in range(1, 257):
        if ok(N):
            return N
    lo, hi = 256, 512
    while not ok(hi):
        lo, hi = hi, hi * 2
        if hi > N_max:
            raise SelectionBudgetExceeded(f"no admissible N up to {N_max}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def build_schur_interpolant(d: SchurData, config=None, x=None) -> InteriorInterpolant:
    """Polynomial Schur interpolant (after a disc automorphism) for ``d``."""
    n = d.n
    c = d.b[0]
    cbar = conj(c)
    # Möbius (phi - c)/(1 - conj(c) phi) applied to the target series
    top = [d.b[0] - c] + list(d.b[1:])
    bottom = [1 - cbar * d.b[0]] + [-cbar * v for v in d.b[1:]]
    b_hat = tuple(divide(top, bottom, n))
    q = next((k for k in range(1, n + 1) if b_hat[k] != 0), 0)
    m_exp = n + 1
    if q == 0:
        Q = Poly([1])
        N = 1
    else:
        Q = Poly([b_hat[q + k] / b_hat[q] for k in range(n - q + 1)])
        base = getattr(config, "boundary_grid", 4096)
        N = select_N(b_hat, q, d.tau, m_exp, base_grid=base)
    node = x if x is not None else _node_of(d.tau)
    return InteriorInterpolant(d, node, c, b_hat, q, Q, N, m_exp)


def _node_of(tau: Number) -> Fraction | None:
    # inverse Cayley: x = i (1 + tau)/(1 - tau); tau = 1 is the point at infinity
    if tau == 1:
        return None
    x = I * (1 + tau) / (1 - tau)
    return Fraction(real(x))


# transported coefficients this small keep the selected N at or near 1
NORMAL_TARGET = Fraction(1, 4)


def normalize(p: ProblemData) -> tuple[ProblemData, Fraction, Fraction, Fraction]:
    """Data for ``g`` at node 0 with ``g^0 = i`` and ``|g^k| <= 1/4``.

    Any Pick ``g`` with these targets gives ``f(z) = alpha g(lam (z - x)) + beta``
    with the original targets, since ``alpha, lam > 0`` and real ``beta``
    preserve the upper half plane. ``lam`` is a power of two.
    """
    a = p.a
    if imag(a[0]) <= 0:
        raise NotInterior(f"im a^0 must be positive, got a^0 = {a[0]}")
    beta, alpha = real(a[0]), imag(a[0])
    g = [v / alpha for v in a[1:]]
    lam = Fraction(1)

    def too_big(k, v):
        return real(v) ** 2 + imag(v) ** 2 > NORMAL_TARGET**2 * lam ** (2 * k)

    while any(too_big(k, v) for k, v in enumerate(g, start=1)):
        lam *= 2
    scaled = [I] + [v / lam**k for k, v in enumerate(g, start=1)]
    return ProblemData(Fraction(0), scaled), lam, alpha, beta


@dataclass(frozen=True)
class ScaledInterior:
    """``alpha * core(lam (z - x)) + beta`` for a core interpolant built at node 0."""

    core: InteriorInterpolant
    x: Fraction
    lam: Fraction
    alpha: Fraction
    beta: Fraction

    data = property(lambda self: self.core.data)
    tau = property(lambda self: self.core.tau)
    N = property(lambda self: self.core.N)
    m_exp = property(lambda self: self.core.m_exp)

    def phi(self, z):
        return self.core.phi(z)

    def pick(self, z):
        x, lam, alpha, beta = (self.x, self.lam, self.alpha, self.beta)
        if not isinstance(z, np.ndarray):
            x, lam, alpha, beta = (numeric_value(v, z) for v in (x, lam, alpha, beta))
        else:
            x, lam, alpha, beta = (float(v) for v in (x, lam, alpha, beta))
        return alpha * self.core.pick(lam * (z - x)) + beta

    __call__ = pick

    @property
    def taylor_radius(self) -> float:
        """A radius around ``x`` well inside the region where ``pick`` is analytic."""
        return 0.25 / (float(self.lam) * self.N * self.m_exp)

    def to_dict(self) -> dict:
        return {
            **self.core.to_dict(),
            "scaling": {"x": str(self.x), "lam": str(self.lam), "alpha": str(self.alpha), "beta": str(self.beta)},
        }


def interior_solution(p: ProblemData, config=None) -> ScaledInterior:
    """Interpolant for interior data via :func:`normalize` and the disc construction."""
    q, lam, alpha, beta = normalize(p)
    core = build_schur_interpolant(transport_to_disc(q), config=config, x=q.x)
    return ScaledInterior(core, Fraction(p.x), lam, alpha, beta)


def boundary_max(interp: InteriorInterpolant, grid: int = 4096) -> float:
    tau = to_complex(interp.tau)
    z = tau * np.exp(2j * np.pi * np.arange(grid) / grid)
    return float(np.abs(interp.phi(z)).max())


__all__ = [
    "InteriorInterpolant",
    "ScaledInterior",
    "SchurData",
    "boundary_excess",
    "boundary_max",
    "build_schur_interpolant",
    "cayley_node",
    "h_N",
    "interior_solution",
    "normalize",
    "select_N",
    "transport_to_disc",
]

