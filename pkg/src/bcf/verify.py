"""Floating-point and sampling oracles, independent of the exact machinery.

None of these decide anything on their own; they cross-check the exact
classifier and the constructed interpolants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Sequence

import mpmath
import numpy as np

from .rational import RationalFunction, numeric_value, taylor_at
from .series import Number, ProblemData, exact, to_complex

SE_EPSILONS = (1e-1, 1e-2, 1e-4, 1e-6, 1e-8)


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric tolerances and grid sizes for every oracle.

    ``taylor_rel_tol`` is relative with a floor of one: a coefficient passes
    when ``|err| <= tol * max(1, |target|)``.
    """

    psd_eig_tol: float = 1e-9
    taylor_rel_tol: float = 1e-6
    im_floor: float = -1e-9
    boundary_tol: float = 1e-9
    boundary_grid: int = 4096
    pick_grid: int = 10_000
    sample_grid: int = 256
    taylor_precision: int = 40

    def __post_init__(self):
        for name in ("psd_eig_tol", "taylor_rel_tol", "boundary_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.im_floor > 0:
            raise ValueError("im_floor must not be positive")
        for name in ("boundary_grid", "pick_grid", "sample_grid", "taylor_precision"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")

    def with_overrides(self, overrides: dict[str, str]) -> ToleranceConfig:
        kinds = {f.name: f.type for f in fields(self)}
        values = {}
        for key, text in overrides.items():
            if key not in kinds:
                raise KeyError(f"unknown tolerance {key!r}; known: {sorted(kinds)}")
            values[key] = int(text) if kinds[key] in (int, "int") else float(text)
        return replace(self, **values)


DEFAULT = ToleranceConfig()


@dataclass
class Check:
    name: str
    passed: bool
    residual: float | None = None
    worst_point: str | None = None
    detail: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        return {"passed": self.passed, "seed": self.seed, "checks": [asdict(c) for c in self.checks]}


def _as_float_matrix(H) -> np.ndarray:
    if hasattr(H, "rows"):
        H = H.rows()
    return np.array([[float(v) for v in r] for r in H], dtype=float).reshape(len(H), len(H))


def psd_oracle(H, tol: float = DEFAULT.psd_eig_tol) -> bool:
    """Smallest eigenvalue ``>= -tol * ||H||_2``."""
    A = _as_float_matrix(H)
    if A.size == 0:
        return True
    norm = np.linalg.norm(A, 2)
    return bool(np.linalg.eigvalsh(A).min() >= -tol * norm)


def se_minimal_oracle(H, tol: float = DEFAULT.psd_eig_tol, epsilons: Sequence[float] = SE_EPSILONS) -> bool:
    """PSD, and lowering the bottom-right entry by any probe ``eps`` breaks PSD.

    Probes below ``100 * tol * ||H||`` are skipped: there the perturbation is
    within the PSD oracle's own tolerance and cannot be resolved.
    """
    A = _as_float_matrix(H)
    if not psd_oracle(A, tol):
        return False
    if A.size == 0:
        return False
    norm = np.linalg.norm(A, 2)
    floor = 100 * tol * norm
    for eps in epsilons:
        if eps <= floor:
            continue
        B = A.copy()
        B[-1, -1] -= eps
        if psd_oracle(B, tol):
            return False
    return True


def _denominator_roots(f: RationalFunction) -> np.ndarray:
    coeffs = [to_complex(c) for c in reversed(f.den.coeffs)]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([], dtype=complex)
    return roots


def default_radius(f, x) -> float:
    """Half the distance from ``x`` to the nearest singularity, when it can be found."""
    if isinstance(f, RationalFunction):
        sing = list(_denominator_roots(f))
        if f.has_pole and f.pole_node != x:
            sing.append(complex(float(f.pole_node)))
        if not sing:
            return 1.0
        return 0.5 * min(abs(s - float(x)) for s in sing)
    radius = getattr(f, "safe_radius", None)
    return float(radius) if radius else 1e-2


def taylor_oracle(
    f: Callable,
    x,
    N: int,
    radius: float | None = None,
    points: int | None = None,
    precision: int | None = None,
) -> list[complex]:
    """Taylor coefficients ``c_0..c_N`` at ``x`` by the trapezoidal Cauchy integral.

    With ``precision`` (decimal digits) the samples are taken in mpmath, with
    extra guard digits for small radii.
    """
    r = default_radius(f, x) if radius is None else radius
    M = points or max(64, 4 * (N + 1))
    k = np.arange(M)
    if precision is None:
        z = _center(x) + r * np.exp(2j * np.pi * k / M)
        try:
            values = np.asarray(f(z), dtype=complex)
            if values.shape != z.shape:
                raise TypeError
        except (TypeError, ValueError):
            values = np.array([complex(f(complex(zj))) for zj in z])
        coeffs = np.fft.fft(values) / M
        return [complex(coeffs[j] / r**j) for j in range(N + 1)]
    # c_N r^N is N log10(1/r) digits below the sampled values
    guard = math.ceil(N * max(0.0, -math.log10(r)))
    with mpmath.workdps(precision + guard):
        xm = _center(x, mp=True)
        rm = mpmath.mpf(r)
        roots = [mpmath.expjpi(mpmath.mpf(2 * j) / M) for j in range(M)]
        values = [f(xm + rm * w) for w in roots]
        out = []
        for n in range(N + 1):
            acc = mpmath.fsum(v * roots[(-j * n) % M] for j, v in enumerate(values))
            out.append(complex(acc / M / rm**n))
        return out


def _center(x, mp: bool = False):
    """Expansion point as complex (or mpmath) from an exact or floating value."""
    try:
        x = exact(x)
    except TypeError:
        return mpmath.mpc(x) if mp else complex(x)
    return numeric_value(x, mpmath.mpc(0)) if mp else to_complex(x)


def taylor_residuals(approx: Sequence[complex], targets: Sequence[Number]) -> list[float]:
    """Relative errors with a floor of one on the scale."""
    return [abs(a - to_complex(t)) / max(1.0, abs(to_complex(t))) for a, t in zip(approx, targets)]


def log_grid(count: int, center=0.0, r_min: float = 1e-3, r_max: float = 1e3) -> np.ndarray:
    """Deterministic grid in the open upper half plane around ``center``.

    Radii are log-spaced, angles uniform in ``(0, pi)``.
    """
    n_r = max(1, int(round(math.sqrt(count))))
    n_t = max(1, math.ceil(count / n_r))
    radii = np.geomspace(r_min, r_max, n_r)
    angles = np.pi * (np.arange(n_t) + 0.5) / n_t
    z = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()[:count]
    return float(center) + z


def random_grid(count: int, seed: int, center=0.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    radii = 10 ** rng.uniform(-3, 3, count)
    angles = rng.uniform(0, np.pi, count)
    return float(center) + radii * np.exp(1j * angles)


def evaluate(f: Callable, z: np.ndarray) -> np.ndarray:
    if isinstance(f, RationalFunction):
        return np.asarray(f.evalf(z), dtype=complex)
    try:
        values = np.asarray(f(z), dtype=complex)
        if values.shape == z.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(complex(zj))) for zj in z])


def pick_sample(f: Callable, grid: np.ndarray | None = None, im_floor: float = DEFAULT.im_floor) -> Check:
    """Minimum of ``im f`` over the grid; passes iff it is at least ``im_floor``."""
    z = log_grid(DEFAULT.pick_grid) if grid is None else np.asarray(grid)
    with np.errstate(all="ignore"):
        values = evaluate(f, z)
    im = values.imag
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.argmax(bad))
        return Check("pick_sample", False, float("nan"), repr(complex(z[j])), "non-finite value")
    j = int(np.argmin(im))
    return Check("pick_sample", bool(im[j] >= im_floor), float(im[j]), repr(complex(z[j])))


def _laurent_ring(g, x: float, r: float, points: int = 128, order: int = 6):
    """Scaled coefficients ``c_k r^k`` for ``k = 0..order`` and ``k = -1..-order``."""
    z = x + r * np.exp(2j * np.pi * np.arange(points) / points)
    with np.errstate(all="ignore"):
        values = np.array([complex(g(complex(zj))) for zj in z])
    coeffs = np.fft.fft(values) / points
    return coeffs[: order + 1], coeffs[points - order :]


def estimate_safe_radius(f: Callable, x, residue=0, start: float = 0.5, floor: float = 1e-6) -> float:
    """Largest tested radius on which the analytic part of ``f`` has no singularity.

    On the circle of radius ``r`` the negative Laurent coefficients must vanish,
    and the Taylor coefficients must agree with those from radius ``0.7 r``.
    """
    xf = float(x)
    res = float(residue)

    def g(z):
        return f(z) - (res / (z - xf) if res else 0)

    r = start
    while r > floor:
        try:
            pos, neg = _laurent_ring(g, xf, r)
            inner, _ = _laurent_ring(g, xf, 0.7 * r)
            if np.all(np.isfinite(pos)) and np.all(np.isfinite(neg)):
                # compare in units of the outer circle so small radii do not amplify noise
                rescaled = inner / 0.7 ** np.arange(len(inner))
                scale = max(1.0, float(np.abs(pos).max()))
                if np.abs(neg).max() <= 1e-9 * scale and np.abs(pos - rescaled).max() <= 1e-9 * scale:
                    return r * 0.7
        except (ZeroDivisionError, OverflowError):
            pass
        r /= 2
    return floor


def verify_solution(
    p: ProblemData,
    f,
    config: ToleranceConfig = DEFAULT,
    seed: int = 0,
    exact_check: bool = True,
) -> Report:
    """Taylor match (exact when possible, and numeric) plus Pick-class sampling."""
    report = Report(seed=seed)
    x = p.x
    targets = list(p.a)
    if isinstance(f, RationalFunction) and exact_check:
        got_res = f.pole_residue if (f.has_pole and f.pole_node == x) else 0
        try:
            got = list(taylor_at(f, x, p.n).coeffs)
            ok = got == targets and got_res == p.residue
            detail = "" if ok else f"got {[str(v) for v in got]}, residue {got_res}"
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.add(Check("taylor_exact", ok, 0.0 if ok else None, detail=detail))

    res = float(p.residue)
    xf = float(x)

    def analytic(z):
        v = f(z) if not isinstance(f, RationalFunction) else f.evalf(z)
        return v - (res / (z - xf) if res else 0)

    radius = default_radius(f, x)
    precision = config.taylor_precision
    approx = taylor_oracle(analytic, x, p.n, radius=radius, precision=precision)
    resid = taylor_residuals(approx, targets)
    worst = max(resid) if resid else 0.0
    report.add(Check("taylor_numeric", bool(worst <= config.taylor_rel_tol), float(worst), detail=f"radius={radius:.3g}"))

    grid = np.concatenate([log_grid(config.pick_grid, center=xf), random_grid(256, seed, center=xf)])
    check = pick_sample(f, grid, config.im_floor)
    report.add(check)
    return report
