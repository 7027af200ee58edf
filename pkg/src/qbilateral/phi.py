"""Basic hypergeometric series r+1 phi r and their analytic continuation.

For |z| < 1 the series is summed directly.  Beyond the unit disk we use the
contour representation

    phi(x q^n) = [t^n] F_x(t),

    F_x(t) = (q, a_1..a_{r+1}; q)_inf / (x, q/x, b_1..b_r; q)_inf
             * (x t, q/(x t), b_1/t..b_r/t; q)_inf / (t, a_1/t..a_{r+1}/t; q)_inf,

where [t^n] is the Laurent coefficient on the annulus max|a_i| < |t| < 1.
The coefficient is extracted by the trapezoidal rule on a circle.  A large
argument z is first written as x0 q^n with |q| < |x0| <= 1 so the kernel
stays O(1) on the contour; the representation above is exactly invariant
under this shift because (x t, q/(x t))_inf / (x, q/x)_inf picks up t^-1
when x -> x q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, NonConvergence, PoleProximity
from .qcore import (
    EvalResult,
    check_base,
    nearest_negative_power,
    qpoch_infinite_vec,
    qpoch_ratio,
)

CUT_BAND = 1e-9
SERIES_RADIUS = 1.0 - 1e-9
DEN_BAND = 1e-10
MAX_SERIES_TERMS = 100_000
NOISE_FACTOR = 256 * np.finfo(float).eps


@dataclass(frozen=True)
class PhiSpec:
    """One r+1 phi r instance: numerator and denominator parameters, base, argument."""

    num: tuple
    den: tuple
    q: complex
    z: complex

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(complex(v) for v in self.num))
        object.__setattr__(self, "den", tuple(complex(v) for v in self.den))
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "z", complex(self.z))

    def violations(self) -> list:
        out = []
        if len(self.num) != len(self.den) + 1:
            out.append(
                f"len(num)={len(self.num)} must equal len(den)+1={len(self.den) + 1}"
            )
        try:
            check_base(self.q)
        except DomainError as exc:
            out.append(str(exc))
            return out
        for b in self.den:
            if nearest_negative_power(b, self.q) < DEN_BAND:
                out.append(f"denominator parameter {b} is within {DEN_BAND} of q^-m")
        if distance_to_cut(self.z) < CUT_BAND:
            out.append(f"argument z={self.z} lies within {CUT_BAND} of the cut [1, inf)")
        return out


@dataclass(frozen=True)
class GeneralProductSpec:
    """prod (alpha t)/(gamma t) * prod (beta/t)/(delta/t), all (.; q)_inf."""

    alpha: tuple = ()
    gamma: tuple = ()
    beta: tuple = ()
    delta: tuple = ()
    q: complex = 0.5

    def __post_init__(self):
        for name in ("alpha", "gamma", "beta", "delta"):
            object.__setattr__(self, name, tuple(complex(v) for v in getattr(self, name)))
        object.__setattr__(self, "q", complex(self.q))

    def annulus(self) -> tuple:
        inner = max((abs(d) for d in self.delta), default=0.0)
        outer = min((1.0 / abs(g) for g in self.gamma if g != 0), default=math.inf)
        return inner, outer


@dataclass(frozen=True)
class QuadratureConfig:
    radius: Optional[float] = None
    min_nodes: int = 64
    max_nodes: int = 65536
    tol: float = 1e-11

    def __post_init__(self):
        if self.min_nodes < 8:
            raise ValueError("min_nodes must be >= 8")
        if self.max_nodes < self.min_nodes:
            raise ValueError("max_nodes must be >= min_nodes")
        for n in (self.min_nodes, self.max_nodes):
            if n & (n - 1):
                raise ValueError(f"node counts must be powers of two, got {n}")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT_QUAD = QuadratureConfig()


def distance_to_cut(z: complex) -> float:
    """Euclidean distance from z to the ray [1, inf)."""
    z = complex(z)
    if z.real >= 1.0:
        return abs(z.imag)
    return abs(z - 1.0)


def _require(spec: PhiSpec):
    bad = spec.violations()
    if bad:
        raise DomainError("; ".join(bad), bad)


def phi_series(spec: PhiSpec, tol: float = 1e-15) -> EvalResult:
    """Sum the power series for |z| < 1 via the term ratio recursion."""
    _require(spec)
    q, z = spec.q, spec.z
    if abs(z) >= SERIES_RADIUS:
        raise DomainError(f"series needs |z| < 1 - 1e-9, got |z|={abs(z)}")
    if z == 0:
        return EvalResult(1.0 + 0j, 0.0, 1, "series")
    aq = list(spec.num)
    bq = list(spec.den)
    qj = 1.0 + 0j
    term = 1.0 + 0j
    total = 1.0 + 0j
    small = 0
    ratio = 1.0
    prev_abs = 1.0
    for j in range(MAX_SERIES_TERMS):
        numer = z
        for i, a in enumerate(aq):
            numer *= 1.0 - a
            aq[i] = a * q
        denom = 1.0 - qj * q
        for i, b in enumerate(bq):
            f = 1.0 - b
            if abs(f) < DEN_BAND:
                raise PoleProximity(f"(b;q)_j vanishes for b={spec.den[i]} at j={j}")
            denom *= f
            bq[i] = b * q
        qj *= q
        term = term * numer / denom
        total += term
        cur = abs(term)
        ratio = cur / prev_abs if prev_abs > 0 else 0.0
        prev_abs = cur
        if cur <= tol * abs(total) and ratio < 1.0:
            small += 1
            if small >= 5:
                tail = cur * ratio / (1.0 - ratio) if cur > 0 else 0.0
                return EvalResult(total, tail, j + 2, "series")
        else:
            small = 0
    raise NonConvergence(f"phi series did not converge in {MAX_SERIES_TERMS} terms")


def reduce_argument(z: complex, q: complex) -> tuple:
    """Write z = x0 * q**n with |q| < |x0| <= 1; returns (x0, n)."""
    z = complex(z)
    if z == 0:
        raise ValueError("cannot reduce z = 0")
    qabs = abs(q)
    # jump close first, then fix up by single steps
    n = math.floor(math.log(abs(z)) / math.log(qabs))
    x0 = z * q ** (-n)
    while abs(x0) > 1.0:
        x0 *= q
        n -= 1
    while abs(x0) <= qabs:
        x0 /= q
        n += 1
    return x0, n


def _node_points(radius: float, N: int, odd_only: bool = False) -> np.ndarray:
    if odd_only:
        j = np.arange(1, N, 2)
    else:
        j = np.arange(N)
    return radius * np.exp(2j * np.pi * j / N)


def kernel_values(num, den, q, x, t: np.ndarray) -> np.ndarray:
    """Evaluate F_x(t) (the product side of the bilateral lemma) at points t."""
    pref = qpoch_ratio((q,) + tuple(num), (x, q / x) + tuple(den), q).value
    t = np.asarray(t, dtype=complex)
    out = qpoch_infinite_vec(x * t, q) * qpoch_infinite_vec(q / (x * t), q)
    for b in den:
        out *= qpoch_infinite_vec(b / t, q)
    out /= qpoch_infinite_vec(t, q)
    for a in num:
        if a != 0:
            out /= qpoch_infinite_vec(a / t, q)
    return pref * out


@lru_cache(maxsize=256)
def _kernel_nodes(num: tuple, den: tuple, q: complex, x: complex, radius: float, N: int):
    if N >= 16:
        out = np.empty(N, dtype=complex)
        out[0::2] = _kernel_nodes(num, den, q, x, radius, N // 2)
        out[1::2] = kernel_values(num, den, q, x, _node_points(radius, N, odd_only=True))
    else:
        out = kernel_values(num, den, q, x, _node_points(radius, N))
    out.flags.writeable = False
    return out


def circle_coefficient(
    values: Callable[[int], np.ndarray],
    n: int,
    radius: float,
    quad: QuadratureConfig,
    tol: Optional[float] = None,
    weight: complex = 1.0,
) -> EvalResult:
    """Coefficient of t^n, times ``weight**n``, from samples of f on |t| = radius.

    ``values(N)`` returns f at radius * exp(2 pi i j / N), j = 0..N-1.  The
    node count doubles until two successive estimates agree within ``tol``
    or within the roundoff level of the samples.  Folding ``weight**n`` in
    here keeps c_n * t^n representable when c_n alone would underflow.
    """
    tol = quad.tol if tol is None else tol
    try:
        scale = (weight / radius) ** n
    except OverflowError as exc:
        raise NonConvergence(f"coefficient scale overflows at n={n}") from exc

    def estimate(N):
        f = values(N)
        phase = np.exp(-2j * np.pi * ((np.arange(N) * n) % N) / N)
        return scale * np.mean(f * phase), NOISE_FACTOR * abs(scale) * np.mean(np.abs(f))

    # fewer than 2|n| nodes folds the much larger coefficient of index
    # n +- N onto index n, and successive differences cannot see it
    N = quad.min_nodes
    while N < 2 * abs(n) + 2:
        N *= 2
    prev, _ = estimate(N)
    while 2 * N <= quad.max_nodes:
        N *= 2
        cur, floor = estimate(N)
        diff = abs(cur - prev)
        if not np.isfinite(cur):
            raise NonConvergence("non-finite quadrature estimate")
        if diff <= max(tol, floor):
            return EvalResult(complex(cur), float(diff), N, "quadrature")
        prev = cur
    raise NonConvergence(
        f"contour quadrature not converged at max_nodes={quad.max_nodes} "
        f"(last difference {diff:.3e})"
    )


def continued_coefficient(
    num: Sequence,
    den: Sequence,
    q: complex,
    x: complex,
    n: int,
    radius: float,
    quad: QuadratureConfig = DEFAULT_QUAD,
    tol: Optional[float] = None,
    weight: complex = 1.0,
) -> EvalResult:
    """phi(num; den; q, x q^n) * weight**n via the t^n Laurent coefficient of F_x."""
    num = tuple(complex(a) for a in num)
    den = tuple(complex(b) for b in den)
    amax = max((abs(a) for a in num), default=0.0)
    if not amax < radius < 1.0:
        raise DomainError(
            f"contour radius {radius} outside the annulus ({amax}, 1)"
        )
    q = complex(q)
    x = complex(x)

    def values(N):
        return _kernel_nodes(num, den, q, x, float(radius), N)

    return circle_coefficient(values, n, radius, quad, tol, weight)


def phi_continued(
    spec: PhiSpec,
    quad: QuadratureConfig = DEFAULT_QUAD,
    force_quadrature: bool = False,
) -> EvalResult:
    """Analytic continuation of r+1 phi r to the plane cut along [1, inf).

    Inside the unit disk this is :func:`phi_series` unless
    ``force_quadrature`` is set.
    """
    _require(spec)
    if any(abs(a) >= 1.0 for a in spec.num):
        raise DomainError("continuation requires max |a_i| < 1")
    if abs(spec.z) < SERIES_RADIUS and not force_quadrature:
        try:
            return phi_series(spec)
        except NonConvergence:
            pass  # |z| within ~1e-4 of the circle; the contour has no such limit
    if spec.z == 0:
        return EvalResult(1.0 + 0j, 0.0, 0, "closed_form")
    try:
        x0, n = reduce_argument(spec.z, spec.q)
    except OverflowError as exc:
        raise NonConvergence(f"argument reduction of z={spec.z} overflows") from exc
    if nearest_negative_power(x0, spec.q) < DEN_BAND or (
        nearest_negative_power(spec.q / x0, spec.q) < DEN_BAND
    ):
        raise PoleProximity(f"z={spec.z} is close to a pole q^-m of the continuation")
    if quad.radius is not None:
        radius = quad.radius
    else:
        amax = max((abs(a) for a in spec.num), default=0.0)
        radius = cauchy_radius(
            lambda t: kernel_values(spec.num, spec.den, spec.q, x0, t), n, amax, 1.0
        )
    return continued_coefficient(spec.num, spec.den, spec.q, x0, n, radius, quad)


def product_values(spec: GeneralProductSpec, t: np.ndarray) -> np.ndarray:
    q = spec.q
    t = np.asarray(t, dtype=complex)
    out = np.ones_like(t)
    for a in spec.alpha:
        out *= qpoch_infinite_vec(a * t, q)
    for b in spec.beta:
        out *= qpoch_infinite_vec(b / t, q)
    for g in spec.gamma:
        out /= qpoch_infinite_vec(g * t, q)
    for d in spec.delta:
        out /= qpoch_infinite_vec(d / t, q)
    return out


def cauchy_radius(
    sample: Callable[[np.ndarray], np.ndarray],
    n: int,
    inner: float,
    outer: float,
    points: int = 41,
) -> float:
    """Radius in (inner, outer) minimizing the Cauchy bound max|f| * r^-n.

    Roundoff in the trapezoidal sum scales with that bound, so this is the
    circle on which the coefficient of t^n is least contaminated.  Unbounded
    ends are clipped to [1e-6, 1e6].  ``sample(t)`` evaluates f at points t.
    """
    lo = max(inner, 1e-6)
    hi = min(outer, 1e6)
    logs = np.linspace(math.log(lo), math.log(hi), points + 2)[1:-1]
    nodes = np.exp(2j * np.pi * np.arange(64) / 64)
    best, best_r = math.inf, math.exp(0.5 * (logs[0] + logs[-1]))
    with np.errstate(all="ignore"):
        for lr in logs:
            r = math.exp(lr)
            vals = np.abs(sample(r * nodes))
            if not np.all(np.isfinite(vals)):
                continue
            peak = float(np.max(vals))
            if peak == 0.0:
                continue
            bound = math.log(peak) - n * lr
            if bound < best:
                best, best_r = bound, r
    return best_r


def laurent_coeff(
    spec: GeneralProductSpec, n: int, quad: QuadratureConfig = DEFAULT_QUAD
) -> EvalResult:
    """Coefficient of t^n of the general product on its annulus of convergence."""
    check_base(spec.q)
    if not (spec.alpha or spec.beta or spec.gamma or spec.delta):
        return EvalResult(1.0 + 0j if n == 0 else 0j, 0.0, 0, "closed_form")
    inner, outer = spec.annulus()
    if not inner < outer:
        raise DomainError(f"annulus is empty: max|delta|={inner} >= min 1/|gamma|={outer}")
    if quad.radius is None:
        radius = cauchy_radius(lambda t: product_values(spec, t), n, inner, outer)
    else:
        radius = quad.radius
    if not inner < radius < outer:
        raise DomainError(f"radius {radius} outside annulus ({inner}, {outer})")
    cache = {}

    def values(N):
        if N not in cache:
            cache[N] = product_values(spec, _node_points(radius, N))
        return cache[N]

    return circle_coefficient(values, n, radius, quad)
