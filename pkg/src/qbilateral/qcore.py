"""Complex q-shifted factorials.

All routines work in complex binary64.  The base ``q`` is a plain complex
number checked by :func:`check_base`; there is no wrapper type.

    (a; q)_n   = prod_{j=0}^{n-1} (1 - a q^j)            n >= 0
    (a; q)_-m  = 1 / (a q^-m; q)_m                       m > 0
    (a; q)_inf = prod_{j>=0} (1 - a q^j)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NonConvergence, PoleProximity, ZeroDenominator

Q_LOWER = 1e-12
Q_UPPER = 1.0 - 1e-12
FINITE_POLE_BAND = 1e-12
INFINITE_ZERO_BAND = 1e-10


@dataclass(frozen=True)
class EvalResult:
    """A computed value with an absolute error estimate.

    ``work`` counts terms or quadrature nodes; ``method`` is one of
    ``"series"``, ``"quadrature"``, ``"closed_form"``.
    """

    value: complex
    err_est: float
    work: int
    method: str

    def __post_init__(self):
        if not self.err_est >= 0:
            raise ValueError(f"err_est must be non-negative, got {self.err_est}")
        if self.work < 0:
            raise ValueError("work must be non-negative")


@dataclass(frozen=True)
class PochTolerance:
    rel_tol: float = 1e-14
    max_factors: int = 10000

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_factors < 1:
            raise ValueError("max_factors must be >= 1")


DEFAULT_TOL = PochTolerance()


def check_base(q) -> complex:
    """Return ``q`` as a complex number, rejecting |q| outside (1e-12, 1-1e-12)."""
    q = complex(q)
    if not (math.isfinite(q.real) and math.isfinite(q.imag)):
        raise DomainError(f"base q={q} is not finite")
    if not Q_LOWER < abs(q) < Q_UPPER:
        raise DomainError(f"base q={q} violates 0 < |q| < 1")
    return q


def _check_finite(name, z):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name}={z} is not finite")


def qpoch_finite(a, q, n: int) -> complex:
    """Finite q-shifted factorial ``(a; q)_n`` for any integer ``n``."""
    a = complex(a)
    q = check_base(q)
    _check_finite("a", a)
    n = int(n)
    if n >= 0:
        value = 1.0 + 0j
        aq = a
        for _ in range(n):
            value *= 1.0 - aq
            aq *= q
        return value
    m = -n
    denom = 1.0 + 0j
    aq = a * q**n
    for _ in range(m):
        factor = 1.0 - aq
        if abs(factor) < FINITE_POLE_BAND:
            raise PoleProximity(f"(a;q)_{n} has a pole: a={a}, q={q}")
        denom *= factor
        aq *= q
    return 1.0 / denom


def _factor_count(amax: float, qabs: float, rel_tol: float) -> int:
    """Smallest J with |a||q|^J / (1-|q|) < rel_tol and |a q^J| < rel_tol/(1+|a|)."""
    if amax == 0.0:
        return 0
    log_q = math.log(qabs)
    log_a = math.log(amax)
    j_tail = (math.log(rel_tol * (1.0 - qabs)) - log_a) / log_q
    j_term = (math.log(rel_tol) - log_a - math.log1p(amax)) / log_q
    return max(0, math.ceil(max(j_tail, j_term)))


def qpoch_infinite(a, q, tol: PochTolerance = DEFAULT_TOL) -> EvalResult:
    """Infinite product ``(a; q)_inf`` with a geometric tail bound.

    >>> round(qpoch_infinite(0.5, 0.5).value.real, 12)
    0.288788095087
    """
    a = complex(a)
    q = check_base(q)
    _check_finite("a", a)
    if a == 0:
        return EvalResult(1.0 + 0j, 0.0, 0, "closed_form")
    qabs = abs(q)
    nfac = _factor_count(abs(a), qabs, tol.rel_tol)
    if nfac > tol.max_factors:
        raise NonConvergence(
            f"(a;q)_inf needs {nfac} factors > max_factors={tol.max_factors}"
        )
    value = 1.0 + 0j
    aq = a
    for _ in range(nfac):
        value *= 1.0 - aq
        aq *= q
    tail = abs(a) * qabs**nfac / (1.0 - qabs)
    # |log(1 - u)| <= |u|/(1-|u|) summed over the tail
    rel = math.expm1(tail / (1.0 - min(tail, 0.5))) if tail > 0 else 0.0
    return EvalResult(value, abs(value) * rel, nfac, "closed_form")


def qpoch_ratio(
    numerators: Sequence,
    denominators: Sequence,
    q,
    tol: PochTolerance = DEFAULT_TOL,
) -> EvalResult:
    """``prod (n_i; q)_inf / prod (d_i; q)_inf`` with combined relative error."""
    q = check_base(q)
    value = 1.0 + 0j
    rel_err = 0.0
    work = 0
    for d in denominators:
        d = complex(d)
        _check_finite("denominator symbol", d)
        if nearest_negative_power(d, q) < INFINITE_ZERO_BAND:
            raise ZeroDenominator(f"(d;q)_inf vanishes: d={d} is close to q^-m")
        res = qpoch_infinite(d, q, tol)
        value /= res.value
        rel_err += res.err_est / abs(res.value)
        work += res.work
    for n in numerators:
        res = qpoch_infinite(n, q, tol)
        value *= res.value
        if res.value != 0:
            rel_err += res.err_est / abs(res.value)
        work += res.work
    return EvalResult(value, abs(value) * rel_err, work, "closed_form")


def qpoch_infinite_vec(a: np.ndarray, q: complex, rel_tol: float = 1e-15) -> np.ndarray:
    """Elementwise ``(a; q)_inf`` for an array of symbols sharing one factor count."""
    a = np.asarray(a, dtype=complex)
    qabs = abs(q)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    nfac = _factor_count(amax, qabs, rel_tol)
    out = np.ones_like(a)
    aq = a.copy()
    for _ in range(nfac):
        out *= 1.0 - aq
        aq *= q
    return out


def nearest_negative_power(s: complex, q: complex) -> float:
    """Distance-like measure ``min_m |1 - s q^m|`` over m >= 0.

    Zero exactly when ``s = q^-m`` for some m >= 0, i.e. when
    ``(s; q)_inf`` vanishes.
    """
    s = complex(s)
    best = abs(1.0 - s)
    sq = s
    while abs(sq) > 0.5:
        sq *= q
        best = min(best, abs(1.0 - sq))
    return best
