"""Both sides of the bilateral summation identities.

Left-hand sides are bilateral sums over n in Z, computed term by term with
two-sided truncation.  Right-hand sides are closed-form prefactors times
convergent phi series.  Every right-hand side is first laid out as a list of
:class:`Term` plans (prefactor symbols, phi parameters) so the domain
validator can inspect exactly the symbols the evaluator will divide by.

Named conditions used in validator messages:

(a)    max|a_i| < |t| < 1                      Lemma convergence
(acl)  max|a_i c_j| < |t| < 1                  Theorem left side converges
(acr)  |q y b_1..b_k| < |x a_1..a_{k+1}|       Theorem right side, |w| < 1
(cc)   max(|a_i|, |c_j|) < sqrt(t) < 1, t real  contour oracle applies
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import singledispatch
from typing import Callable, Iterator, List, Sequence

import numpy as np

from .errors import DegenerateParameters, DomainError, NonConvergence, PoleProximity
from .phi import (
    CUT_BAND,
    DEFAULT_QUAD,
    SERIES_RADIUS,
    PhiSpec,
    QuadratureConfig,
    circle_coefficient,
    continued_coefficient,
    distance_to_cut,
    kernel_values,
    phi_series,
    reduce_argument,
)
from .qcore import EvalResult, check_base, nearest_negative_power, qpoch_ratio

DOMAIN_MARGIN = 1e-9
DISTINCT_MARGIN = 1e-8
GUARD_BAND = 1e-10
W_MARGIN = 1e-6
QPOWER_BAND = 1e-8
# bilateral terms switch from the power series to the contour here when the
# continuation is available; at |z| = 0.99 the series needs ~3500 terms
SERIES_SWITCH = 0.99


def _cvec(values) -> tuple:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class TruncationConfig:
    tol_abs: float = 1e-12
    confirm_window: int = 5
    n_cap: int = 400

    def __post_init__(self):
        if not (self.tol_abs > 0 and self.confirm_window > 0 and self.n_cap > 0):
            raise ValueError("truncation parameters must be positive")


DEFAULT_TRUNC = TruncationConfig()


@dataclass(frozen=True)
class LemmaSpec:
    a: tuple
    b: tuple
    x: complex
    t: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "a", _cvec(self.a))
        object.__setattr__(self, "b", _cvec(self.b))
        for name in ("x", "t", "q"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def k(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class TheoremSpec:
    a: tuple
    b: tuple
    c: tuple
    d: tuple
    x: complex
    y: complex
    t: complex
    q: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _cvec(getattr(self, name)))
        for name in ("x", "y", "t", "q"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def k(self) -> int:
        return len(self.b)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.d)

    @property
    def w(self) -> complex:
        return self.q * self.y * _prod(self.b) / (self.x * _prod(self.a))

    def swapped(self) -> "TheoremSpec":
        """Exchange the roles of the two phi factors."""
        return TheoremSpec(self.c, self.d, self.a, self.b, self.y, self.x, self.t, self.q)


@dataclass(frozen=True)
class CorollarySpec:
    a: tuple
    b: tuple
    x: complex
    c: complex
    d: complex
    t: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "a", _cvec(self.a))
        object.__setattr__(self, "b", _cvec(self.b))
        for name in ("x", "c", "d", "t", "q"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def k(self) -> int:
        return len(self.b)

    @property
    def w(self) -> complex:
        return self.q * self.c * _prod(self.b) / (self.x * _prod(self.a))

    def as_theorem(self) -> TheoremSpec:
        """The l = 0 theorem instance with y = c and c_1 = d/c.

        Its sums equal this corollary's times (d; q)_inf / (c; q)_inf, since
        1phi0(d/c; -; q, c q^n) = (d q^n; q)_inf / (c q^n; q)_inf.
        """
        return TheoremSpec(self.a, self.b, (self.d / self.c,), (), self.x, self.c, self.t, self.q)


@dataclass(frozen=True)
class Psi2Spec:
    a: complex
    b: complex
    c: complex
    d: complex
    t: complex
    q: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "t", "q"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def as_corollary(self) -> CorollarySpec:
        """k = 0 corollary instance with x = a and a_1 = b/a.

        The 2psi2 sum is (a; q)_inf / (b; q)_inf times the corollary's.
        """
        return CorollarySpec((self.b / self.a,), (), self.a, self.c, self.d, self.t, self.q)


def spec_to_dict(spec) -> dict:
    """JSON-ready dict; complex numbers become {"re", "im"} objects."""

    def enc(v):
        if isinstance(v, (tuple, list)):
            return [enc(u) for u in v]
        if isinstance(v, complex):
            return {"re": v.real, "im": v.imag}
        return v

    return {key: enc(val) for key, val in asdict(spec).items()}


def _prod(values) -> complex:
    out = 1.0 + 0j
    for v in values:
        out *= v
    return out


@dataclass
class Term:
    """One right-hand-side term: prefactor ratio times a phi series (optional)."""

    pref_num: list
    pref_den: list
    phi_num: list = None
    phi_den: list = None


def idem_expand(term: Callable[[list], object], a: Sequence) -> list:
    """Instantiate ``term`` with a_1 and then with a_1 swapped with each a_j.

    Returns ``len(a)`` instances; the first is ``term(a)``.
    """
    a = list(a)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if abs(a[i] - a[j]) < DISTINCT_MARGIN:
                raise DegenerateParameters(f"a_{i + 1} and a_{j + 1} coincide: {a[i]}")
    out = [term(a)]
    for j in range(1, len(a)):
        swapped = list(a)
        swapped[0], swapped[j] = swapped[j], swapped[0]
        out.append(term(swapped))
    return out


# ---------------------------------------------------------------- term plans


def lemma_plan(spec: LemmaSpec) -> Term:
    a, b, x, t, q = spec.a, spec.b, spec.x, spec.t, spec.q
    return Term(
        [q, *a, x * t, q / (x * t), *(bi / t for bi in b)],
        [x, q / x, *b, t, *(ai / t for ai in a)],
    )


def theorem_plan(spec: TheoremSpec) -> List[Term]:
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    x, y, t, q = spec.x, spec.y, spec.t, spec.q
    first = Term(
        [q, x * t, q / (x * t), *a, *(bi / t for bi in b)],
        [t, x, q / x, *(ai / t for ai in a), *b],
        [t, *(q * t / bi for bi in b), *c],
        [*(q * t / ai for ai in a), *d],
    )

    def a1_term(al):
        a1, rest = al[0], al[1:]
        return Term(
            [q, a1 * x, q / (a1 * x), y * t / a1, q * a1 / (y * t), *rest,
             *(bi / a1 for bi in b), *c, *(a1 * di / t for di in d)],
            [x, q / x, y, q / y, t / a1, *(aj / a1 for aj in rest), *b,
             *(a1 * cj / t for cj in c), *d],
            [a1, *(q * a1 / bi for bi in b), *(a1 * cj / t for cj in c)],
            [q * a1 / t, *(q * a1 / aj for aj in rest), *(a1 * di / t for di in d)],
        )

    return [first, *idem_expand(a1_term, a)]


def corollary_plan(spec: CorollarySpec) -> List[Term]:
    a, b, x, c, d, t, q = spec.a, spec.b, spec.x, spec.c, spec.d, spec.t, spec.q
    first = Term(
        [q, x * t, q / (x * t), c, *a, *(bi / t for bi in b)],
        [t, x, q / x, d, *(ai / t for ai in a), *b],
        [t, d / c, *(q * t / bi for bi in b)],
        [*(q * t / ai for ai in a)],
    )

    def a1_term(al):
        a1, rest = al[0], al[1:]
        return Term(
            [q, d / c, a1 * x, q / (a1 * x), c * t / a1, q * a1 / (c * t), *rest,
             *(bi / a1 for bi in b)],
            [x, q / x, q / c, d, a1 * d / (c * t), t / a1, *(aj / a1 for aj in rest), *b],
            [a1, a1 * d / (c * t), *(q * a1 / bi for bi in b)],
            [q * a1 / t, *(q * a1 / aj for aj in rest)],
        )

    return [first, *idem_expand(a1_term, a)]


def psi2_plan(spec: Psi2Spec) -> List[Term]:
    a, b, c, d, t, q = spec.a, spec.b, spec.c, spec.d, spec.t, spec.q
    return [
        Term(
            [q, b / a, c, a * t, q / (a * t)],
            [q / a, b, d, t, b / (a * t)],
            [t, d / c],
            [a * q * t / b],
        ),
        Term(
            [q, q / b, d / c, a * c * t / b, q * b / (a * c * t)],
            [q / a, q / c, d, a * t / b, b * d / (a * c * t)],
            [b / a, b * d / (a * c * t)],
            [q * b / (a * t)],
        ),
    ]


# ---------------------------------------------------------------- validation


def _off_positive_axis(name, z, out):
    z = complex(z)
    dist = abs(z.imag) if z.real > 0 else abs(z)
    if dist < DOMAIN_MARGIN:
        out.append(f"{name}={z} must lie off the positive real axis (distance {dist:.3e})")


def _near_qpower(s: complex, q: complex, js) -> bool:
    if s == 0:
        return False
    for j in js:
        if abs(1.0 - s * q ** (-j)) < QPOWER_BAND:
            return True
    return False


def _qpower_window(s: complex, q: complex) -> range:
    if s == 0:
        return range(0)
    j = round(math.log(abs(s)) / math.log(abs(q)))
    return range(j - 1, j + 2)


def _check_distinct(a, out):
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if abs(a[i] - a[j]) < DISTINCT_MARGIN:
                out.append(f"a_{i + 1} and a_{j + 1} coincide within {DISTINCT_MARGIN}")


def _check_plan(plan: List[Term], q, w, out):
    seen = set()
    for term in plan:
        for s in list(term.pref_den) + list(term.phi_den or []):
            s = complex(s)
            if s in seen:
                continue
            seen.add(s)
            if not math.isfinite(abs(s)):
                out.append(f"non-finite denominator symbol {s}")
            elif nearest_negative_power(s, q) < GUARD_BAND:
                out.append(f"denominator symbol {s} is within {GUARD_BAND} of q^-m")
    if w is not None and not abs(w) < 1.0 - W_MARGIN:
        out.append(f"series argument |w|={abs(w):.6g} is not below 1 - {W_MARGIN}")


def _guard_plan(build, spec, w, out):
    try:
        plan = build(spec)
    except (ZeroDivisionError, DegenerateParameters) as exc:
        out.append(f"right-hand side undefined: {exc}")
        return
    _check_plan(plan if isinstance(plan, list) else [plan], spec.q, w, out)


def _common(spec, out) -> bool:
    try:
        check_base(spec.q)
    except DomainError as exc:
        out.append(str(exc))
        return False
    return True


@singledispatch
def validate_domain(spec) -> list:
    """Return a list of violated conditions; empty when the spec is admissible."""
    raise TypeError(f"no validator for {type(spec).__name__}")


@validate_domain.register
def _(spec: LemmaSpec) -> list:
    out = []
    if not _common(spec, out):
        return out
    if len(spec.a) != len(spec.b) + 1:
        out.append("a-list must have exactly one more entry than b-list")
        return out
    amax = max(abs(v) for v in spec.a)
    tabs = abs(spec.t)
    if not (amax + DOMAIN_MARGIN < tabs and tabs < 1.0 - DOMAIN_MARGIN):
        out.append(
            f"condition (a) violated: need max|a_i| < |t| < 1, "
            f"have max|a_i|={amax:.6g}, |t|={tabs:.6g}"
        )
    if spec.x == 0:
        out.append("x must be nonzero")
        return out
    _off_positive_axis("x", spec.x, out)
    for bi in spec.b:
        if nearest_negative_power(bi, spec.q) < GUARD_BAND:
            out.append(f"b={bi} is within {GUARD_BAND} of q^-m")
    if spec.t != 0:
        _guard_plan(lemma_plan, spec, None, out)
    return out


@validate_domain.register
def _(spec: TheoremSpec) -> list:
    out = []
    if not _common(spec, out):
        return out
    if len(spec.a) != len(spec.b) + 1 or len(spec.c) != len(spec.d) + 1:
        out.append("each numerator list must have one more entry than its denominator list")
        return out
    acmax = max(abs(ai * cj) for ai in spec.a for cj in spec.c)
    tabs = abs(spec.t)
    if not (acmax + DOMAIN_MARGIN < tabs and tabs < 1.0 - DOMAIN_MARGIN):
        out.append(
            f"condition (acl) violated: need max|a_i c_j| < |t| < 1, "
            f"have max|a_i c_j|={acmax:.6g}, |t|={tabs:.6g}"
        )
    lhs = abs(spec.q * spec.y * _prod(spec.b))
    rhs = abs(spec.x * _prod(spec.a))
    if not lhs < rhs:
        out.append(f"condition (acr) violated: |q y b_1..b_k|={lhs:.6g} >= |x a_1..a_k+1|={rhs:.6g}")
        return out
    if spec.x == 0 or spec.y == 0 or spec.t == 0:
        out.append("x, y and t must be nonzero")
        return out
    _off_positive_axis("x", spec.x, out)
    _off_positive_axis("y", spec.y, out)
    _check_distinct(spec.a, out)
    _guard_plan(theorem_plan, spec, spec.w, out)
    return out


@validate_domain.register
def _(spec: CorollarySpec) -> list:
    out = []
    if not _common(spec, out):
        return out
    if len(spec.a) != len(spec.b) + 1:
        out.append("a-list must have exactly one more entry than b-list")
        return out
    if spec.c == 0 or spec.x == 0 or spec.t == 0:
        out.append("x, c and t must be nonzero")
        return out
    ratio = abs(spec.d / spec.c)
    amax = max(abs(ai) for ai in spec.a) * ratio
    tabs = abs(spec.t)
    if not (amax + DOMAIN_MARGIN < tabs and tabs < 1.0 - DOMAIN_MARGIN):
        out.append(
            f"convergence condition violated: need max|a_i d/c| < |t| < 1, "
            f"have {amax:.6g}, |t|={tabs:.6g}"
        )
    lhs = abs(spec.q * spec.c * _prod(spec.b))
    rhs = abs(spec.x * _prod(spec.a))
    if not lhs < rhs:
        out.append(f"condition |q c b_1..b_k| < |x a_1..a_k+1| violated ({lhs:.6g} >= {rhs:.6g})")
        return out
    _off_positive_axis("x", spec.x, out)
    q = spec.q
    if _near_qpower(spec.c, q, _qpower_window(spec.c, q)):
        out.append(f"c={spec.c} is within {QPOWER_BAND} of an integer power of q")
    if _near_qpower(spec.d, q, [j for j in _qpower_window(spec.d, q) if j <= 1]):
        out.append(f"d={spec.d} is within {QPOWER_BAND} of q^j with j <= 1")
    _check_distinct(spec.a, out)
    _guard_plan(corollary_plan, spec, spec.w, out)
    return out


@validate_domain.register
def _(spec: Psi2Spec) -> list:
    out = []
    if not _common(spec, out):
        return out
    if spec.a == 0 or spec.b == 0:
        out.append("a and b must be nonzero")
        return out
    out.extend(validate_domain(spec.as_corollary()))
    if not abs(spec.q * spec.c / spec.b) < 1.0 - W_MARGIN:
        out.append("series argument |q c / b| must be below 1")
    if _near_qpower(spec.b, spec.q, [j for j in _qpower_window(spec.b, spec.q) if j <= 0]):
        out.append(f"b={spec.b} is within {QPOWER_BAND} of q^-m")
    if not out:
        _guard_plan(psi2_plan, spec, None, out)
    return out


def require_domain(spec):
    bad = validate_domain(spec)
    if bad:
        raise DomainError("; ".join(bad), bad)


# ---------------------------------------------------------------- right-hand sides


def _eval_term(term: Term, q, w, tol) -> EvalResult:
    pref = qpoch_ratio(term.pref_num, term.pref_den, q)
    if term.phi_num is None:
        return pref
    if pref.value == 0:
        return EvalResult(0j, 0.0, pref.work, "closed_form")
    ser = phi_series(PhiSpec(term.phi_num, term.phi_den, q, w), tol)
    value = pref.value * ser.value
    err = abs(pref.value) * ser.err_est + pref.err_est * abs(ser.value)
    return EvalResult(value, err, pref.work + ser.work, "series")


def _sum_terms(results) -> EvalResult:
    value = sum((r.value for r in results), 0j)
    err = sum(r.err_est for r in results)
    work = sum(r.work for r in results)
    method = "series" if any(r.method == "series" for r in results) else "closed_form"
    return EvalResult(value, err, work, method)


def lemma_rhs(spec: LemmaSpec) -> EvalResult:
    """Closed-form product side of the bilateral lemma."""
    return _eval_term(lemma_plan(spec), spec.q, None, None)


def theorem_rhs_terms(spec: TheoremSpec, tol: float = 1e-15) -> List[EvalResult]:
    require_domain(spec)
    return [_eval_term(t, spec.q, spec.w, tol) for t in theorem_plan(spec)]


def theorem_rhs(spec: TheoremSpec, tol: float = 1e-15) -> EvalResult:
    """Leading term plus the a_1 term and its k interchanges."""
    return _sum_terms(theorem_rhs_terms(spec, tol))


def corollary_rhs_terms(spec: CorollarySpec, tol: float = 1e-15) -> List[EvalResult]:
    require_domain(spec)
    return [_eval_term(t, spec.q, spec.w, tol) for t in corollary_plan(spec)]


def corollary_rhs(spec: CorollarySpec, tol: float = 1e-15) -> EvalResult:
    return _sum_terms(corollary_rhs_terms(spec, tol))


def psi2_rhs(spec: Psi2Spec, tol: float = 1e-15) -> EvalResult:
    require_domain(spec)
    w = spec.q * spec.c / spec.b
    return _sum_terms([_eval_term(t, spec.q, w, tol) for t in psi2_plan(spec)])


# ---------------------------------------------------------------- left-hand sides


def _bilateral(up: Iterator, down: Iterator, trunc: TruncationConfig) -> EvalResult:
    """Sum terms yielded as (value, err) for n = 0, 1, ... and n = -1, -2, ...

    Each direction stops once ``confirm_window`` consecutive terms are below
    ``tol_abs`` while decaying by a ratio < 0.999.
    """
    total = 0j
    err = 0.0
    work = 0
    for direction in (up, down):
        try:
            total, err, work = _one_direction(direction, direction is up, trunc, total, err, work)
        except OverflowError as exc:
            raise NonConvergence(f"bilateral term weight overflows: {exc}") from exc
    return EvalResult(total, err, work, "series")


def _one_direction(direction, upward, trunc, total, err, work):
    run = 0
    prev = None
    worst_ratio = 0.0
    for count, (value, term_err) in enumerate(direction, start=1):
        if count > trunc.n_cap + upward:
            raise NonConvergence(
                f"bilateral sum not truncated within n_cap={trunc.n_cap}"
            )
        total += value
        err += term_err
        work += 1
        mag = abs(value)
        ratio = 0.0 if prev is None or prev == 0 else mag / prev
        prev = mag
        if mag < trunc.tol_abs and ratio < 0.999:
            run += 1
            worst_ratio = max(worst_ratio, ratio)
            if run >= trunc.confirm_window:
                err += mag * worst_ratio / (1.0 - worst_ratio)
                return total, err, work
        else:
            run = 0
            worst_ratio = 0.0


def _radius_between(inner: float, outer: float) -> float:
    return math.sqrt(max(inner, 1e-3 * outer) * outer)


class _PhiTrack:
    """phi(num; den; q, x q^n) for consecutive n, sharing one reduced kernel."""

    def __init__(self, num, den, q, x, radius, quad):
        self.num, self.den, self.q, self.x = tuple(num), tuple(den), q, x
        self.radius = radius
        self.quad = quad
        self.x0, self.shift = reduce_argument(x, q)
        self.continuable = all(abs(a) < 1.0 for a in self.num)

    def at(self, n: int, tol: float, weight: complex = 1.0) -> EvalResult:
        """phi at x q^n times ``weight**n``; ``tol`` is absolute on that product."""
        z = self.x * self.q**n
        if abs(z) < (SERIES_SWITCH if self.continuable else SERIES_RADIUS):
            r = phi_series(PhiSpec(self.num, self.den, self.q, z))
            wn = weight**n
            return EvalResult(r.value * wn, r.err_est * abs(wn), r.work, r.method)
        if distance_to_cut(z) < CUT_BAND:
            raise DomainError(f"argument {z} lies on the cut [1, inf)")
        if not self.continuable:
            raise DomainError("continuation requires max |a_i| < 1")
        # x q^n = x0 q^(shift+n), so the weight must carry the q^-shift offset
        w0 = weight ** (-self.shift)
        r = continued_coefficient(
            self.num, self.den, self.q, self.x0, self.shift + n, self.radius,
            self.quad, tol / max(1.0, abs(w0)), weight,
        )
        return EvalResult(r.value * w0, r.err_est * abs(w0), r.work, r.method)


def _split_weight(t: complex, inner: float, outer: float) -> tuple[complex, complex]:
    """Factor t = u * v with |u|^2 = |t| inner / outer, clamped to [|t|, 1].

    Weighting one factor by u^n and the other by v^n keeps both near the
    same geometric decay, so neither overflows while the product is small.
    """
    tabs = abs(t)
    mag = math.sqrt(tabs * max(inner, 1e-12) / max(outer, 1e-12))
    mag = min(1.0, max(tabs, mag))
    u = t / tabs * mag
    return u, t / u


def _walk(step: int) -> Iterator[int]:
    n = 0 if step > 0 else -1
    while True:
        yield n
        n += step


def lemma_lhs(
    spec: LemmaSpec,
    trunc: TruncationConfig = DEFAULT_TRUNC,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> EvalResult:
    """sum_n phi(a; b; q, x q^n) t^n."""
    require_domain(spec)
    t = spec.t
    tabs = abs(t)
    amax = max(abs(v) for v in spec.a)
    track = _PhiTrack(spec.a, spec.b, spec.q, spec.x, _radius_between(amax, tabs), quad)

    def terms(step):
        for n in _walk(step):
            r = track.at(n, quad.tol, t)
            yield r.value, r.err_est

    return _bilateral(terms(1), terms(-1), trunc)


def theorem_lhs(
    spec: TheoremSpec,
    trunc: TruncationConfig = DEFAULT_TRUNC,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> EvalResult:
    """sum_n phi(a; b; q, x q^n) phi(c; d; q, y q^n) t^n."""
    require_domain(spec)
    t = spec.t
    tabs = abs(t)
    sa = max(abs(v) for v in spec.a)
    sc = max(abs(v) for v in spec.c)
    outer_a = min(1.0, tabs / sc) if sc > 0 else 1.0
    outer_c = min(1.0, tabs / sa) if sa > 0 else 1.0
    fa = _PhiTrack(spec.a, spec.b, spec.q, spec.x, _radius_between(sa, outer_a), quad)
    fc = _PhiTrack(spec.c, spec.d, spec.q, spec.y, _radius_between(sc, outer_c), quad)

    u, v = _split_weight(t, sa, sc)

    def terms(step):
        for n in _walk(step):
            ra = fa.at(n, quad.tol, u)
            rc = fc.at(n, quad.tol, v)
            err = ra.err_est * abs(rc.value) + rc.err_est * abs(ra.value)
            yield ra.value * rc.value, err

    return _bilateral(terms(1), terms(-1), trunc)


def corollary_lhs(
    spec: CorollarySpec,
    trunc: TruncationConfig = DEFAULT_TRUNC,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> EvalResult:
    """sum_n (c; q)_n / (d; q)_n phi(a; b; q, x q^n) t^n."""
    require_domain(spec)
    q, c, d, t = spec.q, spec.c, spec.d, spec.t
    tabs = abs(t)
    amax = max(abs(v) for v in spec.a)
    outer = min(1.0, tabs * abs(c / d)) if d != 0 else 1.0
    track = _PhiTrack(spec.a, spec.b, q, spec.x, _radius_between(amax, outer), quad)

    # the weight (c)_n/(d)_n u^n grows like |d/(c u)|^-n and phi v^n like
    # |amax/v|^-n as n -> -inf; balance the two
    ratio = abs(d) / abs(c) if c != 0 else 1e12
    v, u = _split_weight(t, amax, ratio)

    def terms(step):
        weight = 1.0 + 0j
        for n in _walk(step):
            if step > 0 and n > 0:
                weight *= u * (1.0 - c * q ** (n - 1)) / (1.0 - d * q ** (n - 1))
            elif step < 0:
                den = u * (1.0 - c * q**n)
                if abs(den) < 1e-12 * abs(u):
                    raise PoleProximity(f"(c;q)_{n} has a pole for c={c}")
                weight *= (1.0 - d * q**n) / den
            wabs = abs(weight)
            r = track.at(n, quad.tol / max(1.0, wabs), v)
            yield weight * r.value, wabs * r.err_est

    return _bilateral(terms(1), terms(-1), trunc)


def psi2_lhs(spec: Psi2Spec, trunc: TruncationConfig = DEFAULT_TRUNC) -> EvalResult:
    """Direct bilateral sum of (a, c; q)_n / (b, d; q)_n t^n."""
    require_domain(spec)
    a, b, c, d, t, q = spec.a, spec.b, spec.c, spec.d, spec.t, spec.q

    def up():
        term = 1.0 + 0j
        n = 0
        while True:
            yield term, 0.0
            num = (1.0 - a * q**n) * (1.0 - c * q**n)
            term *= num * t / ((1.0 - b * q**n) * (1.0 - d * q**n))
            n += 1

    def down():
        term = 1.0 + 0j
        n = 0
        while True:
            n -= 1
            den = (1.0 - a * q**n) * (1.0 - c * q**n)
            if abs(den) < 1e-12:
                raise PoleProximity(f"pole of the psi2 term at n={n}")
            term *= (1.0 - b * q**n) * (1.0 - d * q**n) / (den * t)
            yield term, 0.0

    return _bilateral(up(), down(), trunc)


def proof_integral_oracle(
    spec: TheoremSpec, quad: QuadratureConfig = DEFAULT_QUAD
) -> EvalResult:
    """Contour integral of f_k(z) f_l(conj z) dz / (2 pi i z) over |z| = sqrt(t).

    f_k and f_l are the closed-form products of the bilateral lemma, so this
    route never touches a phi series.
    """
    t = spec.t
    if t.imag != 0 or not 0 < t.real < 1:
        raise DomainError(f"proof oracle needs real 0 < t < 1, got t={t}")
    check_base(spec.q)
    radius = math.sqrt(t.real)
    smax = max(abs(v) for v in spec.a + spec.c)
    if not smax + DISTINCT_MARGIN < radius:
        raise DomainError(
            f"condition (cc) violated: max(|a_i|,|c_j|)={smax:.6g} >= t^(1/2)={radius:.6g}",
        )
    bad = []
    _off_positive_axis("x", spec.x, bad)
    _off_positive_axis("y", spec.y, bad)
    if bad:
        raise DomainError("; ".join(bad), bad)
    q = spec.q
    cache = {}

    def values(N):
        if N not in cache:
            z = radius * np.exp(2j * np.pi * np.arange(N) / N)
            fk = kernel_values(spec.a, spec.b, q, spec.x, z)
            fl = kernel_values(spec.c, spec.d, q, spec.y, np.conj(z))
            cache[N] = fk * fl
        return cache[N]

    return circle_coefficient(values, 0, radius, quad)
