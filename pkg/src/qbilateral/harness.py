"""Random admissible parameters, verification records and suite reports."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .errors import QSeriesError, SamplerExhausted
from .identities import (
    DEFAULT_TRUNC,
    CorollarySpec,
    LemmaSpec,
    Psi2Spec,
    TheoremSpec,
    TruncationConfig,
    corollary_lhs,
    corollary_rhs,
    lemma_lhs,
    lemma_rhs,
    proof_integral_oracle,
    psi2_lhs,
    psi2_rhs,
    spec_to_dict,
    theorem_lhs,
    theorem_rhs,
    validate_domain,
)

IDENTITIES = ("lemma", "theorem", "corollary", "psi2", "swap", "proof_integral")
ANGLE_POLICIES = ("real_negative_x", "generic_complex")
MAX_REJECTIONS = 10_000
# error estimates are gated at max(tol, PRECISION_FLOOR) / 10 so that a
# tolerance below double precision yields a definite fail, not a skip
PRECISION_FLOOR = 1e-10
SCHEMA = "qbilateral-report/1"

__all__ = [
    "IDENTITIES",
    "SamplerConfig",
    "TruncationConfig",
    "VerificationRecord",
    "SuiteReport",
    "raw_draw",
    "admissible",
    "decay_rates",
    "sample_params",
    "verify_identity",
    "run_suite",
    "run_all",
]


@dataclass(frozen=True)
class SamplerConfig:
    identity: str = "lemma"
    k: int = 1
    l: int = 1  # noqa: E741
    seed: int = 0
    q_values: tuple = (0.3, 0.5)
    trials: int = 10
    magnitude_window: tuple = (0.05, 0.8)
    angle_policy: str = "generic_complex"
    balanced: bool = False
    rate_margin: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "q_values", tuple(self.q_values))
        object.__setattr__(self, "magnitude_window", tuple(self.magnitude_window))
        if self.identity not in IDENTITIES:
            raise ValueError(f"unknown identity {self.identity!r}")
        if self.angle_policy not in ANGLE_POLICIES:
            raise ValueError(f"unknown angle policy {self.angle_policy!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k < 0 or self.l < 0:
            raise ValueError("k and l must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        lo, hi = self.magnitude_window
        if not 0 < lo < hi < 1:
            raise ValueError("magnitude_window must satisfy 0 < lo < hi < 1")
        if not self.q_values:
            raise ValueError("q_values must be non-empty")
        if self.balanced and (self.k, self.l) != (1, 1):
            raise ValueError("the balanced case needs k = l = 1")
        if not 0 < self.rate_margin <= 1:
            raise ValueError("rate_margin must lie in (0, 1]")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q_values"] = [_enc(complex(q)) for q in self.q_values]
        d["magnitude_window"] = list(self.magnitude_window)
        return d


@dataclass
class VerificationRecord:
    identity: str
    params: dict
    lhs: complex
    rhs: complex
    abs_diff: float
    rel_diff: float
    lhs_err: float
    rhs_err: float
    verdict: str
    wall_time_ms: float
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("abs_diff", "rel_diff", "lhs_err", "rhs_err"):
            d[key] = _num(d[key])
        d["lhs"] = _enc(self.lhs)
        d["rhs"] = _enc(self.rhs)
        d["extra"] = {k: _enc(v) if isinstance(v, complex) else v for k, v in self.extra.items()}
        return d


@dataclass
class SuiteReport:
    records: List[VerificationRecord]
    pass_count: int
    fail_count: int
    skip_count: int
    config_echo: dict

    @classmethod
    def from_records(cls, records, config_echo) -> "SuiteReport":
        verdicts = [r.verdict for r in records]
        return cls(
            list(records),
            verdicts.count("pass"),
            verdicts.count("fail"),
            verdicts.count("skipped"),
            config_echo,
        )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config_echo,
            "pass_count": self.pass_count,
            "fail_count": self.fail_count,
            "skip_count": self.skip_count,
            "records": [r.to_dict() for r in self.records],
        }


def _num(v):
    return v if math.isfinite(v) else None


def _enc(z: complex):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------- sampling


class _Draw:
    def __init__(self, rng: np.random.Generator, window, policy: str):
        self.rng = rng
        self.lo, self.hi = math.log(window[0]), math.log(window[1])
        self.policy = policy

    def mag(self) -> float:
        return math.exp(self.rng.uniform(self.lo, self.hi))

    def param(self) -> complex:
        if self.policy == "generic_complex":
            phase = self.rng.uniform(0.0, 2 * math.pi)
            return self.mag() * complex(math.cos(phase), math.sin(phase))
        sign = 1.0 if self.rng.uniform() < 0.5 else -1.0
        return complex(sign * self.mag())

    def params(self, n: int) -> tuple:
        return tuple(self.param() for _ in range(n))

    def off_axis(self) -> complex:
        """x, y: argument in [pi/6, 11 pi/6] keeps clear of the positive axis."""
        if self.policy == "generic_complex":
            phase = self.rng.uniform(math.pi / 6, 11 * math.pi / 6)
            return self.mag() * complex(math.cos(phase), math.sin(phase))
        return complex(-self.mag())

    def t(self) -> complex:
        return complex(self.mag())


def raw_draw(cfg: SamplerConfig, draw: _Draw, q: complex):
    """One unconstrained draw of the spec type for ``cfg.identity``."""
    k, l = cfg.k, cfg.l
    ident = cfg.identity
    if ident == "lemma":
        return LemmaSpec(draw.params(k + 1), draw.params(k), draw.off_axis(), draw.t(), q)
    if ident == "corollary":
        return CorollarySpec(
            draw.params(k + 1), draw.params(k), draw.off_axis(), draw.param(), draw.param(),
            draw.t(), q,
        )
    if ident == "psi2":
        return Psi2Spec(draw.off_axis(), draw.param(), draw.param(), draw.param(), draw.t(), q)
    if cfg.balanced:
        # solve the two product constraints for d1 and b1 so that x and y
        # stay in the window; a huge y makes the right-hand terms cancel
        a1, a2, c1, c2 = draw.params(4)
        x, y = draw.off_axis(), draw.off_axis()
        d1 = c1 * c2 * y / x
        b1 = a1 * a2 * x / y
        return TheoremSpec((a1, a2), (b1,), (c1, c2), (d1,), x, y, draw.t(), q)
    return TheoremSpec(
        draw.params(k + 1), draw.params(k), draw.params(l + 1), draw.params(l),
        draw.off_axis(), draw.off_axis(), draw.t(), q,
    )


def decay_rates(spec) -> tuple:
    """Geometric ratios governing truncation of the sums on both sides.

    The first entry is the n -> -inf decay of the bilateral terms, the last
    is |w| for the right-hand phi series (1 stands in where there is none).
    """
    if isinstance(spec, Psi2Spec):
        spec = spec.as_corollary()
    t = abs(spec.t)
    if isinstance(spec, LemmaSpec):
        return max(abs(a) for a in spec.a) / t, t, 0.0
    if isinstance(spec, TheoremSpec):
        ac = max(abs(a * c) for a in spec.a for c in spec.c)
        return ac / t, t, abs(spec.w)
    amax = max(abs(a) for a in spec.a)
    return amax * abs(spec.d / spec.c) / t, t, abs(spec.w)


def admissible(spec, identity: str, rate_margin: float = 1.0) -> bool:
    """Domain check plus a margin keeping every geometric rate <= rate_margin."""
    if validate_domain(spec):
        return False
    if rate_margin < 1.0 and max(decay_rates(spec)) > rate_margin:
        return False
    if identity == "swap":
        return not validate_domain(spec.swapped())
    if identity == "proof_integral":
        t = spec.t
        smax = max(abs(v) for v in spec.a + spec.c)
        return t.imag == 0 and smax + 1e-8 < math.sqrt(t.real)
    return True


def sample_params(cfg: SamplerConfig) -> list:
    """Deterministic list of ``cfg.trials`` admissible specs."""
    rng = np.random.default_rng(cfg.seed)
    draw = _Draw(rng, cfg.magnitude_window, cfg.angle_policy)
    out = []
    for i in range(cfg.trials):
        q = complex(cfg.q_values[i % len(cfg.q_values)])
        for _ in range(MAX_REJECTIONS):
            spec = raw_draw(cfg, draw, q)
            if admissible(spec, cfg.identity, cfg.rate_margin):
                out.append(spec)
                break
        else:
            raise SamplerExhausted(
                f"no admissible {cfg.identity} spec after {MAX_REJECTIONS} draws (trial {i})"
            )
    return out


# ---------------------------------------------------------------- verification


def _identity_of(spec) -> str:
    if isinstance(spec, LemmaSpec):
        return "lemma"
    if isinstance(spec, TheoremSpec):
        return "theorem"
    if isinstance(spec, CorollarySpec):
        return "corollary"
    if isinstance(spec, Psi2Spec):
        return "psi2"
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def _rel(diff: float, ref: complex) -> float:
    return diff / max(1.0, abs(ref))


def verify_identity(
    spec,
    tol: float = 1e-8,
    trunc: TruncationConfig = DEFAULT_TRUNC,
    identity: Optional[str] = None,
) -> VerificationRecord:
    """Evaluate both sides of the identity matching ``spec``; never raises.

    Numerical failures and inadmissible specs produce ``verdict="skipped"``.
    """
    identity = identity or _identity_of(spec)
    start = time.perf_counter()
    params = spec_to_dict(spec)
    nan = complex(math.nan, math.nan)

    def skipped(reason):
        ms = (time.perf_counter() - start) * 1e3
        return VerificationRecord(
            identity, params, nan, nan, math.nan, math.nan, math.nan, math.nan,
            "skipped", ms, reason,
        )

    bad = list(validate_domain(spec))
    if identity == "swap" and not bad:
        bad = [f"mirror: {v}" for v in validate_domain(spec.swapped())]
    if bad:
        return skipped("; ".join(bad))

    extra = {}
    try:
        if identity == "lemma":
            lhs, rhs = lemma_lhs(spec, trunc), lemma_rhs(spec)
        elif identity == "theorem":
            lhs, rhs = theorem_lhs(spec, trunc), theorem_rhs(spec)
        elif identity == "corollary":
            lhs, rhs = corollary_lhs(spec, trunc), corollary_rhs(spec)
        elif identity == "psi2":
            lhs, rhs = psi2_lhs(spec, trunc), psi2_rhs(spec)
        elif identity == "swap":
            lhs, rhs = theorem_rhs(spec), theorem_rhs(spec.swapped())
        elif identity == "proof_integral":
            lhs, rhs = theorem_lhs(spec, trunc), proof_integral_oracle(spec)
            closed = theorem_rhs(spec)
            extra["theorem_rhs"] = closed.value
            extra["theorem_rhs_err"] = closed.err_est
        else:
            raise ValueError(f"unknown identity {identity!r}")
    except QSeriesError as exc:
        return skipped(f"{type(exc).__name__}: {exc}")

    abs_diff = abs(lhs.value - rhs.value)
    rel_diff = _rel(abs_diff, rhs.value)
    rhs_err = rhs.err_est
    if "theorem_rhs" in extra:
        third = extra["theorem_rhs"]
        rel_diff = max(
            rel_diff,
            _rel(abs(lhs.value - third), third),
            _rel(abs(rhs.value - third), third),
        )
        rhs_err = max(rhs_err, extra["theorem_rhs_err"])
    gate = max(tol, PRECISION_FLOOR) / 10
    errs_ok = _rel(lhs.err_est, rhs.value) < gate and _rel(rhs_err, rhs.value) < gate
    if errs_ok:
        verdict = "pass" if rel_diff < tol else "fail"
        reason = ""
    else:
        verdict = "skipped"
        reason = "error estimates exceed tol/10"
    ms = (time.perf_counter() - start) * 1e3
    return VerificationRecord(
        identity, params, lhs.value, rhs.value, abs_diff, rel_diff,
        lhs.err_est, rhs_err, verdict, ms, reason, extra,
    )


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("QBILATERAL_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(
    cfg: SamplerConfig,
    tol: float = 1e-8,
    trunc: TruncationConfig = DEFAULT_TRUNC,
) -> SuiteReport:
    """Sample ``cfg.trials`` specs and verify each; records keep trial order."""
    specs = sample_params(cfg)

    def one(spec):
        return verify_identity(spec, tol, trunc, cfg.identity)

    threads = min(_thread_cap(), len(specs))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, specs))
    else:
        records = [one(s) for s in specs]
    echo = {"sampler": cfg.to_dict(), "tol": tol, "truncation": asdict(trunc)}
    return SuiteReport.from_records(records, echo)


def run_all(
    cfg: SamplerConfig,
    tol: float = 1e-8,
    trunc: TruncationConfig = DEFAULT_TRUNC,
    identities: Sequence[str] = IDENTITIES,
) -> SuiteReport:
    """Run one suite per identity with otherwise identical settings and merge them."""
    records = []
    for ident in identities:
        sub = run_suite(replace(cfg, identity=ident, balanced=False), tol, trunc)
        records.extend(sub.records)
    echo = {
        "sampler": dict(cfg.to_dict(), identity="all"),
        "tol": tol,
        "truncation": asdict(trunc),
    }
    return SuiteReport.from_records(records, echo)
