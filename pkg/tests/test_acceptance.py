"""The nine acceptance criteria, at their stated tolerances and sizes.

Each test prints one line of the form ``[PASS] criterion N ...`` or
``[FAIL] criterion N ...`` straight to the terminal (run ``pytest -s`` or
look at test_output.txt) before asserting.  Seeds are fixed so every run
examines the same parameter sets.
"""

import cmath
import math
import time

import numpy as np
import pytest

from qbilateral.errors import PoleProximity
from qbilateral.harness import SamplerConfig, run_suite, sample_params
from qbilateral.identities import (
    CorollarySpec,
    LemmaSpec,
    corollary_rhs_terms,
    lemma_rhs,
    validate_domain,
)
from qbilateral.phi import PhiSpec, QuadratureConfig, phi_continued, phi_series, reduce_argument
from qbilateral.qcore import nearest_negative_power, qpoch_finite, qpoch_infinite

pytestmark = pytest.mark.acceptance

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number} {title}: {detail}")
        return ok

    return emit


def suites(identity, combos, trials, tol, **extra):
    """Run one suite per (k, l, q_values) combo; return reports and seconds."""
    start = time.perf_counter()
    out = []
    for i, (k, l, qs) in enumerate(combos):
        cfg = SamplerConfig(identity=identity, k=k, l=l, q_values=qs, trials=trials, seed=SEED + i, **extra)
        out.append(((k, l, qs), run_suite(cfg, tol)))
    return out, time.perf_counter() - start


def tally(results):
    passed = sum(r.pass_count for _, r in results)
    failed = sum(r.fail_count for _, r in results)
    skipped = sum(r.skip_count for _, r in results)
    worst = max(
        (rec.rel_diff for _, r in results for rec in r.records if rec.verdict != "skipped"),
        default=math.nan,
    )
    return passed, failed, skipped, worst


# ---------------------------------------------------------------- 1


def test_criterion_1_lemma_suite(report):
    combos = [(k, 0, (q,)) for k in range(4) for q in (0.3, 0.5)]
    results, secs = suites("lemma", combos, 50, 1e-8)
    passed, failed, skipped, worst = tally(results)
    total = passed + failed + skipped
    ok = failed == 0 and skipped / total < 0.05 and secs < 300
    report(
        1, "Lemma suite", ok,
        f"{passed}/{total} pass, {failed} fail, skip rate {skipped / total:.1%}, "
        f"worst rel_diff {worst:.2e}, {secs:.1f} s",
    )
    assert ok


# ---------------------------------------------------------------- 2


def test_criterion_2_theorem_suite(report):
    combos = [(k, l, (0.3, 0.5)) for k, l in [(0, 0), (1, 0), (1, 1), (2, 1)]]
    results, secs = suites("theorem", combos, 25, 1e-7)
    passed, failed, skipped, worst = tally(results)
    ok = failed == 0 and passed > 0 and secs < 900
    report(
        2, "Theorem suite", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped of {passed + failed + skipped}, "
        f"worst rel_diff {worst:.2e}, {secs:.1f} s",
    )
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_balanced_case(report):
    results, secs = suites("theorem", [(1, 1, (0.3, 0.5))], 10, 1e-7, balanced=True)
    passed, failed, skipped, worst = tally(results)
    constraint = max(
        max(
            abs(s.a[0] * s.a[1] * s.c[0] * s.c[1] - s.b[0] * s.d[0]),
            abs(s.y * s.c[0] * s.c[1] - s.d[0] * s.x),
        )
        for s in (
            sample_params(SamplerConfig(identity="theorem", balanced=True, trials=10, seed=SEED))
        )
    )
    ok = failed == 0 and passed > 0 and constraint < 1e-14
    report(
        3, "balanced k=l=1 case", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped, worst rel_diff {worst:.2e}, "
        f"constraint residual {constraint:.1e}",
    )
    assert ok


# ---------------------------------------------------------------- 4


def test_criterion_4_proof_oracle(report):
    results, secs = suites("proof_integral", [(1, 1, (0.3, 0.5))], 10, 1e-7)
    passed, failed, skipped, worst = tally(results)
    ok = failed == 0 and passed > 0
    report(
        4, "three-way agreement with the proof integral", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped, worst pairwise rel_diff {worst:.2e}",
    )
    assert ok


# ---------------------------------------------------------------- 5


def _degeneration_residuals(specs):
    """Max |first term - lemma_rhs| and max |other terms| / |total| over c = d specs."""
    first_err, rest = 0.0, 0.0
    used = 0
    for s in specs:
        spec = CorollarySpec(s.a, s.b, s.x, s.c, s.c, s.t, s.q)
        if validate_domain(spec):
            continue
        terms = corollary_rhs_terms(spec)
        total = sum(t.value for t in terms)
        lemma = lemma_rhs(LemmaSpec(s.a, s.b, s.x, s.t, s.q)).value
        first_err = max(first_err, abs(terms[0].value - lemma) / max(1.0, abs(lemma)))
        rest = max([rest] + [abs(t.value) / abs(total) for t in terms[1:]])
        used += 1
    return first_err, rest, used


def test_criterion_5_corollary_suite(report):
    combos = [(k, 0, (0.3, 0.5)) for k in range(3)]
    results, secs = suites("corollary", combos, 25, 1e-8)
    passed, failed, skipped, worst = tally(results)
    specs = [
        s for k in range(3)
        for s in sample_params(SamplerConfig(identity="corollary", k=k, trials=25, seed=SEED + k))
    ]
    first_err, rest, used = _degeneration_residuals(specs)
    ok = failed == 0 and passed > 0 and used > 0 and first_err < 1e-12 and rest < 1e-12
    report(
        5, "Corollary suite and c=d degeneration", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped, worst rel_diff {worst:.2e}; "
        f"c=d on {used} specs: leading term vs Lemma {first_err:.1e}, other terms {rest:.1e}",
    )
    assert ok


# ---------------------------------------------------------------- 6


def test_criterion_6_psi2_transform(report):
    results, secs = suites("psi2", [(0, 0, (0.3, 0.5))], 50, 1e-9)
    passed, failed, skipped, worst = tally(results)
    ok = failed == 0 and passed > 0
    report(
        6, "2psi2 transformation", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped, worst rel_diff {worst:.2e}",
    )
    assert ok


# ---------------------------------------------------------------- 7


def _rand_disk(rng, lo, hi):
    return cmath.rect(rng.uniform(lo, hi), rng.uniform(-math.pi, math.pi))


def _phi_spec(rng, z):
    r = int(rng.integers(1, 3))  # 2phi1 or 3phi2
    num = [_rand_disk(rng, 0.0, 0.9) for _ in range(r + 1)]
    den = [_rand_disk(rng, 0.05, 0.9) for _ in range(r)]
    q = _rand_disk(rng, 0.2, 0.7)
    return PhiSpec(num, den, q, z)


def _kernel_clear(spec):
    # the contour kernel carries (x0, q/x0; q)_inf, which vanishes for z in q^Z
    x0, _ = reduce_argument(spec.z, spec.q)
    return min(abs(1 - x0), abs(1 - spec.q / x0)) > 1e-3


def _draw_specs(rng, count, zdraw):
    specs, excluded = [], 0
    while len(specs) < count:
        spec = _phi_spec(rng, zdraw(rng))
        if spec.violations() or not _kernel_clear(spec):
            excluded += 1
            continue
        specs.append(spec)
    return specs, excluded


def test_criterion_7_continuation_consistency(report):
    rng = np.random.default_rng(SEED)
    inside, ex_in = _draw_specs(rng, 100, lambda g: _rand_disk(g, 0.0, 0.9))
    worst_in = 0.0
    for spec in inside:
        forced = phi_continued(spec, force_quadrature=True).value
        worst_in = max(worst_in, abs(forced - phi_series(spec).value))

    def outside(g):
        return cmath.rect(g.uniform(1.0, 5.0), g.uniform(0.05, 2 * math.pi - 0.05))

    beyond, ex_out = _draw_specs(rng, 50, outside)
    worst_out = 0.0
    for spec in beyond:
        amax = max(abs(a) for a in spec.num)
        r1, r2 = amax + 0.35 * (1 - amax), amax + 0.8 * (1 - amax)
        v1 = phi_continued(spec, QuadratureConfig(radius=r1)).value
        v2 = phi_continued(spec, QuadratureConfig(radius=r2)).value
        worst_out = max(worst_out, abs(v1 - v2))
    ok = worst_in < 1e-9 and worst_out < 1e-9
    report(
        7, "continuation consistency", ok,
        f"|z|<=0.9: max |quadrature - series| {worst_in:.1e} over 100 specs; "
        f"1<|z|<=5: max radius spread {worst_out:.1e} over 50 specs "
        f"({ex_in + ex_out} draws on poles or within 1e-3 of q^Z redrawn)",
    )
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_swap_symmetry(report):
    results, secs = suites("swap", [(1, 1, (0.3, 0.5))], 10, 1e-7)
    passed, failed, skipped, worst = tally(results)
    ok = failed == 0 and passed > 0
    report(
        8, "swap symmetry of the right-hand side", ok,
        f"{passed} pass, {failed} fail, {skipped} skipped, worst rel_diff {worst:.2e}",
    )
    assert ok


# ---------------------------------------------------------------- 9


def _close(u, v, rel=1e-12):
    return abs(u - v) <= rel * max(abs(v), 1e-300)


def _clear(a, q, lo, hi, band=1e-3):
    return all(abs(1 - a * q**j) > band for j in range(lo, hi))


def _cases(rng, count, draw, keep):
    out = []
    while len(out) < count:
        case = draw(rng)
        if keep(*case):
            out.append(case)
    return out


def _sym(g):
    return _rand_disk(g, 0.0, 2.0)


def _base(g):
    return _rand_disk(g, 0.2, 0.9)


def test_criterion_9_qcore_properties(report):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    bad = {}

    cases = _cases(
        rng, 1000,
        lambda g: (_sym(g), _base(g), int(g.integers(-10, 11)), int(g.integers(-10, 11))),
        lambda a, q, n, m: _clear(a, q, min(0, n, n + m) - 1, max(0, n, n + m) + 1),
    )
    bad["finite splitting"] = sum(
        not _close(qpoch_finite(a, q, n) * qpoch_finite(a * q**n, q, m), qpoch_finite(a, q, n + m))
        for a, q, n, m in cases
    )

    cases = _cases(rng, 1000, lambda g: (_sym(g), _base(g)), lambda a, q: nearest_negative_power(a, q) > 1e-3)
    bad["infinite recurrence"] = sum(
        not _close((1 - a) * qpoch_infinite(a * q, q).value, qpoch_infinite(a, q).value)
        for a, q in cases
    )

    cases = _cases(
        rng, 1000, lambda g: (_sym(g), _base(g), int(g.integers(0, 31))),
        lambda a, q, n: nearest_negative_power(a, q) > 1e-3,
    )
    bad["infinite splitting"] = sum(
        not _close(qpoch_finite(a, q, n) * qpoch_infinite(a * q**n, q).value, qpoch_infinite(a, q).value)
        for a, q, n in cases
    )

    cases = _cases(
        rng, 1000, lambda g: (_sym(g), _base(g), int(g.integers(1, 16))),
        lambda a, q, m: _clear(a, q, -m, 0),
    )
    bad["negative-index reciprocity"] = sum(
        not _close(qpoch_finite(a, q, -m) * qpoch_finite(a * q**-m, q, m), 1.0) for a, q, m in cases
    )

    secs = time.perf_counter() - start
    ok = not any(bad.values()) and secs < 10
    detail = ", ".join(f"{name} {1000 - n}/1000" for name, n in bad.items())
    report(9, "qcore properties", ok, f"{detail}, {secs:.1f} s")
    assert ok
