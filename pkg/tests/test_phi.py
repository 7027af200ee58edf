import cmath

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qbilateral.errors import DomainError, NonConvergence, PoleProximity
from qbilateral.phi import (
    GeneralProductSpec,
    PhiSpec,
    QuadratureConfig,
    distance_to_cut,
    laurent_coeff,
    phi_continued,
    phi_series,
    reduce_argument,
)
from qbilateral.qcore import qpoch_finite, qpoch_infinite, qpoch_ratio

# Reference values from oracle_values.py (mpmath, 30 digits).  The
# continued ones use Heine's transformation, cross-checked there against
# the classical connection formula.
PHI21_NAIVE = complex(1.9997334968061021, 0.0)
PHI21_COMPLEX = complex(-0.097370770550118509, 3.7007221858964267)
PHI32_SERIES = complex(0.63560180416249085, 0.017715702147055856)
PHI21_CONT_A = complex(0.24536261825289155, 0.0)
PHI21_CONT_B = complex(-16.483570907088144, -34.798246010729392)
PHI21_CONT_C = complex(0.058589447416554565, 0.028880665660483349)
THETA_COEFF = {
    -3: complex(0.0053716998634037696, 0.029544349248720733),
    0: complex(2.2130721483139309, 0.0),
    2: complex(0.23901179201790454, -0.31868238935720606),
    5: complex(-2.1428183464705616e-5, -2.3119882159287639e-5),
}


def rel(u, v):
    return abs(u - v) / max(1.0, abs(v))


# ------------------------------------------------------------------- series


def test_series_at_zero():
    assert phi_series(PhiSpec([0.3, 0.2], [0.6], 0.5, 0)).value == 1


def test_series_cancelling_pair_is_q_binomial():
    r = phi_series(PhiSpec([0.4, 0.6], [0.6], 0.3, 0.5))
    expect = qpoch_infinite(0.2, 0.3).value / qpoch_infinite(0.5, 0.3).value
    assert rel(r.value, expect) < 1e-14


def test_series_against_naive_sum():
    assert rel(phi_series(PhiSpec([0.2, 0.7], [0.5], 0.3, 0.6)).value, PHI21_NAIVE) < 1e-13


def test_series_naive_loop_in_double():
    # 200 terms, each built from explicit finite products
    a, b, c, q, z = 0.2, 0.7, 0.5, 0.3, 0.6
    naive = sum(
        qpoch_finite(a, q, j) * qpoch_finite(b, q, j)
        / (qpoch_finite(q, q, j) * qpoch_finite(c, q, j)) * z**j
        for j in range(200)
    )
    assert rel(phi_series(PhiSpec([a, b], [c], q, z)).value, naive) < 1e-13


def test_series_complex_references():
    r = phi_series(PhiSpec([0.2 + 0.1j, -0.4 + 0.3j], [0.5 - 0.2j], 0.4 + 0.2j, 0.5 + 0.6j))
    assert rel(r.value, PHI21_COMPLEX) < 1e-13
    r = phi_series(PhiSpec([0.3, -0.2 + 0.4j, 0.6], [0.1, 0.2 + 0.5j], 0.5, -0.7 + 0.3j))
    assert rel(r.value, PHI32_SERIES) < 1e-13
    assert r.method == "series" and r.err_est < 1e-13


def test_series_rejects_outside_disk():
    with pytest.raises(DomainError):
        phi_series(PhiSpec([0.3, 0.2], [0.6], 0.5, -1.0))


@pytest.mark.parametrize(
    "spec",
    [
        PhiSpec([0.3], [0.6], 0.5, 0.2),  # wrong lengths
        PhiSpec([0.3, 0.2], [0.5**-2], 0.5, 0.2),  # b = q^-2
        PhiSpec([0.3, 0.2], [0.6], 0.5, 2.0),  # on the cut
    ],
)
def test_spec_violations(spec):
    assert spec.violations()
    with pytest.raises(DomainError):
        phi_continued(spec)


def test_distance_to_cut():
    assert distance_to_cut(3 + 0.5j) == 0.5
    assert distance_to_cut(-1) == 2


# ------------------------------------------------------------- continuation


def test_continued_inside_disk_delegates_to_series():
    spec = PhiSpec([0.2, 0.5], [0.4], 0.3, 0.5 * cmath.exp(2j))
    assert phi_continued(spec).method == "series"
    forced = phi_continued(spec, force_quadrature=True)
    assert forced.method == "quadrature"
    assert abs(forced.value - phi_series(spec).value) < 1e-10


def test_continued_q_binomial():
    value = phi_continued(PhiSpec([0.3], [], 0.4, -2.0)).value
    expect = qpoch_infinite(-0.6, 0.4).value / qpoch_infinite(-2.0, 0.4).value
    assert rel(value, expect) < 1e-10


@pytest.mark.parametrize(
    "spec, expect",
    [
        (PhiSpec([0.2, 0.5], [0.4], 0.3, -3.7), PHI21_CONT_A),
        (PhiSpec([0.3 + 0.2j, -0.5 + 0.1j], [0.4 - 0.3j], 0.5, 2.5 + 1.5j), PHI21_CONT_B),
        (PhiSpec([0.6, -0.3 + 0.4j], [0.2], 0.3 + 0.3j, -40 + 7j), PHI21_CONT_C),
    ],
)
def test_continued_against_independent_continuation(spec, expect):
    r = phi_continued(spec)
    assert r.method == "quadrature"
    assert rel(r.value, expect) < 1e-10


def test_continued_radius_independence():
    spec = PhiSpec([0.2, 0.5], [0.4], 0.3, -3.7)
    v1 = phi_continued(spec, QuadratureConfig(radius=0.6)).value
    v2 = phi_continued(spec, QuadratureConfig(radius=0.9)).value
    assert abs(v1 - v2) < 1e-9


def test_continued_radius_outside_annulus():
    with pytest.raises(DomainError):
        phi_continued(PhiSpec([0.7, 0.5], [0.4], 0.3, -3.7), QuadratureConfig(radius=0.6))


def test_continued_requires_small_numerators():
    with pytest.raises(DomainError):
        phi_continued(PhiSpec([1.2, 0.5], [0.4], 0.3, -3.7))


def test_continued_near_pole():
    # for complex q the poles q^-m of the continuation leave the cut
    q = 0.5j
    with pytest.raises(PoleProximity):
        phi_continued(PhiSpec([0.2, 0.5], [0.4], q, q**-3 * (1 + 1e-12)))


def test_reduce_argument():
    q = 0.4 + 0.3j
    for z in (7.5 - 3j, -0.01j, 0.5, 123.0):
        x0, n = reduce_argument(z, q)
        assert abs(q) < abs(x0) <= 1
        assert abs(x0 * q**n - z) < 1e-12 * abs(z)


def test_zero_numerator_allowed():
    spec = PhiSpec([0.0, 0.3], [0.5], 0.4, -2.5)
    assert phi_continued(spec).value == pytest.approx(
        phi_continued(spec, QuadratureConfig(radius=0.8)).value, abs=1e-10
    )


def test_quadrature_config_invariants():
    for kwargs in ({"min_nodes": 4}, {"min_nodes": 48}, {"max_nodes": 32}, {"radius": 0.0}, {"tol": 0}):
        with pytest.raises(ValueError):
            QuadratureConfig(**kwargs)


# ------------------------------------------------------------ Laurent coeffs


def test_laurent_constant_function():
    spec = GeneralProductSpec(q=0.5)
    assert laurent_coeff(spec, 0).value == 1
    assert laurent_coeff(spec, 3).value == 0
    assert laurent_coeff(spec, -2).method == "closed_form"


@pytest.mark.parametrize("n", sorted(THETA_COEFF))
def test_laurent_theta_against_cauchy_product(n):
    x, q = -0.6 + 0.3j, 0.4
    r = laurent_coeff(GeneralProductSpec(alpha=[x], beta=[q / x], q=q), n)
    assert abs(r.value - THETA_COEFF[n]) < 1e-10


@pytest.mark.parametrize("n", [-5, -1, 0, 2, 7])
def test_laurent_ramanujan_sum(n):
    # sum (a)_n/(b)_n t^n = (q, b/a, at, q/at)/(b, q/a, t, b/at)
    a, b, q = 0.3 + 0.2j, 0.1 - 0.05j, 0.5
    spec = GeneralProductSpec(alpha=[a], gamma=[1], beta=[q / a], delta=[b / a], q=q)
    const = qpoch_ratio([q, b / a], [b, q / a], q).value
    expect = qpoch_finite(a, q, n) / qpoch_finite(b, q, n)
    assert rel(const * laurent_coeff(spec, n).value, expect) < 1e-12


def test_laurent_radius_independence():
    a, b, q = 0.3 + 0.2j, 0.1 - 0.05j, 0.5
    spec = GeneralProductSpec(alpha=[a], gamma=[1], beta=[q / a], delta=[b / a], q=q)
    v1 = laurent_coeff(spec, -3, QuadratureConfig(radius=0.5)).value
    v2 = laurent_coeff(spec, -3, QuadratureConfig(radius=0.9)).value
    assert abs(v1 - v2) < 1e-9


def test_laurent_empty_annulus():
    with pytest.raises(DomainError):
        laurent_coeff(GeneralProductSpec(gamma=[2.0], delta=[0.8], q=0.5), 0)
    with pytest.raises(DomainError):
        laurent_coeff(GeneralProductSpec(gamma=[1.0], delta=[0.2], q=0.5), 0, QuadratureConfig(radius=1.5))


@pytest.mark.parametrize("n", [-6, -2, 0, 1, 4])
def test_laurent_lemma_integrand_matches_continuation(n):
    a, b, x, q = [0.2 + 0.1j, -0.4], [0.5j], -1.3 + 0.4j, 0.45
    spec = GeneralProductSpec(alpha=[x], beta=[q / x, *b], gamma=[1], delta=a, q=q)
    pref = qpoch_ratio([q, *a], [x, q / x, *b], q).value
    expect = phi_continued(PhiSpec(a, b, q, x * q**n)).value
    assert rel(pref * laurent_coeff(spec, n).value, expect) < 1e-9


# -------------------------------------------------------------- properties

unit = st.builds(lambda r, th: cmath.rect(r, th), st.floats(0.0, 0.9), st.floats(-3.14, 3.14))
window = st.builds(lambda r, th: cmath.rect(r, th), st.floats(0.05, 0.9), st.floats(-3.14, 3.14))
bases = st.builds(lambda r, th: cmath.rect(r, th), st.floats(0.2, 0.7), st.floats(-3.14, 3.14))
PROPS = settings(max_examples=60, deadline=None)


def _admissible(spec):
    if spec.violations() or any(abs(b) < 0.05 for b in spec.den):
        return False
    # the contour kernel carries (x, q/x)_inf, which vanishes on q^Z
    x0, _ = reduce_argument(spec.z, spec.q)
    return min(abs(1 - x0), abs(1 - spec.q / x0)) > 1e-3


@PROPS
@given(st.lists(unit, min_size=2, max_size=3), bases, window)
def test_method_agreement(params, q, z):
    num, den = params, [0.5 * p + 0.3 for p in params[1:]]
    spec = PhiSpec(num, den, q, z)
    assume(_admissible(spec))
    forced = phi_continued(spec, force_quadrature=True).value
    assert abs(forced - phi_series(spec).value) < 1e-9 * max(1, abs(forced))


@PROPS
@given(unit, unit, bases, st.floats(1.05, 5), st.floats(0.1, 6.18))
def test_order_reduction(a, extra, q, modulus, angle):
    z = cmath.rect(modulus, angle)
    base = PhiSpec([a], [], q, z)
    assume(not base.violations() and abs(1 - extra) > 0.05)
    grown = PhiSpec([a, extra], [extra], q, z)
    assume(not grown.violations())
    v0, v1 = phi_continued(base).value, phi_continued(grown).value
    assert abs(v0 - v1) <= 1e-11 * max(1, abs(v0))


@PROPS
@given(unit, bases, st.floats(0.0, 5.0), st.floats(0.05, 6.23))
def test_q_binomial_everywhere(a, q, modulus, angle):
    z = cmath.rect(modulus, angle)
    spec = PhiSpec([a], [], q, z)
    assume(not spec.violations() and abs(z) > 1e-3)
    den = qpoch_infinite(z, q).value
    assume(abs(den) > 1e-6)
    expect = qpoch_infinite(a * z, q).value / den
    assert abs(phi_continued(spec).value - expect) < 1e-10 * max(1, abs(expect))


@PROPS
@given(
    st.lists(st.floats(-0.9, 0.9), min_size=2, max_size=3),
    st.floats(0.2, 0.7),
    st.floats(1.05, 5),
    st.floats(0.1, 3.0),
)
def test_conjugation_symmetry(num, q, modulus, angle):
    den = [0.5 * v + 0.3 for v in num[1:]]
    z = cmath.rect(modulus, angle)
    spec = PhiSpec(num, den, q, z)
    mirror = PhiSpec(num, den, q, z.conjugate())
    assume(not spec.violations())
    v, w = phi_continued(spec).value, phi_continued(mirror).value
    assert abs(w - v.conjugate()) < 1e-11 * max(1, abs(v))


def test_kernel_nodes_are_read_only():
    from qbilateral.phi import _kernel_nodes

    vals = _kernel_nodes((0.3,), (), 0.5, 0.7, 0.6, 64)
    assert isinstance(vals, np.ndarray) and not vals.flags.writeable


def test_continued_just_inside_the_circle():
    # the power series would need ~3e6 terms at |z| = 1 - 1e-5; the contour does not care
    a, q = 0.3 - 0.1j, 0.5
    z = cmath.rect(1 - 1e-5, 2.0)
    with pytest.raises(NonConvergence):
        phi_series(PhiSpec([a], [], q, z))
    expect = qpoch_infinite(a * z, q).value / qpoch_infinite(z, q).value
    r = phi_continued(PhiSpec([a], [], q, z))
    assert r.method == "quadrature"
    assert abs(r.value - expect) < 1e-10 * abs(expect)
