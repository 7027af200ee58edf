"""Numerical verification of bilateral basic hypergeometric summations.

Modules
    qcore       q-shifted factorials
    phi         r+1 phi r series, continuation, Laurent coefficients
    identities  spec types, validators, both sides of each summation
    harness     seeded sampling, verification records, suite reports
    cli         the ``qbilateral`` command
"""

from .errors import (
    DegenerateParameters,
    DomainError,
    NonConvergence,
    PoleProximity,
    QSeriesError,
    SamplerExhausted,
    ZeroDenominator,
)
from .harness import (
    SamplerConfig,
    SuiteReport,
    VerificationRecord,
    run_all,
    run_suite,
    sample_params,
    verify_identity,
)
from .identities import (
    CorollarySpec,
    LemmaSpec,
    Psi2Spec,
    TheoremSpec,
    TruncationConfig,
    corollary_lhs,
    corollary_rhs,
    idem_expand,
    lemma_lhs,
    lemma_rhs,
    proof_integral_oracle,
    psi2_lhs,
    psi2_rhs,
    theorem_lhs,
    theorem_rhs,
    validate_domain,
)
from .phi import (
    GeneralProductSpec,
    PhiSpec,
    QuadratureConfig,
    laurent_coeff,
    phi_continued,
    phi_series,
)
from .qcore import EvalResult, PochTolerance, qpoch_finite, qpoch_infinite, qpoch_ratio

__version__ = "0.1.0"

__all__ = [
    "CorollarySpec", "DegenerateParameters", "DomainError", "EvalResult",
    "GeneralProductSpec", "LemmaSpec", "NonConvergence", "PhiSpec",
    "PochTolerance", "PoleProximity", "Psi2Spec", "QSeriesError",
    "QuadratureConfig", "SamplerConfig", "SamplerExhausted", "SuiteReport",
    "TheoremSpec", "TruncationConfig", "VerificationRecord", "ZeroDenominator",
    "corollary_lhs", "corollary_rhs", "idem_expand", "laurent_coeff",
    "lemma_lhs", "lemma_rhs", "phi_continued", "phi_series",
    "proof_integral_oracle", "psi2_lhs", "psi2_rhs", "qpoch_finite",
    "qpoch_infinite", "qpoch_ratio", "run_all", "run_suite", "sample_params",
    "theorem_lhs", "theorem_rhs", "validate_domain", "verify_identity",
]
