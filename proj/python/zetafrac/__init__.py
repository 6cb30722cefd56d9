"""Certified checks on floor(1/(zeta(n)-1)), the prime zeta function and {(4/3)^n}."""

from ._zetafrac import (
    DomainError,
    IntegrityError,
    ResumeError,
    StraddlesInteger,
    cf_second_term,
    check_claim,
    check_prime_gap_real,
    claim_ids,
    classify_k,
    classify_m,
    delta,
    epsilon,
    pow_decompose,
    prime_zeta,
    scan,
    zeta_minus1,
)

__all__ = [
    "DomainError",
    "IntegrityError",
    "ResumeError",
    "StraddlesInteger",
    "cf_second_term",
    "check_claim",
    "check_prime_gap_real",
    "claim_ids",
    "classify_k",
    "classify_m",
    "delta",
    "epsilon",
    "pow_decompose",
    "prime_zeta",
    "scan",
    "zeta_minus1",
]

__version__ = "0.1.0"
