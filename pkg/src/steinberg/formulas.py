"""Dimension formulas and applicability predicates for GL_n over an order.

Signatures are pairs (r, s): r real embeddings and s conjugate pairs of
complex embeddings of the coefficient field (so (1, 0) for the rationals,
(2, 0) real quadratic, (0, 1) imaginary quadratic).
"""

from __future__ import annotations

from .quadratic import RationalIntegers, class_group, has_norm_minus_one_unit

NORM_MINUS_ONE_MISSING = "NORM_MINUS_ONE_MISSING"
PARITY_ODD = "PARITY_ODD"
SIGNATURE_TOO_SMALL = "SIGNATURE_TOO_SMALL"
IMAGINARY_FIELD = "IMAGINARY_FIELD"


def _check_signature(n, r, s):
    if n < 1:
        raise ValueError("n must be positive")
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("signature needs r, s >= 0 and r + s >= 1")


def vcd_gl(n, r, s) -> int:
    """Virtual cohomological dimension of GL_n over an order of signature (r, s)."""
    _check_signature(n, r, s)
    return r * (n * (n + 1) // 2) + s * n * n - n


def vcd_sl(n, r, s) -> int:
    """Virtual cohomological dimension of SL_n over an order of signature (r, s)."""
    _check_signature(n, r, s)
    return vcd_gl(n, r, s) - r - s + 1


def bordification_dim(n, r, s) -> int:
    """Dimension of the bordified symmetric space; exceeds vcd_gl by n - 1."""
    _check_signature(n, r, s)
    return r * (n * (n + 1) // 2) + s * n * n - 1


def _wide_class_number(order) -> int:
    if isinstance(order, RationalIntegers):
        return 1
    return class_group(order).h


def vanishing_applies(n, order):
    """(applies, reasons) for the top-degree vanishing criterion.

    Applies when all three hold: n is even, the order has a unit of norm
    -1, and the signature satisfies r + s >= n.  Failing hypotheses are
    named by stable reason codes.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    r, s = order.signature
    reasons = []
    if n % 2 == 1:
        reasons.append(PARITY_ODD)
    if not has_norm_minus_one_unit(order):
        if s > 0:
            reasons.append(IMAGINARY_FIELD)
        else:
            reasons.append(NORM_MINUS_ONE_MISSING)
    if r + s < n:
        reasons.append(SIGNATURE_TOO_SMALL)
    return (not reasons, tuple(reasons))


def nonvanishing_lower_bound(n, order):
    """(h - 1)^(n - 1) when n is odd or no norm -1 unit exists; else None.

    h is the wide class number.  None means the bound's hypotheses fail
    (n even with a norm -1 unit present), not a zero bound.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n % 2 == 0 and has_norm_minus_one_unit(order):
        return None
    return (_wide_class_number(order) - 1) ** (n - 1)
