"""Floating-point helpers: the shared power-evaluation policy and summation.

Powers of the form (1-p)^t underflow or lose accuracy when evaluated naively
for large t or tiny p.  Both failure modes are avoided by switching to
exp(t*log(1-p)) past a fixed threshold; below it the direct power is at least
as accurate.  Every module evaluates its power factors through these two
helpers so the policy lives in one place.
"""

import math

# Direct powers stay accurate for moderate exponents; log-space takes over
# past this, or whenever the base is within 1e-8 of 1.
POW_EXPONENT_SWITCH = 64
POW_TINY_MASS = 1e-8


def pow_one_minus(p: float, t: int | float) -> float:
    """(1 - p)^t for p in [0, 1], safe for large t and tiny p."""
    if t == 0:
        return 1.0
    if p >= 1.0:
        return 0.0
    if p <= 0.0:
        return 1.0
    if t >= POW_EXPONENT_SWITCH or p < POW_TINY_MASS:
        return math.exp(t * math.log1p(-p))
    return (1.0 - p) ** t


def pow_unit(b: float, t: int | float) -> float:
    """b^t for a base b in [0, 1]; underflow rounds to 0 rather than raising."""
    if t == 0:
        return 1.0
    if b <= 0.0:
        return 0.0
    if b >= 1.0:
        return 1.0
    if t >= POW_EXPONENT_SWITCH:
        if b > 0.5:
            # b - 1 is exact here (Sterbenz), so log1p keeps full precision
            return math.exp(t * math.log1p(b - 1.0))
        return math.exp(t * math.log(b))
    return b ** t


def fsum(values) -> float:
    """Compensated summation (exactly rounded, order-insensitive)."""
    return math.fsum(values)
