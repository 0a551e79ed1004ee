"""Exact scalar helpers.

Capacities and flow values are ``int`` or :class:`fractions.Fraction`.
Infinity is ``math.inf``; it compares above every finite value and
``inf - finite`` stays ``inf``.  Solver code never does ``inf - inf``.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Union

INF = math.inf

Number = Union[int, Fraction, float]


def is_inf(x: Number) -> bool:
    return isinstance(x, float) and math.isinf(x)


def exact(x: Number) -> Number:
    """Collapse integral fractions to ``int``; leave ``inf`` alone."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"finite float {x!r} in exact arithmetic")
    return x


def half(x: Number) -> Number:
    if is_inf(x):
        return x
    return exact(Fraction(x) / 2)


def is_integral(x: Number) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    return False


def floor(x: Number) -> int:
    return math.floor(x)


def ceil(x: Number) -> int:
    return math.ceil(x)


def parse_number(token: str) -> Number:
    """Parse ``inf``, an integer, ``p/q`` or a decimal into an exact value."""
    if token in ("inf", "INF", "infinity"):
        return INF
    if "/" in token or "." in token or "e" in token.lower():
        return exact(Fraction(token))
    return int(token)


def format_number(x: Number) -> str:
    if is_inf(x):
        return "inf"
    x = exact(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def checks_enabled() -> bool:
    """Deterministic-test mode: runtime invariant assertions on.

    Selected by ``PLANARFLOW_CHECKS=1``.
    """
    return os.environ.get("PLANARFLOW_CHECKS", "0").lower() in ("1", "true", "yes", "on")
