"""Exact numbers and the small number-theoretic helpers the checks are phrased in.

Rationals are :class:`fractions.Fraction`, which already keeps values reduced
with a positive denominator.  p-adic orders are plain ``int`` with
:data:`INFINITE` standing in for the order of zero.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import ParameterError

Rational = Fraction
RationalLike = Union[int, Fraction, str]

#: ord_p(0); compares above every integer and absorbs addition.
INFINITE = math.inf


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParameterError(f"not an exact rational: {x!r}")
    return Fraction(x)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _int_order(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ord_p(x: RationalLike, p: int):
    """Exponent of the prime ``p`` in ``x``; :data:`INFINITE` when ``x == 0``.

    >>> ord_p(744, 2)
    3
    >>> ord_p(Fraction(31, 72), 3)
    -2
    """
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    x = as_rational(x)
    if x == 0:
        return INFINITE
    return _int_order(abs(x.numerator), p) - _int_order(x.denominator, p)


def digit_sum(n: int, b: int) -> int:
    """Sum of the base-``b`` digits of ``n``."""
    if b < 2:
        raise ParameterError(f"base must be >= 2, got {b}")
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    s = 0
    while n:
        n, r = divmod(n, b)
        s += r
    return s


def catalan(n: int) -> int:
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    return math.factorial(2 * n) // (math.factorial(n + 1) * math.factorial(n))


def catalan_ord2_one_index(n: int) -> int:
    """Subscript i of the n-th Catalan number C_i (i >= 1) with 2-adic order 1."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    seen = 0
    i = 0
    while True:
        i += 1
        # C_0 is excluded by position, so C_1 is inspected even though C_1 == C_0.
        if ord_p(catalan(i), 2) == 1:
            seen += 1
            if seen == n:
                return i


def catalan_ord2_one(n: int) -> int:
    """The n-th (1-indexed) Catalan number after C_0 whose 2-adic order is exactly 1.

    Found by enumeration: 2, 14, 42, 1430, ...
    """
    return catalan(catalan_ord2_one_index(n))


def format_order(v) -> Union[int, str]:
    return "inf" if v == INFINITE else int(v)


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not an exact rational string: {s!r}") from exc
