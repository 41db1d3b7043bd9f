"""Expansions of the Hecke triangle functions J_m and their rescalings j_m.

For each m the hauptmodul J_m is recovered from the hypergeometric equation
with parameters c = 1, a + b = 1/2, ab = 1/16 - 1/(4 m^2) (local exponent
differences 0 at the cusp, 1/2 and 1/m at the elliptic points).  With
y1 = 2F1(a, b; 1; t) and the logarithmic solution y1 log t + h(t) the local
nome at the cusp is

    q = t * exp(h(t) / y1(t)),

which is reverted to t(q) and inverted to J = 1/t(q).  Only the rational
symmetric functions a + b and ab enter, so every coefficient is rational.
The expansion is normalized to leading coefficient 1; the rescaled family
multiplies the X^n coefficient by s^(n+1) with s = 64 m^3.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Tuple, Union

from . import series as S
from .errors import ParameterError
from .exactnum import as_rational
from .series import LaurentSeries

#: family tags for the unscaled and the rescaled functions
K = "K"
KBAR = "Kbar"
FAMILIES = (K, KBAR)


@dataclass(frozen=True)
class HeckeParameters:
    m: int
    s: Fraction
    ab: Fraction
    a_plus_b: Fraction = Fraction(1, 2)

    @classmethod
    def for_m(cls, m: int) -> "HeckeParameters":
        if not isinstance(m, int) or isinstance(m, bool) or m < 3:
            raise ParameterError(f"m must be an integer >= 3, got {m!r}")
        return cls(m=m, s=Fraction(64 * m**3), ab=Fraction(1, 16) - Fraction(1, 4 * m * m))


@dataclass(frozen=True)
class FrobeniusTables:
    c: Tuple[Fraction, ...]
    e: Tuple[Fraction, ...]
    order: int


@dataclass(frozen=True)
class CanonicalExpansion:
    m: int
    J: LaurentSeries
    jbar: LaurentSeries

    @property
    def order(self) -> int:
        return self.J.order

    def truncated(self, order: int) -> "CanonicalExpansion":
        if order == self.order:
            return self
        return CanonicalExpansion(self.m, S.truncate(self.J, order), S.truncate(self.jbar, order))

    def series(self, family: str) -> LaurentSeries:
        if family == K:
            return self.J
        if family == KBAR:
            return self.jbar
        raise ParameterError(f"unknown family {family!r}")


ExpansionSource = Callable[[int, int], CanonicalExpansion]


def frobenius_tables(params: HeckeParameters, order: int) -> FrobeniusTables:
    """Coefficients c_n of y1 and e_n of the non-log part of y2, n = 0..order.

    u_n = (a+n)(b+n) = ab + (a+b) n + n^2
    c_{n+1} = c_n u_n / (n+1)^2
    e_n = c_n * sum_{k<n} (1/(a+k) + 1/(b+k) - 2/(k+1))
    """
    if order < 2:
        raise ParameterError(f"order must be >= 2, got {order}")
    ab, apb = params.ab, params.a_plus_b
    c = [Fraction(1)]
    e = [Fraction(0)]
    acc = Fraction(0)
    for n in range(order):
        u = ab + apb * n + n * n
        acc += (apb + 2 * n) / u - Fraction(2, n + 1)
        c.append(c[-1] * u / (n + 1) ** 2)
        e.append(c[-1] * acc)
    return FrobeniusTables(tuple(c), tuple(e), order)


def nome_relation(params: HeckeParameters, order: int) -> LaurentSeries:
    """q(t) = t * exp(h/y1) through t^order."""
    if order < 2:
        raise ParameterError(f"order must be >= 2, got {order}")
    tab = frobenius_tables(params, order - 1)
    y1 = LaurentSeries.from_coeffs(tab.c)
    h = LaurentSeries.from_coeffs(tab.e)
    return S.shift(S.exponential(S.divide(h, y1)), 1)


def bar_transform(f: LaurentSeries, params: Union[HeckeParameters, Fraction, int]) -> LaurentSeries:
    """Rescale X -> s X, then divide by the new leading coefficient.

    The X^n coefficient becomes k_n s^n / (k_a s^a).
    """
    s = params.s if isinstance(params, HeckeParameters) else as_rational(params)
    if f.is_zero:
        raise ParameterError("cannot normalize a zero series")
    if s == 0:
        raise ParameterError("scale must be nonzero")
    lead = f.leading
    out = [c * s ** (i) / lead for i, c in enumerate(f.coeffs)]
    return LaurentSeries.from_coeffs(out, lower=f.lower, order=f.order)


def _compute_expansion(m: int, order: int) -> CanonicalExpansion:
    params = HeckeParameters.for_m(m)
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    t = S.revert(nome_relation(params, order + 2))
    J = S.shift(S.reciprocal(S.shift(t, -1)), -1)
    return CanonicalExpansion(m, J, bar_transform(J, params))


_memo: Dict[int, CanonicalExpansion] = {}
_memo_lock = threading.Lock()


def canonical_expansion(m: int, order: int) -> CanonicalExpansion:
    """J_m and j_m exact through X^order, memoized per m at the largest order seen."""
    with _memo_lock:
        hit = _memo.get(m)
    if hit is not None and hit.order >= order:
        return hit.truncated(order)
    exp = _compute_expansion(m, order)
    with _memo_lock:
        cur = _memo.get(m)
        if cur is None or cur.order < exp.order:
            _memo[m] = exp
    return exp


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()


def power_expansion(
    family: str, k: int, m: int, order: int, source: ExpansionSource = canonical_expansion
) -> LaurentSeries:
    """k-th power of J_m (family K) or j_m (family Kbar), exact through X^order."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    base_order = max(order + k - 1, 1)
    f = source(m, base_order).series(family)
    return S.truncate(S.power(f, k), order)


def constant_term(
    family: str, k: int, m: int, source: ExpansionSource = canonical_expansion
) -> Fraction:
    """The X^0 coefficient of the k-th power; the constant term A_{F,k,m}(0)."""
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    HeckeParameters.for_m(m)
    f = source(m, k + 1).series(family)
    return S.coefficient(S.power(f, k), 0)
