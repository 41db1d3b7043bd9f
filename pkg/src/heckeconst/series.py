"""Truncated formal Laurent series over the rationals.

A :class:`LaurentSeries` stores the coefficients of X^lower .. X^order, all of
them exact.  Every operation propagates the order so that no emitted
coefficient depends on information the inputs do not carry: a product is
known up to ``min(f.order + g.lower, g.order + f.lower)``.

Internally the coefficients are integer numerators over one shared
denominator, which is what the kernels in :mod:`heckeconst.kernels` operate
on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Tuple

from . import kernels
from .errors import ParameterError, SeriesDivisionError, WindowError
from .exactnum import RationalLike, as_rational


@dataclass(frozen=True, eq=True)
class LaurentSeries:
    lower: int
    order: int
    nums: Tuple[int, ...]
    den: int

    def __post_init__(self):
        if self.order < self.lower:
            raise ParameterError(f"order {self.order} below lower index {self.lower}")
        if len(self.nums) != self.order - self.lower + 1:
            raise ParameterError("coefficient count does not match the window")

    @classmethod
    def from_coeffs(
        cls,
        coeffs: Sequence[RationalLike],
        lower: int = 0,
        order: Optional[int] = None,
    ) -> "LaurentSeries":
        """Build from rationals for X^lower, X^(lower+1), ...

        ``order`` defaults to the last given index; a larger order pads with
        known zeros, a smaller one truncates.
        """
        cs = [as_rational(c) for c in coeffs]
        if order is None:
            order = lower + len(cs) - 1
        n = order - lower + 1
        if n < 1:
            raise ParameterError("empty coefficient window")
        cs = (cs + [Fraction(0)] * n)[:n]
        den = lcm(*(c.denominator for c in cs))
        nums = [c.numerator * (den // c.denominator) for c in cs]
        return cls._make(lower, order, nums, den)

    @classmethod
    def _make(cls, lower: int, order: int, nums, den: int) -> "LaurentSeries":
        nums, den = kernels.normalize(list(nums), den)
        i = 0
        while i < len(nums) and nums[i] == 0:
            i += 1
        if i == len(nums):
            # identically zero on the window
            low = 0 if order >= 0 else order
            return cls(low, order, (0,) * (order - low + 1), 1)
        return cls(lower + i, order, tuple(nums[i:]), den)

    @classmethod
    def monomial(cls, n: int, c: RationalLike = 1, order: Optional[int] = None):
        return cls.from_coeffs([c], lower=n, order=n if order is None else order)

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        d = self.den
        return tuple(Fraction(x, d) for x in self.nums)

    @property
    def is_zero(self) -> bool:
        return not any(self.nums)

    @property
    def leading(self) -> Fraction:
        return Fraction(self.nums[0], self.den)

    def items(self) -> Iterable[Tuple[int, Fraction]]:
        for i, c in enumerate(self.coeffs):
            yield self.lower + i, c

    def __getitem__(self, n: int) -> Fraction:
        return coefficient(self, n)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return divide(self, other)
        return scale(self, 1 / as_rational(other))

    def __pow__(self, k: int):
        return power(self, k)

    def __add__(self, other: "LaurentSeries"):
        return add(self, other)

    def __neg__(self):
        return LaurentSeries(self.lower, self.order, tuple(-x for x in self.nums), self.den)

    def __sub__(self, other: "LaurentSeries"):
        return add(self, -other)

    def __repr__(self):
        terms = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"LaurentSeries({{{terms}}}, order={self.order})"


def coefficient(f: LaurentSeries, n: int) -> Fraction:
    """Exact coefficient of X^n.

    Indices past ``f.order`` are unknown and raise :class:`WindowError`.
    Indices below ``f.lower`` are known zeros.
    """
    if n > f.order:
        raise WindowError(f"X^{n} is beyond the known order {f.order}")
    if n < f.lower:
        return Fraction(0)
    return Fraction(f.nums[n - f.lower], f.den)


def truncate(f: LaurentSeries, order: int) -> LaurentSeries:
    if order > f.order:
        raise WindowError(f"cannot extend order {f.order} to {order}")
    if order < f.lower:
        return LaurentSeries._make(order, order, [0], 1)
    return LaurentSeries._make(f.lower, order, f.nums[: order - f.lower + 1], f.den)


def shift(f: LaurentSeries, n: int) -> LaurentSeries:
    """Multiply by X^n exactly."""
    return LaurentSeries(f.lower + n, f.order + n, f.nums, f.den)


def scale(f: LaurentSeries, c: RationalLike) -> LaurentSeries:
    c = as_rational(c)
    return LaurentSeries._make(
        f.lower, f.order, [x * c.numerator for x in f.nums], f.den * c.denominator
    )


def add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    lower = min(f.lower, g.lower)
    order = min(f.order, g.order)
    if order < lower:
        return LaurentSeries._make(order, order, [0], 1)
    den = lcm(f.den, g.den)
    ff, gg = den // f.den, den // g.den
    nums = [0] * (order - lower + 1)
    for src, mult in ((f, ff), (g, gg)):
        for i, x in enumerate(src.nums):
            j = src.lower + i - lower
            if j >= len(nums):
                break
            nums[j] += x * mult
    return LaurentSeries._make(lower, order, nums, den)


def multiply(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    lower = f.lower + g.lower
    order = min(f.order + g.lower, g.order + f.lower)
    nums = kernels.convolve(list(f.nums), list(g.nums), order - lower + 1)
    return LaurentSeries._make(lower, order, nums, f.den * g.den)


def power(f: LaurentSeries, k: int) -> LaurentSeries:
    """k-th power by binary exponentiation (k >= 1)."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"power must be a positive integer, got {k!r}")
    result = None
    base = f
    while True:
        if k & 1:
            result = base if result is None else multiply(result, base)
        k >>= 1
        if not k:
            return result
        base = multiply(base, base)


def reciprocal(g: LaurentSeries) -> LaurentSeries:
    if g.is_zero:
        raise SeriesDivisionError("leading coefficient of the divisor is zero")
    n = g.order - g.lower + 1
    nums, den = kernels.reciprocal(list(g.nums), n)
    # 1/(G/D) = D * nums / den, shifted by -lower
    return LaurentSeries._make(-g.lower, g.order - 2 * g.lower, [x * g.den for x in nums], den)


def divide(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """Quotient ``h`` with ``h * g == f`` on the provable window."""
    return multiply(f, reciprocal(g))


def exponential(f: LaurentSeries) -> LaurentSeries:
    """exp(f) for a series without constant or principal part."""
    if not f.is_zero and f.lower < 1:
        raise ParameterError("exponential needs a series starting at X^1 or later")
    N = f.order
    if N < 0:
        raise ParameterError("exponential needs order >= 0")
    fc = [coefficient(f, i) if i >= f.lower else Fraction(0) for i in range(N + 1)]
    E = [Fraction(0)] * (N + 1)
    E[0] = Fraction(1)
    # n E_n = sum_{i=1}^{n} i f_i E_{n-i}, from E' = f' E
    for n in range(1, N + 1):
        s = Fraction(0)
        for i in range(1, n + 1):
            if fc[i]:
                s += i * fc[i] * E[n - i]
        E[n] = s / n
    return LaurentSeries.from_coeffs(E, lower=0, order=N)


def _window_ints(f: LaurentSeries, n: int):
    """Integer numerators for X^0..X^(n-1) of a power series, plus its denominator."""
    out = [0] * n
    for i, x in enumerate(f.nums):
        j = f.lower + i
        if 0 <= j < n:
            out[j] = x
    return out, f.den


def compose(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """f(g(X)) for a power series f and a series g starting at X^1 or later."""
    if not f.is_zero and f.lower < 0:
        raise ParameterError("outer series must be a power series")
    if not g.is_zero and g.lower < 1:
        raise ParameterError("inner series must have no constant term")
    order = min(f.order, g.order)
    if order < 0:
        raise ParameterError("composition needs non-negative orders")
    n = order + 1
    gn, gd = _window_ints(g, n)
    fc = [coefficient(f, i) for i in range(n)]
    # Horner, all lists truncated to n terms (exact since g starts at X^1)
    acc, den = [0] * n, 1
    for c in reversed(fc):
        acc = kernels.convolve(acc, gn, n)
        den *= gd
        q = c.denominator
        acc = [x * q for x in acc]
        acc[0] += c.numerator * den
        acc, den = kernels.normalize(acc, den * q)
    return LaurentSeries._make(0, order, acc, den)


def revert(f: LaurentSeries) -> LaurentSeries:
    """Compositional inverse of ``f = X + f_2 X^2 + ...`` by Lagrange inversion.

    [X^n] g = (1/n) [X^(n-1)] (X/f)^n.
    """
    if f.lower != 1 or f.leading != 1:
        raise ParameterError("revert needs a series X + O(X^2)")
    N = f.order
    psi = reciprocal(shift(f, -1))  # X/f, order N-1
    pn, pd = _window_ints(psi, N)
    acc, den = [1] + [0] * (N - 1), 1
    out = [Fraction(0)] * N
    for n in range(1, N + 1):
        acc = kernels.convolve(acc, pn, N)
        acc, den = kernels.normalize(acc, den * pd)
        out[n - 1] = Fraction(acc[n - 1], den * n)
    return LaurentSeries.from_coeffs(out, lower=1, order=N)
