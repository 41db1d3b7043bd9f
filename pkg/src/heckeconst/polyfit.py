"""Exact interpolation of coefficient data across m.

``stabilized_fit`` samples ``m = m_start, m_start + 1, ...`` and accepts the
interpolant through ``m_start..M`` once two further samples leave it
unchanged.  It works in Newton form: appending nodes changes the polynomial
only through the new divided differences, so "windows M and M+2 agree" is
the same as "the next two divided differences vanish".
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from .errors import ParameterError, StabilizationError
from .exactnum import RationalLike, as_rational, format_rational

DEFAULT_CAP = 120


@dataclass(frozen=True)
class RationalPolynomial:
    """Dense polynomial over Q, constant term first, no trailing zeros."""

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_ints(cls, *coeffs: RationalLike) -> "RationalPolynomial":
        return cls(tuple(as_rational(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ParameterError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x: RationalLike) -> Fraction:
        return evaluate(self, x)

    def __mul__(self, c: RationalLike) -> "RationalPolynomial":
        c = as_rational(c)
        return RationalPolynomial(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag}*{mono}"
            else:
                body = f"({format_rational(mag)})*{mono}"
            if out:
                out += f" {sign} {body}"
            else:
                out = "-" + body if c < 0 else body
        return out


@dataclass(frozen=True)
class Decomposition:
    nu: Fraction
    monic_part: RationalPolynomial


@dataclass(frozen=True)
class StabilizedFit:
    polynomial: RationalPolynomial
    m_start: int
    m_max: int
    samples: Tuple[Tuple[int, Fraction], ...]


def evaluate(p: RationalPolynomial, x: RationalLike) -> Fraction:
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def _mul_linear(poly: List[Fraction], root: Fraction) -> List[Fraction]:
    """poly * (x - root)"""
    out = [Fraction(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] += c
        out[i] -= c * root
    return out


def lagrange_interpolate(points: Iterable[Tuple[RationalLike, RationalLike]]) -> RationalPolynomial:
    """The unique polynomial of degree < len(points) through the points.

    Built from the Lagrange basis: W(x) = prod (x - x_j), and
    L_i(x) = W(x) / ((x - x_i) W'(x_i)).
    """
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    if not pts:
        raise ParameterError("need at least one point")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ParameterError("abscissae must be distinct")
    W = [Fraction(1)]
    for x in xs:
        W = _mul_linear(W, x)
    n = len(pts)
    total = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        if yi == 0:
            continue
        # synthetic division W / (x - xi)
        q = [Fraction(0)] * n
        carry = Fraction(0)
        for d in range(n, 0, -1):
            carry = W[d] + carry * xi
            q[d - 1] = carry
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                denom *= xi - xj
        w = yi / denom
        for d in range(n):
            total[d] += w * q[d]
    return RationalPolynomial(tuple(total))


def _newton_to_monomial(xs: Sequence[Fraction], cs: Sequence[Fraction]) -> RationalPolynomial:
    poly = [Fraction(0)]
    for i in range(len(cs) - 1, -1, -1):
        poly = _mul_linear(poly, xs[i])
        poly[0] += cs[i]
    return RationalPolynomial(tuple(poly))


def stabilized_fit(
    sampler: Callable[[int], RationalLike],
    m_start: int = 3,
    cap: int = DEFAULT_CAP,
    confirm: int = 2,
) -> StabilizedFit:
    """Smallest M with interp(m_start..M) == interp(m_start..M+confirm).

    Raises :class:`StabilizationError` when no M <= cap qualifies, which
    signals that the sampled family is probably not polynomial in m.
    """
    if cap < m_start:
        raise ParameterError("cap must be >= m_start")
    xs: List[Fraction] = []
    samples: Dict[int, Fraction] = {}
    diag: List[Fraction] = []  # last row of the divided-difference table
    newton: List[Fraction] = []
    for m in range(m_start, cap + confirm + 1):
        y = as_rational(sampler(m))
        samples[m] = y
        x = Fraction(m)
        row = [y]
        for j, prev in enumerate(diag):
            row.append((row[j] - prev) / (x - xs[len(xs) - 1 - j]))
        xs.append(x)
        diag = row
        newton.append(row[-1])
        M = m - confirm
        if M >= m_start and all(c == 0 for c in newton[M - m_start + 1:]):
            n = M - m_start + 1
            poly = _newton_to_monomial(xs[:n], newton[:n])
            return StabilizedFit(
                poly, m_start, M, tuple((mm, samples[mm]) for mm in sorted(samples))
            )
    raise StabilizationError(
        f"no stabilization for m in {m_start}..{cap}; the family is likely not polynomial in m"
    )


def decompose(p: RationalPolynomial) -> Decomposition:
    """Leading coefficient and monic part: p = nu * monic."""
    if not p.coeffs:
        raise ParameterError("cannot decompose the zero polynomial")
    nu = p.leading
    return Decomposition(nu, RationalPolynomial(tuple(c / nu for c in p.coeffs)))
