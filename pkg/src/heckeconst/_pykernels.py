"""Pure-Python series kernels.

Series travel through these routines as lists of integer numerators over one
shared denominator.  ``_ckernels.pyx`` implements the same three functions;
both must stay result-identical.
"""
from math import gcd
from operator import mul


def convolve(a, b, n):
    """First ``n`` terms of the Cauchy product of integer lists ``a`` and ``b``."""
    la = len(a)
    lb = len(b)
    out = [0] * n
    for k in range(n):
        lo = k - lb + 1
        if lo < 0:
            lo = 0
        hi = k if k < la - 1 else la - 1
        if lo > hi:
            continue
        out[k] = sum(map(mul, a[lo:hi + 1], b[k - lo::-1][: hi - lo + 1]))
    return out


def reciprocal(a, n):
    """Invert the integer power series ``a`` (``a[0] != 0``) to ``n`` terms.

    Returns ``(nums, den)`` with ``1/a = nums / den`` coefficientwise.
    """
    a0 = a[0]
    la = len(a)
    pw = [1] * (n + 1)
    for i in range(1, n + 1):
        pw[i] = pw[i - 1] * a0
    # r_k = R_k / a0^(k+1)
    R = [0] * n
    if n:
        R[0] = 1
    for k in range(1, n):
        s = 0
        top = k if k < la - 1 else la - 1
        for i in range(1, top + 1):
            ai = a[i]
            if ai:
                s += ai * R[k - i] * pw[i - 1]
        R[k] = -s
    nums = [R[k] * pw[n - 1 - k] for k in range(n)]
    return nums, pw[n]


def normalize(nums, den):
    """Divide out the common content; make the denominator positive."""
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = gcd(den, *nums)
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return nums, den
