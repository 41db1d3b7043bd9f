# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled series kernels; same contracts as ``_pykernels``."""
from math import gcd

from libc.stdlib cimport free, malloc

# |a_i| * |b_j| * terms must stay below 2**63 for the machine-word path
cdef int WORD_BITS = 62


cdef list _convolve_words(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t k, i, lo, hi
    cdef long long *pa = <long long *> malloc(la * sizeof(long long))
    cdef long long *pb = <long long *> malloc(lb * sizeof(long long))
    cdef long long s
    cdef list out = [0] * n
    if pa == NULL or pb == NULL:
        free(pa)
        free(pb)
        raise MemoryError()
    try:
        for i in range(la):
            pa[i] = a[i]
        for i in range(lb):
            pb[i] = b[i]
        for k in range(n):
            lo = k - lb + 1
            if lo < 0:
                lo = 0
            hi = k if k < la - 1 else la - 1
            s = 0
            for i in range(lo, hi + 1):
                s += pa[i] * pb[k - i]
            out[k] = s
    finally:
        free(pa)
        free(pb)
    return out


cdef int _bits(list xs):
    cdef int top = 0, bl
    for x in xs:
        bl = (<object> x).bit_length()
        if bl > top:
            top = bl
    return top


def convolve(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la and lb and _bits(a) + _bits(b) + (min(la, lb)).bit_length() <= WORD_BITS:
        return _convolve_words(a, b, n)
    cdef Py_ssize_t k, i, lo, hi
    cdef list out = [0] * n
    cdef object s, x
    for k in range(n):
        lo = k - lb + 1
        if lo < 0:
            lo = 0
        hi = k if k < la - 1 else la - 1
        if lo > hi:
            continue
        s = 0
        for i in range(lo, hi + 1):
            x = a[i]
            if x:
                s += x * b[k - i]
        out[k] = s
    return out


def reciprocal(list a, Py_ssize_t n):
    cdef object a0 = a[0]
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t i, k, top
    cdef list pw = [1] * (n + 1)
    cdef list R = [0] * n
    cdef object s, ai
    for i in range(1, n + 1):
        pw[i] = pw[i - 1] * a0
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
    return [R[k] * pw[n - 1 - k] for k in range(n)], pw[n]


def normalize(list nums, object den):
    cdef object g
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = gcd(den, *nums)
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return nums, den
