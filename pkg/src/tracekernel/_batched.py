"""Batched n x n matrix products over F_p with numpy uint64 arithmetic.

Two exact kernels: one for p = 2^61 - 1 using 32-bit limbs and the Mersenne
folding 2^61 = 1, and one for p < 2^31 where a product fits in 62 bits.
"""

from __future__ import annotations

import numpy as np

MERSENNE_61 = (1 << 61) - 1

_P61 = np.uint64(MERSENNE_61)
_LO32 = np.uint64(0xFFFFFFFF)
_LO29 = np.uint64((1 << 29) - 1)
_S3 = np.uint64(3)
_S29 = np.uint64(29)
_S32 = np.uint64(32)
_S61 = np.uint64(61)


def supports(p: int) -> bool:
    return p == MERSENNE_61 or p < (1 << 31)


def _fold61(x):
    x = (x & _P61) + (x >> _S61)
    return np.where(x >= _P61, x - _P61, x)


def _mulmod61(a, b):
    # operands < 2^61; every partial sum below stays < 2^63
    a_hi, a_lo = a >> _S32, a & _LO32
    b_hi, b_lo = b >> _S32, b & _LO32
    hh = a_hi * b_hi
    mid = a_hi * b_lo + a_lo * b_hi
    ll = a_lo * b_lo
    r = (hh << _S3) + (mid >> _S29) + ((mid & _LO29) << _S32) + (ll & _P61) + (ll >> _S61)
    return _fold61(r)


def batch_matmul(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """X[k] @ Y mod p for every k; X has shape (N, n, n), Y shape (n, n)."""
    n = Y.shape[0]
    if p == MERSENNE_61:
        out = _mulmod61(X[:, :, 0, None], Y[0][None, None, :])
        for k in range(1, n):
            out = out + _mulmod61(X[:, :, k, None], Y[k][None, None, :])
            out = np.where(out >= _P61, out - _P61, out)
        return out
    pp = np.uint64(p)
    out = (X[:, :, 0, None] * Y[0][None, None, :]) % pp
    for k in range(1, n):
        out = (out + (X[:, :, k, None] * Y[k][None, None, :]) % pp) % pp
    return out


def batch_trace(X: np.ndarray, p: int) -> list[int]:
    return [sum(d) % p for d in X.diagonal(axis1=1, axis2=2).tolist()]
