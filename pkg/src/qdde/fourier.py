"""Radix-2 Cooley-Tukey transforms used to diagonalise the periodic update operator."""
from __future__ import annotations

import numpy as np


def _bit_reversed(n: int) -> np.ndarray:
    """Index permutation that sorts by reversed bit pattern."""
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=int)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def fft(x: np.ndarray) -> np.ndarray:
    """Unnormalised forward transform along the last axis (length a power of two).

    Decimation in time: bit-reversal reorder, then butterfly stages of
    doubling span with twiddles exp(-2*pi*i*k/m).
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n == 0 or n & (n - 1):
        raise ValueError(f"transform length must be a power of two, got {n}")
    y = x[..., _bit_reversed(n)].copy()
    m = 2
    while m <= n:
        half = m // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / m)
        blocks = y.reshape(y.shape[:-1] + (n // m, m))
        even = blocks[..., :half].copy()
        odd = blocks[..., half:] * tw
        blocks[..., :half] = even + odd
        blocks[..., half:] = even - odd
        m *= 2
    return y


def ifft(x: np.ndarray) -> np.ndarray:
    """Inverse of fft; carries the 1/n factor."""
    x = np.asarray(x, dtype=complex)
    return np.conj(fft(np.conj(x))) / x.shape[-1]


def fft_nd(x: np.ndarray) -> np.ndarray:
    """Forward transform along every axis of a d-dimensional array."""
    y = np.asarray(x, dtype=complex)
    for axis in range(y.ndim):
        y = np.moveaxis(fft(np.moveaxis(y, axis, -1)), -1, axis)
    return y


def ifft_nd(x: np.ndarray) -> np.ndarray:
    """Inverse transform along every axis of a d-dimensional array."""
    y = np.asarray(x, dtype=complex)
    for axis in range(y.ndim):
        y = np.moveaxis(ifft(np.moveaxis(y, axis, -1)), -1, axis)
    return y
