"""Fixed-Hamming-weight basis bookkeeping.

Qubit ``p`` (1-based) is bit ``p - 1`` of a basis index, so a ket written
``|q_n ... q_2 q_1>`` reads directly as the binary index.  The sector of
weight ``N`` on ``M`` qubits is enumerated in colexicographic order of the
occupied sets, which coincides with increasing integer value of the masks.
"""
from functools import lru_cache
from math import comb

import numpy as np


@lru_cache(maxsize=64)
def _sector_masks(M, N):
    # strings without the top bit come first, then those with it: already sorted
    row = [np.zeros(1, dtype=np.int64)] + [np.zeros(0, dtype=np.int64)] * N
    for m in range(M):
        top = np.int64(1) << m
        row = [row[0]] + [np.concatenate([row[n], row[n - 1] | top]) for n in range(1, N + 1)]
    masks = row[N]
    masks.setflags(write=False)
    return masks


def sector_masks(M, N):
    """Sorted bitmasks of every weight-``N`` string on ``M`` qubits."""
    if not 0 <= N <= M:
        raise ValueError(f"need 0 <= N <= M, got M={M}, N={N}")
    return _sector_masks(M, N)


@lru_cache(maxsize=64)
def _occupations(M, N):
    masks = sector_masks(M, N)
    bits = (masks[:, None] >> np.arange(M)) & 1
    occ = np.nonzero(bits)[1].reshape(len(masks), N)
    occ.setflags(write=False)
    return occ


def occupations(M, N):
    """``(C(M,N), N)`` array of 0-based occupied qubits, ascending per row."""
    return _occupations(M, N)


def rank(occupied):
    """Colex rank of a set of 0-based positions."""
    return sum(comb(c, i + 1) for i, c in enumerate(sorted(occupied)))


def unrank(r, N):
    """Inverse of :func:`rank` for sets of size ``N``."""
    out = []
    for k in range(N, 0, -1):
        c = k - 1
        while comb(c + 1, k) <= r:
            c += 1
        out.append(c)
        r -= comb(c, k)
    return sorted(out)


def mask_of(occupied):
    return sum(1 << c for c in occupied)


def bitstring(index, n):
    """Ket label with qubit ``n`` leftmost and qubit 1 rightmost."""
    return format(index, f"0{n}b")


def popcount(x):
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out
