"""Elementary symmetric polynomials, binary tree polynomials and the
rotation angles derived from them.

Tables are indexed ``[p, q]`` with ``0 <= p <= M`` and ``0 <= q <= N``.
The ESP table used for angles is a *suffix* table: row ``p`` holds the
polynomials over the ``p`` last coefficients ``eta_{M-p+1} .. eta_M``.
"""
import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCoefficientError


def _as_nonnegative(x, name="x"):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite")
    if np.any(x < 0):
        raise ValueError(f"{name} must be non-negative")
    return x


def band_mask(M, N):
    """Boolean ``(M, N)`` mask of the cells a binary tree state may use.

    Row ``p - 1`` / column ``j - 1`` is allowed iff
    ``max(1, p + N - M) <= j <= min(p, N)``.
    """
    p = np.arange(1, M + 1)[:, None]
    j = np.arange(1, N + 1)[None, :]
    return (j >= np.maximum(1, p + N - M)) & (j <= np.minimum(p, N))


def sum_esp(x, n):
    """ESP of degree ``n`` over the values ``x`` (O(m n) recursion)."""
    x = _as_nonnegative(x)
    if n < 0:
        raise ValueError("degree must be non-negative")
    m = len(x)
    if n > m:
        return 0.0
    e = np.zeros(n + 1)
    e[0] = 1.0
    for xp in x:
        e[1:] = e[1:] + xp * e[:-1]
    return float(e[n])


def _table_json(entries, kind):
    rows, cols = entries.shape
    return json.dumps({"kind": kind, "rows": rows, "cols": cols,
                       "entries": entries.ravel().tolist()})


@dataclass(frozen=True)
class EspTable:
    """Suffix ESP table of the squared magnitudes."""

    entries: np.ndarray

    @property
    def M(self):
        return self.entries.shape[0] - 1

    @property
    def N(self):
        return self.entries.shape[1] - 1

    def __getitem__(self, pq):
        return self.entries[pq]

    def to_json(self):
        return _table_json(self.entries, "esp")


@dataclass(frozen=True)
class BtpTable:
    """Prefix binary-tree-polynomial table, the loop of ``SumBTP``."""

    entries: np.ndarray

    @property
    def M(self):
        return self.entries.shape[0] - 1

    @property
    def N(self):
        return self.entries.shape[1] - 1

    def __getitem__(self, pq):
        return self.entries[pq]

    def to_json(self):
        return _table_json(self.entries, "btp")


def build_esp_table(eta_magnitudes, N):
    mags = _as_nonnegative(eta_magnitudes, "magnitudes")
    M = len(mags)
    if not 1 <= N <= M:
        raise ValueError(f"need 1 <= N <= M, got M={M}, N={N}")
    x = mags[::-1] ** 2
    t = np.zeros((M + 1, N + 1))
    t[:, 0] = 1.0
    for p in range(1, M + 1):
        # row p adds coefficient eta_{M-p+1}, i.e. x[p-1] after reversal
        t[p, 1:] = x[p - 1] * t[p - 1, :-1] + t[p - 1, 1:]
    t.setflags(write=False)
    return EspTable(t)


def build_btp_table(x):
    """Run ``SumBTP`` on an ``M x N`` matrix of squared magnitudes.

    Entry ``[p, q]`` is the sum over ``p_1 < ... < p_q <= p`` of
    ``x[p_1, 1] ... x[p_q, q]`` (1-based), so ``[M, N]`` is the BTS norm.
    Cells outside the band are ignored.
    """
    x = _as_nonnegative(x)
    if x.ndim != 2:
        raise ValueError("expected an M x N matrix")
    M, N = x.shape
    if not 1 <= N <= M:
        raise ValueError(f"need 1 <= N <= M, got shape {x.shape}")
    x = np.where(band_mask(M, N), x, 0.0)
    t = np.zeros((M + 1, N + 1))
    t[:, 0] = 1.0
    for p in range(1, M + 1):
        t[p, 1:] = x[p - 1] * t[p - 1, :-1] + t[p - 1, 1:]
    t.setflags(write=False)
    return BtpTable(t)


def _suffix_btp(x):
    # suffix table [p, q]: orbitals M-p+1..M, the q occupied ones take
    # columns N-q+1..N in ascending order; equals SumBTP on the flipped matrix
    return build_btp_table(np.asarray(x)[::-1, ::-1])


@dataclass(frozen=True)
class AngleTable:
    """Splitting amplitudes ``theta[p, q]`` and Ry angles ``tau[p, q]``.

    Only cells reachable from the initial determinant are defined, i.e.
    ``max(1, p + N - M) <= q <= min(p, N)`` for ``1 <= p <= M``; the rest
    hold NaN.  ``theta_bar`` is the complementary amplitude
    ``sqrt(1 - theta**2)`` taken from the polynomial ratio directly.
    """

    M: int
    N: int
    theta: np.ndarray
    theta_bar: np.ndarray

    @property
    def tau(self):
        return 2.0 * np.arccos(self.theta)

    @property
    def defined(self):
        return ~np.isnan(self.theta)

    def angle(self, p, q):
        """Ry angle for cell ``(p, q)``."""
        if not self.reachable(p, q):
            raise KeyError(f"angle ({p}, {q}) is not reachable for M={self.M}, N={self.N}")
        return float(2.0 * np.arccos(self.theta[p, q]))

    def reachable(self, p, q):
        return 1 <= p <= self.M and max(1, p + self.N - self.M) <= q <= min(p, self.N)

    def to_json(self):
        cells = [{"p": p, "q": q, "theta": float(self.theta[p, q]),
                  "tau": float(self.tau[p, q])}
                 for p in range(1, self.M + 1) for q in range(1, self.N + 1)
                 if self.reachable(p, q)]
        return json.dumps({"M": self.M, "N": self.N, "cells": cells})


def _reachable_cells(M, N):
    for p in range(1, M + 1):
        for q in range(max(1, p + N - M), min(p, N) + 1):
            yield p, q


def _angles_from_tables(mag_of, table, M, N):
    theta = np.full((M + 1, N + 1), np.nan)
    theta_bar = np.full((M + 1, N + 1), np.nan)
    for p, q in _reachable_cells(M, N):
        denom = table[p, q]
        if not denom > 0:
            raise DegenerateCoefficientError(p, q)
        th = mag_of(p, q) * np.sqrt(table[p - 1, q - 1] / denom)
        tb = np.sqrt(table[p - 1, q] / denom) if q <= p - 1 else 0.0
        # guard rounding just above 1
        theta[p, q] = min(th, 1.0)
        theta_bar[p, q] = min(tb, 1.0)
    theta.setflags(write=False)
    theta_bar.setflags(write=False)
    return AngleTable(M, N, theta, theta_bar)


def agp_angles(eta_magnitudes, N):
    """Angles of the ESP-state circuit for the given magnitudes."""
    mags = _as_nonnegative(eta_magnitudes, "magnitudes")
    M = len(mags)
    top = mags.max(initial=0.0)
    if top > 0:
        mags = mags / top
    table = build_esp_table(mags, N)
    return _angles_from_tables(lambda p, q: mags[M - p], table, M, N)


def bts_angles(bts_magnitudes):
    """Angles of the binary-tree-state circuit for an ``M x N`` band matrix."""
    mags = _as_nonnegative(bts_magnitudes, "magnitudes")
    if mags.ndim != 2:
        raise ValueError("expected an M x N matrix")
    M, N = mags.shape
    mags = np.where(band_mask(M, N), mags, 0.0)
    top = mags.max(initial=0.0)
    if top > 0:
        mags = mags / top
    table = _suffix_btp(mags ** 2)
    return _angles_from_tables(lambda p, q: mags[M - p, N - q], table, M, N)
