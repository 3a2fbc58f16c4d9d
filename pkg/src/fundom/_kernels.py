"""Batch kernels for ranking and for the combinatorial witness.

Two implementations with identical results: numba-compiled loops and a
vectorised numpy path.  Set ``FUNDOM_DISABLE_NUMBA=1`` to force numpy (also
used automatically when numba is missing).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("FUNDOM_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")


# -- numpy -------------------------------------------------------------------


def rank_batch_numpy(X: np.ndarray, eps: np.ndarray) -> np.ndarray:
    B, n = X.shape
    if n == 0:
        return np.zeros((B, 0), dtype=np.int64)
    S = np.sort(X, axis=1)
    D = np.diff(S, axis=1)
    D[D <= 0] = np.inf
    d = D.min(axis=1) if n > 1 else np.full(B, np.inf)
    d[~np.isfinite(d)] = 1.0
    Xp = X + d[:, None] * eps[None, :]
    order = np.argsort(Xp, axis=1, kind="stable")
    ranks = np.empty((B, n), dtype=np.int64)
    np.put_along_axis(ranks, order, np.broadcast_to(np.arange(1, n + 1, dtype=np.int64), (B, n)), axis=1)
    return ranks


def phi_batch_numpy(hat, offsets, pts, moves, descending: bool) -> np.ndarray:
    B, n = hat.shape
    winv = np.broadcast_to(np.arange(n, dtype=np.int64), (B, n)).copy()
    pick = np.argmax if descending else np.argmin
    for l in range(len(offsets) - 1):
        a, b = offsets[l], offsets[l + 1]
        vals = np.take_along_axis(hat, winv[:, pts[a:b]], axis=1)
        rows = moves[a + pick(vals, axis=1)]
        winv = np.take_along_axis(winv, rows, axis=1)
    return winv


# -- numba -------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def rank_batch_numba(X, eps):
        B, n = X.shape
        ranks = np.empty((B, n), dtype=np.int64)
        xp = np.empty(n, dtype=np.float64)
        for r in range(B):
            row = X[r]
            order = np.argsort(row)
            d = np.inf
            for k in range(n - 1):
                gap = row[order[k + 1]] - row[order[k]]
                if gap > 0 and gap < d:
                    d = gap
            if not np.isfinite(d):
                d = 1.0
            for k in range(n):
                xp[k] = row[k] + d * eps[k]
            # insertion sort on (xp, index): the stable order, cheap when
            # the perturbation barely moves anything
            for k in range(1, n):
                q = order[k]
                m = k - 1
                while m >= 0 and (xp[order[m]] > xp[q] or (xp[order[m]] == xp[q] and order[m] > q)):
                    order[m + 1] = order[m]
                    m -= 1
                order[m + 1] = q
            for k in range(n):
                ranks[r, order[k]] = k + 1
        return ranks

    @numba.njit(cache=True)
    def phi_batch_numba(hat, offsets, pts, moves, descending):
        B, n = hat.shape
        winv = np.empty((B, n), dtype=np.int64)
        tmp = np.empty(n, dtype=np.int64)
        nlev = offsets.shape[0] - 1
        for r in range(B):
            for k in range(n):
                winv[r, k] = k
            for l in range(nlev):
                best = -1
                bestval = 0
                for q in range(offsets[l], offsets[l + 1]):
                    v = hat[r, winv[r, pts[q]]]
                    if best < 0 or (v > bestval if descending else v < bestval):
                        best = q
                        bestval = v
                row = moves[best]
                for k in range(n):
                    tmp[k] = winv[r, row[k]]
                for k in range(n):
                    winv[r, k] = tmp[k]
        return winv

else:  # pragma: no cover
    rank_batch_numba = None
    phi_batch_numba = None


def rank_batch(X: np.ndarray, eps: np.ndarray) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    eps = np.ascontiguousarray(eps, dtype=np.float64)
    if USE_NUMBA:
        return rank_batch_numba(X, eps)
    return rank_batch_numpy(X, eps)


def phi_batch(hat, offsets, pts, moves, descending: bool) -> np.ndarray:
    hat = np.ascontiguousarray(hat, dtype=np.int64)
    if len(offsets) <= 1:
        return np.broadcast_to(np.arange(hat.shape[1], dtype=np.int64), hat.shape).copy()
    if USE_NUMBA:
        return phi_batch_numba(hat, offsets, pts, moves, bool(descending))
    return phi_batch_numpy(hat, offsets, pts, moves, descending)
