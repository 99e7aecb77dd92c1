"""Pure-Python counterparts of the compiled kernels in ``_kernels.pyx``.

Used when the extension is not built, or when ``THRESHOLD_LAB_PURE`` is set.
Results are identical to the compiled versions, tie-breaking included.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def intersection_sizes(minimal: Sequence[int]) -> np.ndarray:
    k = len(minimal)
    size = 1 << k
    inter = [0] * size
    out = np.zeros(size, dtype=np.int32)
    for M in range(1, size):
        low = M & -M
        j = low.bit_length() - 1
        rest = M ^ low
        inter[M] = minimal[j] if rest == 0 else inter[rest] & minimal[j]
        out[M] = inter[M].bit_count()
    return out


def cover_dp(sizes: np.ndarray, p: float) -> tuple[float, list[int]]:
    """Minimum of sum(p ** sizes[M]) over partitions of the full index set."""
    sz = [int(s) for s in sizes]
    size = len(sz)
    w = [p**s for s in range(64)]
    cost = [0.0] * size
    choice = [0] * size
    for U in range(1, size):
        low = U & -U
        rest = U ^ low
        best = float("inf")
        bm = 0
        sub = rest
        while True:
            M = sub | low
            c = w[sz[M]] + cost[U ^ M]
            if c < best:
                best = c
                bm = M
            if sub == 0:
                break
            sub = (sub - 1) & rest
        cost[U] = best
        choice[U] = bm
    groups = []
    U = size - 1
    while U:
        groups.append(choice[U])
        U ^= choice[U]
    return cost[size - 1], groups


def upset_indicator(minimal: Sequence[int], n: int) -> np.ndarray:
    ind = np.zeros(1 << n, dtype=np.uint8)
    for m in minimal:
        ind[m] = 1
    # view bit i as an axis: index = hi * 2^(i+1) + b * 2^i + lo
    for i in range(n):
        view = ind.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return ind


def indicator_profile(indicator: np.ndarray, n: int) -> np.ndarray:
    idx = np.flatnonzero(indicator).astype(np.uint64)
    return np.bincount(np.bitwise_count(idx), minlength=n + 1).astype(np.int64)


def minimal_masks(masks: Sequence[int]) -> list[int]:
    kept: list[int] = []
    for s in sorted(set(masks), key=lambda m: (m.bit_count(), m)):
        if not any(k & s == k for k in kept):
            kept.append(s)
    return kept
