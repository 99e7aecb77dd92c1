# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops over bitmask-encoded subsets.

Mirrors :mod:`threshold_lab._pykernels` function for function; both must
return identical results (including tie-breaking in :func:`cover_dp`).
"""

import numpy as np

from libc.math cimport INFINITY, pow
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def intersection_sizes(minimal):
    cdef Py_ssize_t k = len(minimal)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << k
    cdef uint64_t[::1] ms = np.asarray(minimal, dtype=np.uint64).reshape(k)
    inter_arr = np.zeros(size, dtype=np.uint64)
    out_arr = np.zeros(size, dtype=np.int32)
    cdef uint64_t[::1] inter = inter_arr
    cdef int32_t[::1] out = out_arr
    cdef uint64_t M, low, rest
    cdef int j
    with nogil:
        for M in range(1, <uint64_t>size):
            low = M & (~M + 1)
            j = __builtin_ctzll(low)
            rest = M ^ low
            if rest == 0:
                inter[M] = ms[j]
            else:
                inter[M] = inter[rest] & ms[j]
            out[M] = __builtin_popcountll(inter[M])
    return out_arr


def cover_dp(sizes, double p):
    """Minimum of sum(p ** sizes[M]) over partitions of the full index set."""
    cdef const int32_t[::1] sz = np.ascontiguousarray(sizes, dtype=np.int32)
    cdef Py_ssize_t size = sz.shape[0]
    cdef double[64] w
    cdef int s
    for s in range(64):
        w[s] = pow(p, s)
    cost_arr = np.zeros(size, dtype=np.float64)
    choice_arr = np.zeros(size, dtype=np.uint64)
    cdef double[::1] cost = cost_arr
    cdef uint64_t[::1] choice = choice_arr
    cdef uint64_t U, low, rest, sub, M, bm
    cdef double best, c
    with nogil:
        for U in range(1, <uint64_t>size):
            low = U & (~U + 1)
            rest = U ^ low
            best = INFINITY
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
    cdef uint64_t full = <uint64_t>(size - 1)
    U = full
    while U:
        groups.append(int(choice[U]))
        U ^= choice[U]
    return float(cost[full]), groups


def upset_indicator(minimal, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    ind_arr = np.zeros(size, dtype=np.uint8)
    cdef uint8_t[::1] ind = ind_arr
    cdef uint64_t m
    for m in minimal:
        ind[m] = 1
    cdef int i
    cdef Py_ssize_t half, base, j
    with nogil:
        for i in range(n):
            # blocks of 2^(i+1): upper half gains the lower half
            half = (<Py_ssize_t>1) << i
            base = 0
            while base < size:
                for j in range(half):
                    ind[base + half + j] |= ind[base + j]
                base += 2 * half
    return ind_arr


def indicator_profile(indicator, int n):
    cdef const uint8_t[::1] ind = np.ascontiguousarray(indicator, dtype=np.uint8)
    counts_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef uint64_t mask
    with nogil:
        for mask in range(<uint64_t>ind.shape[0]):
            if ind[mask]:
                counts[__builtin_popcountll(mask)] += 1
    return counts_arr


def minimal_masks(masks):
    cdef list ordered = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    cdef Py_ssize_t total = len(ordered)
    cdef uint64_t[::1] cand = np.asarray(ordered, dtype=np.uint64).reshape(total)
    kept_arr = np.zeros(total, dtype=np.uint64)
    cdef uint64_t[::1] kept = kept_arr
    cdef Py_ssize_t nkept = 0, a, b
    cdef uint64_t s
    cdef bint dominated
    with nogil:
        for a in range(total):
            s = cand[a]
            dominated = False
            for b in range(nkept):
                if kept[b] & s == kept[b]:
                    dominated = True
                    break
            if not dominated:
                kept[nkept] = s
                nkept += 1
    return [int(kept[b]) for b in range(nkept)]
