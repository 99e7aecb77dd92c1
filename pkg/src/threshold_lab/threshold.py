"""Minimum-cost covers and the expectation threshold.

A family ``G`` covers the upper set ``F`` when every member of ``F`` contains
some member of ``G``; its cost at ``p`` is ``sum(p ** |S| for S in G)``.

Reduction used by the exact solver. Since ``F`` is up-closed, ``G`` covers
``F`` iff every minimal element ``m`` of ``F`` contains a member of ``G``. Fix
an optimal ``G`` and assign each ``m`` to one member ``S`` below it; the
elements assigned to ``S`` form a group ``M`` with ``S`` contained in
``∩M``. Replacing ``S`` by ``∩M`` keeps coverage and cannot raise the cost
(``p <= 1``). So the minimum equals the minimum over set partitions of the
minimal elements of ``sum_groups p ** |∩M|``, computed by a DP over subsets
of the minimal elements (``3^k`` transitions for ``k`` minimal elements).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels
from .errors import CoverCapError, ThresholdLabError, TrivialFamilyError
from .family import SetFamily, UpperSetFamily, as_upper, family_to_json

#: Largest number of minimal elements handled by the exact DP.
MAX_EXACT_MINIMAL = 16


@dataclass(frozen=True)
class Cover:
    target: UpperSetFamily
    members: SetFamily

    def cost(self, p: float) -> float:
        return math.fsum(p ** m.bit_count() for m in self.members.masks)

    def is_valid(self) -> bool:
        """Independent subset check of the covering condition."""
        return all(
            any(s & m == s for s in self.members.masks) for m in self.target.minimal_masks
        )

    def to_json(self, p: float | None = None) -> dict:
        out = family_to_json(self.members)
        if p is not None:
            out["cost_at_q"] = self.cost(p)
        return out


def _upper(F: Union[UpperSetFamily, SetFamily]) -> UpperSetFamily:
    upper = F if isinstance(F, UpperSetFamily) else as_upper(F)
    if upper.is_trivial:
        raise TrivialFamilyError("trivial upper set has no expectation threshold")
    return upper


def _check_open(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ThresholdLabError(f"p={p} must lie in (0, 1)")


class _CoverProblem:
    """Intersection-size table for one upper set, reused across many ``p``."""

    def __init__(self, upper: UpperSetFamily, cap: int):
        k = len(upper.minimal_masks)
        if k > cap:
            raise CoverCapError(
                f"{k} minimal elements exceed the exact-solver cap {cap}; "
                "use greedy_cover_cost for an upper bound"
            )
        self.upper = upper
        self.minimal = list(upper.minimal_masks)
        self.sizes = kernels.intersection_sizes(self.minimal)

    def cost(self, p: float) -> float:
        return kernels.cover_dp(self.sizes, p)[0]

    def solve(self, p: float) -> tuple[float, Cover]:
        cost, groups = kernels.cover_dp(self.sizes, p)
        return cost, self._cover(groups)

    def _cover(self, groups: list[int]) -> Cover:
        members = []
        for g in groups:
            inter = -1
            for j, m in enumerate(self.minimal):
                if g >> j & 1:
                    inter &= m
            members.append(inter)
        return Cover(self.upper, SetFamily(self.upper.ground, tuple(members)))


def min_cover_cost(
    F: UpperSetFamily, p: float, cap: int = MAX_EXACT_MINIMAL
) -> tuple[float, Cover]:
    """Exact minimum cover cost at ``p`` with an optimal certificate."""
    _check_open(p)
    return _CoverProblem(_upper(F), cap).solve(p)


def is_p_small(F: UpperSetFamily, p: float, cap: int = MAX_EXACT_MINIMAL) -> bool:
    return min_cover_cost(F, p, cap)[0] <= 0.5


def q_threshold(
    F: UpperSetFamily,
    tol: float = 1e-12,
    cap: int = MAX_EXACT_MINIMAL,
    max_iter: int = 200,
) -> tuple[float, Cover]:
    """Largest ``p`` at which ``F`` is p-small, with the optimal cover there.

    The minimum cost is continuous and nondecreasing in ``p``, equals 0 at
    ``p = 0`` and is at least 1 at ``p = 1``, so bisection applies. A cost of
    exactly 1/2 counts as small.
    """
    if tol <= 0:
        raise ThresholdLabError("tol must be positive")
    problem = _CoverProblem(_upper(F), cap)
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if problem.cost(mid) <= 0.5:
            lo = mid
        else:
            hi = mid
    return lo, problem.solve(lo)[1]


def greedy_cover_cost(F: UpperSetFamily, p: float) -> tuple[float, Cover]:
    """Upper bound on the minimum cover cost by greedy pairwise merging.

    Starts from one group per minimal element and repeatedly merges the two
    groups whose union, covered by its common intersection, saves the most.
    Certifies p-smallness only; never proves that ``F`` is not p-small.
    """
    _check_open(p)
    upper = _upper(F)
    groups = list(upper.minimal_masks)
    while len(groups) > 1:
        weights = np.array([p ** g.bit_count() for g in groups])
        best, pair = 0.0, None
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                saving = weights[i] + weights[j] - p ** (groups[i] & groups[j]).bit_count()
                if saving > best:
                    best, pair = saving, (i, j)
        if pair is None:
            break
        i, j = pair
        merged = groups[i] & groups[j]
        groups = [g for t, g in enumerate(groups) if t not in pair] + [merged]
    cover = Cover(upper, SetFamily(upper.ground, tuple(groups)))
    return cover.cost(p), cover
