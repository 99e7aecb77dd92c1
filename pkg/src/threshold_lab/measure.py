"""Exact product-measure evaluation.

``mu_p(F)`` depends on ``F`` only through how many members it has of each
cardinality, so every measure here is evaluated from integer counts
``N_k`` as ``sum_k N_k p^k (1-p)^(n-k)``. All terms are nonnegative, and
scalar sums use :func:`math.fsum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    EndpointError,
    NotSubfamilyError,
    NullEventError,
    ThresholdLabError,
    TrivialFamilyError,
)
from .family import SetFamily, SubsetMask, UpperSetFamily, as_upper, up_closure

Family = Union[SetFamily, UpperSetFamily]

FRACTION_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class CardinalityProfile:
    n: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != self.n + 1:
            raise ThresholdLabError("profile needs one count per cardinality 0..n")
        for k, c in enumerate(self.counts):
            if not 0 <= c <= math.comb(self.n, k):
                raise ThresholdLabError(f"N_{k}={c} out of range")

    @property
    def size(self) -> int:
        return sum(self.counts)

    def evaluate(self, p: float) -> float:
        q = 1.0 - p
        return math.fsum(c * p**k * q ** (self.n - k) for k, c in enumerate(self.counts) if c)

    def evaluate_many(self, ps: np.ndarray) -> np.ndarray:
        ps = np.asarray(ps, dtype=float)
        qs = 1.0 - ps
        terms = [c * ps**k * qs ** (self.n - k) for k, c in enumerate(self.counts) if c]
        if not terms:
            return np.zeros_like(ps)
        # pairwise summation over nonnegative terms
        return np.sum(np.stack(terms), axis=0)


def profile(F: Family) -> CardinalityProfile:
    if isinstance(F, UpperSetFamily):
        return CardinalityProfile(F.ground.n, F.counts)
    counts = [0] * (F.ground.n + 1)
    for m in F.masks:
        counts[m.bit_count()] += 1
    return CardinalityProfile(F.ground.n, tuple(counts))


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ThresholdLabError(f"probability {p} outside [0, 1]")


def _explicit(F: Family) -> SetFamily:
    return F.family if isinstance(F, UpperSetFamily) else F


def _check_nested(A: Family, B: Family) -> None:
    a, b = _explicit(A), _explicit(B)
    if not a.issubset(b):
        raise NotSubfamilyError("A is not contained in B")


def mu_subset(S: SubsetMask, p: float) -> float:
    _check_prob(p)
    k = len(S)
    return p**k * (1.0 - p) ** (S.ground.n - k)


def mu_family(F: Family, p: float) -> float:
    _check_prob(p)
    return profile(F).evaluate(p)


def conditional(A: Family, B: Family, p: float) -> float:
    """P(X_p in A | X_p in B) for A contained in B."""
    _check_nested(A, B)
    mb = mu_family(B, p)
    if mb <= 0.0:
        raise NullEventError("conditioning on null event")
    return mu_family(A, p) / mb


def r_ratio(A: Family, B: Family, p: float) -> float:
    """``P(X_p in A | X_p in <A>) / P(X_p in B)``.

    Undefined at ``p = 0`` and ``p = 1`` where it can be 0/0; callers needing
    the one-sided limits evaluate at ``delta`` or ``1 - delta``.
    """
    if not 0.0 < p < 1.0:
        raise EndpointError("endpoint: use one-sided limit evaluation")
    a = _explicit(A)
    if not a.masks:
        raise ThresholdLabError("A must be nonempty")
    _check_nested(A, B)
    mu_a = profile(a).evaluate(p)
    mu_up = profile(up_closure(a)).evaluate(p)
    return mu_a / mu_up / mu_family(B, p)


def p_critical(F: Family, tol: float = 1e-12, max_iter: int = 200) -> float:
    """The unique p with ``mu_p(F) = 1/2``, by bisection on [0, 1]."""
    upper = F if isinstance(F, UpperSetFamily) else as_upper(F)
    if upper.is_trivial:
        raise TrivialFamilyError("no critical probability: trivial upper set")
    if tol <= 0:
        raise ThresholdLabError("tol must be positive")
    prof = profile(upper)
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if prof.evaluate(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def verify_fraction_identity(A: Family, B: Family, p: float) -> bool:
    """Check ``P(<A>) = P(A|B) P(B) / P(A|<A>)`` at ``p``."""
    _check_prob(p)
    a = _explicit(A)
    _check_nested(A, B)
    mu_a = profile(a).evaluate(p)
    if mu_a == 0.0:
        raise NullEventError("P(X in A) = 0: identity hypothesis violated")
    up = up_closure(a)
    mu_up = profile(up).evaluate(p)
    mu_b = mu_family(B, p)
    rhs = (mu_a / mu_b) * mu_b / (mu_a / mu_up)
    return abs(mu_up - rhs) <= FRACTION_IDENTITY_TOL
