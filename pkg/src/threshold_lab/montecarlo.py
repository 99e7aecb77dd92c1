"""Monte Carlo estimates of product-measure probabilities.

Randomness comes from a Philox counter-based generator keyed by the seed.
Chunk ``c`` of a run is drawn from the stream jumped ``c`` times, so chunks
are disjoint counter ranges and results depend only on ``(seed, N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import norm

from .errors import AcceptanceStarvationError, ThresholdLabError
from .family import GroundSet, SetFamily, SubsetMask, UpperSetFamily

CHUNK = 65_536
WILSON_BELOW = 30

Membership = Union[SetFamily, UpperSetFamily, Callable[[SubsetMask], bool]]


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    half_width: float
    n_samples: int
    confidence: float
    seed: int
    lo: float
    hi: float
    method: str
    draws: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.estimate <= 1.0 or self.half_width < 0 or self.n_samples < 1:
            raise ThresholdLabError("invalid Monte Carlo estimate")

    @property
    def acceptance_rate(self) -> Optional[float]:
        return None if self.draws is None else self.n_samples / self.draws

    def covers(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def to_json(self) -> dict:
        out = {
            "estimate": self.estimate,
            "half_width": self.half_width,
            "ci": [self.lo, self.hi],
            "method": self.method,
            "n_samples": self.n_samples,
            "confidence": self.confidence,
            "seed": self.seed,
        }
        if self.draws is not None:
            out["draws"] = self.draws
            out["acceptance_rate"] = self.acceptance_rate
        return out


def make_rng(seed: int, chunk: int = 0) -> np.random.Generator:
    bitgen = np.random.Philox(key=seed)
    if chunk:
        bitgen = bitgen.jumped(chunk)
    return np.random.Generator(bitgen)


def sample_masks(p: float, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent subsets of an ``n``-set as uint64 bitmasks."""
    bits = rng.random((size, n)) < p
    return (bits.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)


def sample_subset(p: float, n: int | GroundSet, rng: np.random.Generator) -> SubsetMask:
    ground = n if isinstance(n, GroundSet) else GroundSet(tuple(f"x{i}" for i in range(n)))
    return SubsetMask(ground, int(sample_masks(p, ground.n, 1, rng)[0]))


def _membership(F: Membership, ground: Optional[GroundSet]) -> tuple[Callable[[np.ndarray], np.ndarray], int]:
    if isinstance(F, UpperSetFamily):
        minimal = np.array(F.minimal_masks, dtype=np.uint64)

        def member(masks: np.ndarray) -> np.ndarray:
            hit = np.zeros(masks.shape, dtype=bool)
            for m in minimal:
                hit |= (masks & m) == m
            return hit

        return member, F.ground.n
    if isinstance(F, SetFamily):
        table = np.array(F.masks, dtype=np.uint64)
        return (lambda masks: np.isin(masks, table)), F.ground.n
    if ground is None:
        raise ThresholdLabError("a ground set is required for predicate membership")
    return (
        lambda masks: np.fromiter((bool(F(SubsetMask(ground, int(m)))) for m in masks), bool, len(masks)),
        ground.n,
    )


def binomial_interval(k: int, N: int, confidence: float) -> tuple[float, float, str]:
    """Normal-approximation interval, or Wilson when either count is below 30."""
    z = float(norm.ppf(0.5 + confidence / 2.0))
    phat = k / N
    if min(k, N - k) < WILSON_BELOW:
        denom = 1.0 + z * z / N
        centre = (phat + z * z / (2 * N)) / denom
        spread = z * math.sqrt(phat * (1 - phat) / N + z * z / (4 * N * N)) / denom
        return max(0.0, centre - spread), min(1.0, centre + spread), "wilson"
    hw = z * math.sqrt(phat * (1 - phat) / N)
    return max(0.0, phat - hw), min(1.0, phat + hw), "normal"


def _estimate(k: int, N: int, confidence: float, seed: int, draws: Optional[int] = None) -> McEstimate:
    lo, hi, method = binomial_interval(k, N, confidence)
    est = k / N
    return McEstimate(est, max(est - lo, hi - est), N, confidence, seed, lo, hi, method, draws)


def estimate_family(
    F: Membership,
    p: float,
    N: int,
    seed: int,
    confidence: float = 0.99,
    ground: Optional[GroundSet] = None,
) -> McEstimate:
    """Estimate ``P(X_p in F)``; ``F`` may be a family or a predicate."""
    if N < 100:
        raise ThresholdLabError("at least 100 samples are required")
    member, n = _membership(F, ground)
    hits = 0
    done, chunk = 0, 0
    while done < N:
        size = min(CHUNK, N - done)
        hits += int(member(sample_masks(p, n, size, make_rng(seed, chunk))).sum())
        done += size
        chunk += 1
    return _estimate(hits, N, confidence, seed)


def estimate_conditional(
    A: Membership,
    B: Membership,
    p: float,
    N_accepted: int,
    seed: int,
    confidence: float = 0.99,
    max_draws: int = 10_000_000,
    ground: Optional[GroundSet] = None,
) -> McEstimate:
    """Rejection-sampling estimate of ``P(X_p in A | X_p in B)``."""
    if N_accepted < 1:
        raise ThresholdLabError("N_accepted must be positive")
    in_a, n = _membership(A, ground)
    in_b, n_b = _membership(B, ground)
    if n != n_b:
        raise ThresholdLabError("A and B live on different ground sets")
    accepted = hits = draws = 0
    chunk = 0
    while accepted < N_accepted:
        if draws >= max_draws:
            rate = accepted / draws
            raise AcceptanceStarvationError(
                f"only {accepted} of {N_accepted} samples accepted in {draws} draws "
                f"(observed acceptance rate {rate:.3g})"
            )
        size = min(CHUNK, max_draws - draws)
        masks = sample_masks(p, n, size, make_rng(seed, chunk))
        chunk += 1
        kept = masks[in_b(masks)]
        need = N_accepted - accepted
        if kept.size >= need:
            # stop at the draw that completes the quota
            cut = np.flatnonzero(in_b(masks))[need - 1] + 1
            draws += int(cut)
            kept = kept[:need]
        else:
            draws += size
        hits += int(in_a(kept).sum())
        accepted += int(kept.size)
    return _estimate(hits, accepted, confidence, seed, draws)
