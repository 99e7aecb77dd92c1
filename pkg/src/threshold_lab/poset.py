"""Finite posets, their upper sets, and injections into a power set.

An injection ``f: P -> 2^X`` turns the product measure into a distribution on
``P``: ``Y_p`` takes value ``x`` with probability ``mu_p(f(x)) / mu_p(f(P))``.
Every subset of ``P`` is an event (``f`` is injective), and
``P(Y_p in S) = P(X_p in f(S) | X_p in f(P))``.

Only injectivity is required of ``f``; :func:`principal_downset_embedding`
additionally gives an order embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .bounds import DEFAULT_GRID, ConditionalProblem, ConditionalReport
from .errors import AntisymmetryError, EmbeddingError, NotUpperSetError, NullEventError, PosetError
from .family import GroundSet, SetFamily, SubsetMask
from .measure import conditional, mu_subset

#: Largest poset held with an explicit order matrix.
MAX_POSET_ELEMENTS = 4096


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean relation (Warshall)."""
    closed = np.array(rel, dtype=bool, copy=True)
    np.fill_diagonal(closed, True)
    for k in range(closed.shape[0]):
        closed |= np.outer(closed[:, k], closed[k, :])
    return closed


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """``leq[i, j]`` is True iff ``elements[i] <= elements[j]``."""

    elements: tuple[str, ...]
    leq: np.ndarray

    def __post_init__(self) -> None:
        elements = tuple(str(x) for x in self.elements)
        object.__setattr__(self, "elements", elements)
        m = len(elements)
        if m == 0:
            raise PosetError("poset must be nonempty")
        if m > MAX_POSET_ELEMENTS:
            raise PosetError(f"{m} elements exceed the explicit poset cap {MAX_POSET_ELEMENTS}")
        if len(set(elements)) != m:
            raise PosetError("poset element labels are not distinct")
        leq = np.array(self.leq, dtype=bool)
        if leq.shape != (m, m):
            raise PosetError(f"order matrix has shape {leq.shape}, expected {(m, m)}")
        if not leq.diagonal().all():
            raise PosetError("order is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = (int(v) for v in np.argwhere(both)[0])
            raise AntisymmetryError(
                f"antisymmetry violated: {elements[i]} <= {elements[j]} and {elements[j]} <= {elements[i]}"
            )
        lf = leq.astype(np.float32)
        if ((lf @ lf > 0) & ~leq).any():
            raise PosetError("order is not transitive")
        leq.setflags(write=False)
        object.__setattr__(self, "leq", leq)

    @classmethod
    def from_relation(
        cls, elements: Sequence[str], pairs: Iterable[Sequence[str]], closure: str = "covers"
    ) -> "FinitePoset":
        """Build from ``(x, y)`` pairs meaning ``x <= y``.

        With ``closure="covers"`` the reflexive-transitive closure is taken;
        with ``closure="full"`` the pairs must already be transitive
        (reflexive pairs are added either way).
        """
        elements = tuple(elements)
        pos = {x: i for i, x in enumerate(elements)}
        rel = np.zeros((len(elements), len(elements)), dtype=bool)
        for pair in pairs:
            x, y = pair
            try:
                rel[pos[x], pos[y]] = True
            except KeyError as exc:
                raise PosetError(f"relation mentions unknown element {exc}") from None
        if closure == "covers":
            rel = transitive_closure(rel)
        elif closure == "full":
            np.fill_diagonal(rel, True)
        else:
            raise PosetError(f"closure must be 'covers' or 'full', got {closure!r}")
        return cls(elements, rel)

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePoset":
        try:
            return cls.from_relation(obj["elements"], obj.get("leq", []), obj.get("closure", "covers"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PosetError):
                raise
            raise PosetError(f"malformed poset JSON: {exc}") from None

    def to_json(self) -> dict:
        pairs = [
            [self.elements[i], self.elements[j]]
            for i, j in zip(*np.nonzero(self.covering_matrix()))
        ]
        return {"elements": list(self.elements), "leq": pairs, "closure": "covers"}

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise PosetError(f"unknown poset element {label!r}") from None

    def le(self, x: str, y: str) -> bool:
        return bool(self.leq[self.index(x), self.index(y)])

    def covering_matrix(self) -> np.ndarray:
        strict = self.leq.copy()
        np.fill_diagonal(strict, False)
        s = strict.astype(np.float32)
        return strict & ~(s @ s > 0)

    def maximal(self) -> list[str]:
        strict_above = self.leq.sum(axis=1) > 1
        return [x for x, up in zip(self.elements, strict_above) if not up]

    def minimal(self) -> list[str]:
        strict_below = self.leq.sum(axis=0) > 1
        return [x for x, down in zip(self.elements, strict_below) if not down]

    def up_closure(self, members: Iterable[str]) -> frozenset[str]:
        idx = [self.index(x) for x in members]
        if not idx:
            return frozenset()
        reach = self.leq[idx].any(axis=0)
        return frozenset(x for x, r in zip(self.elements, reach) if r)

    def is_upper(self, members: Iterable[str]) -> bool:
        members = frozenset(members)
        return self.up_closure(members) == members


@dataclass(frozen=True, eq=False)
class PosetUpperSet:
    poset: FinitePoset
    members: frozenset[str]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        for x in members:
            self.poset.index(x)
        if not self.poset.is_upper(members):
            raise NotUpperSetError("members are not closed upward in the poset")
        object.__setattr__(self, "members", members)

    def __contains__(self, x: str) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class PosetEmbedding:
    """An injection of ``poset`` into ``2^ground``; ``images`` follow poset order."""

    poset: FinitePoset
    ground: GroundSet
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(m) for m in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.poset):
            raise EmbeddingError("one image per poset element is required")
        full = self.ground.full_mask
        if any(m < 0 or m > full for m in images):
            raise EmbeddingError("image outside the ground set")
        if len(set(images)) != len(images):
            seen: dict[int, str] = {}
            for x, m in zip(self.poset.elements, images):
                if m in seen:
                    raise EmbeddingError(f"not injective: {seen[m]} and {x} share an image")
                seen[m] = x

    @classmethod
    def from_json(cls, poset: FinitePoset, obj: dict) -> "PosetEmbedding":
        try:
            mapping = obj["map"]
        except (KeyError, TypeError):
            raise EmbeddingError("embedding JSON needs a 'map' object") from None
        missing = [x for x in poset.elements if x not in mapping]
        if missing:
            raise EmbeddingError(f"no image given for {missing}")
        if "ground" in obj:
            ground = GroundSet(tuple(obj["ground"]))
        else:
            labels: dict[str, None] = {}
            for x in poset.elements:
                labels.update(dict.fromkeys(mapping[x]))
            ground = GroundSet(tuple(sorted(labels)) or ("_",))
        return cls(poset, ground, tuple(ground.mask(mapping[x]) for x in poset.elements))

    def to_json(self) -> dict:
        return {
            "ground": list(self.ground.labels),
            "map": {x: self.ground.labels_of(m) for x, m in zip(self.poset.elements, self.images)},
        }

    def image(self, x: str) -> SubsetMask:
        return SubsetMask(self.ground, self.images[self.poset.index(x)])

    def family(self, members: Optional[Iterable[str]] = None) -> SetFamily:
        """``f(S)`` as a set family; all of ``f(P)`` when ``members`` is None."""
        if members is None:
            return SetFamily(self.ground, self.images)
        return SetFamily(self.ground, tuple(self.images[self.poset.index(x)] for x in members))

    def is_order_embedding(self) -> bool:
        imgs = np.array(self.images, dtype=np.uint64)
        contained = (imgs[:, None] & imgs[None, :]) == imgs[:, None]
        return bool((contained == self.poset.leq).all())


def principal_downset_embedding(P: FinitePoset) -> PosetEmbedding:
    """``x -> {y : y <= x}`` into the power set of the elements of ``P``."""
    ground = GroundSet(P.elements)
    weights = 1 << np.arange(len(P), dtype=object)
    images = tuple(int(weights[P.leq[:, j]].sum()) for j in range(len(P)))
    return PosetEmbedding(P, ground, images)


@dataclass(frozen=True, eq=False)
class YpDistribution:
    poset: FinitePoset
    p: float
    weights: tuple[float, ...]

    def weight(self, x: str) -> float:
        return self.weights[self.poset.index(x)]

    def prob(self, members: Iterable[str]) -> float:
        return math.fsum(self.weights[self.poset.index(x)] for x in set(members))


def y_p_distribution(P: FinitePoset, f: PosetEmbedding, p: float) -> YpDistribution:
    if f.poset is not P:
        raise EmbeddingError("embedding belongs to a different poset")
    raw = [mu_subset(SubsetMask(f.ground, m), p) for m in f.images]
    total = math.fsum(raw)
    if total <= 0.0:
        raise NullEventError("mu_p(f(P)) = 0: Y_p is undefined")
    return YpDistribution(P, p, tuple(w / total for w in raw))


RV_CONVERSION_TOL = 1e-12


def verify_rv_conversion(P: FinitePoset, f: PosetEmbedding, S: Iterable[str], p: float) -> bool:
    S = list(S)
    left = y_p_distribution(P, f, p).prob(S)
    right = conditional(f.family(S), f.family(), p)
    return abs(left - right) <= RV_CONVERSION_TOL


def extension_pipeline(
    P: FinitePoset,
    U: PosetUpperSet,
    f: PosetEmbedding,
    K: float = 48.0,
    eps: Optional[float] = None,
    points: int = DEFAULT_GRID,
    tol: float = 1e-12,
) -> ConditionalReport:
    """Run the conditional machinery on ``A = f(U)``, ``B = f(P)``.

    When the gate ``K q log2(ell0) < 1`` holds, the report carries the
    epsilon floor and, for ``eps``, the admissible intervals together with an
    exact spot check of ``P(Y_p in U) > 1 - eps`` at each interval midpoint.
    """
    if U.poset is not P or f.poset is not P:
        raise PosetError("upper set and embedding must belong to the given poset")
    if not U.members:
        raise NotUpperSetError("upper set must be nonempty")
    problem = ConditionalProblem(f.family(U.members), f.family(), K, tol=tol)
    report = problem.report(eps, points)
    checks = []
    for lo, hi in report.intervals:
        mid = 0.5 * (lo + hi)
        prob = y_p_distribution(P, f, mid).prob(U.members)
        checks.append({"p": mid, "probability": prob, "passed": bool(prob > 1.0 - eps)})
    report.extra = {
        "poset_size": len(P),
        "upper_set_size": len(U),
        "ground_size": f.ground.n,
        "spot_checks": checks,
    }
    return report
