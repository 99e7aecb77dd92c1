"""Ground sets, subsets and set families encoded as bitmasks.

A subset of a ground set with labels ``(x0, x1, ...)`` is the integer whose
bit ``i`` is set iff ``xi`` belongs to it. Families keep their masks sorted by
``(cardinality, mask)`` so equal families compare and serialize identically.

Upper sets are held implicitly by their minimal elements; membership is a
subset test. The full member list is only materialized on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    EmptyGeneratorError,
    EnumerationCapError,
    GroundMismatchError,
    NotSubfamilyError,
    NotUpperSetError,
    ThresholdLabError,
)

#: Largest ground set for which operations enumerate all of 2^X.
ENUMERATION_CAP = 24
#: Largest ground set representable at all (masks must fit an int64).
MAX_GROUND = 62


def check_enumerable(n: int, cap: int | None = None) -> None:
    cap = ENUMERATION_CAP if cap is None else cap
    if n > cap:
        raise EnumerationCapError(
            f"ground set of size {n} exceeds the enumeration cap {cap}; "
            "use the Monte Carlo estimators (threshold_lab.montecarlo) instead"
        )


def _sort_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ThresholdLabError("ground set must have at least one element")
        if len(set(labels)) != len(labels):
            raise ThresholdLabError(f"ground labels are not distinct: {labels}")
        if len(labels) > MAX_GROUND:
            raise ThresholdLabError(f"ground set larger than {MAX_GROUND} elements")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise ThresholdLabError(f"unknown ground element {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels_of(self, mask: int) -> list[str]:
        return [x for i, x in enumerate(self.labels) if mask >> i & 1]

    def subset(self, labels: Iterable[str]) -> "SubsetMask":
        return SubsetMask(self, self.mask(labels))


@dataclass(frozen=True)
class SubsetMask:
    ground: GroundSet
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits > self.ground.full_mask:
            raise ThresholdLabError(f"mask {self.bits} outside ground set")

    @property
    def members(self) -> tuple[bool, ...]:
        """Per-element indicator, in ground order."""
        return tuple(bool(self.bits >> i & 1) for i in range(self.ground.n))

    @property
    def labels(self) -> list[str]:
        return self.ground.labels_of(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & other.bits == self.bits

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


@dataclass(frozen=True)
class SetFamily:
    """A finite collection of distinct subsets of one ground set."""

    ground: GroundSet
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        full = self.ground.full_mask
        masks = sorted(set(int(m) for m in self.masks), key=_sort_key)
        for m in masks:
            if m < 0 or m > full:
                raise ThresholdLabError(f"mask {m} outside ground set")
        object.__setattr__(self, "masks", tuple(masks))

    @classmethod
    def from_labels(cls, ground: GroundSet, sets: Iterable[Iterable[str]]) -> "SetFamily":
        return cls(ground, tuple(ground.mask(s) for s in sets))

    @classmethod
    def power_set(cls, ground: GroundSet) -> "SetFamily":
        check_enumerable(ground.n)
        return cls(ground, tuple(range(1 << ground.n)))

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[SubsetMask]:
        return (SubsetMask(self.ground, m) for m in self.masks)

    @cached_property
    def _mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def __contains__(self, item: int | SubsetMask) -> bool:
        if isinstance(item, SubsetMask):
            item = item.bits
        return item in self._mask_set

    @property
    def sets(self) -> tuple[SubsetMask, ...]:
        return tuple(self)

    def issubset(self, other: "SetFamily") -> bool:
        _same_ground(self, other)
        return self._mask_set <= other._mask_set

    def to_label_lists(self) -> list[list[str]]:
        return [self.ground.labels_of(m) for m in self.masks]

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(s) + "}" for s in self.to_label_lists())
        return f"SetFamily([{body}])"


def _same_ground(a, b) -> None:
    if a.ground != b.ground:
        raise GroundMismatchError("families live on different ground sets")


@dataclass(frozen=True)
class UpperSetFamily:
    """An up-closed family stored by its minimal elements.

    ``minimal_masks`` must be an antichain; use :func:`up_closure` to build one
    from arbitrary generators.
    """

    ground: GroundSet
    minimal_masks: tuple[int, ...]

    def __post_init__(self) -> None:
        masks = sorted(set(self.minimal_masks), key=_sort_key)
        for i, a in enumerate(masks):
            for b in masks[i + 1 :]:
                if a & b == a:
                    raise ThresholdLabError("minimal elements must form an antichain")
        object.__setattr__(self, "minimal_masks", tuple(masks))

    def __contains__(self, item: int | SubsetMask) -> bool:
        if isinstance(item, SubsetMask):
            item = item.bits
        return any(m & item == m for m in self.minimal_masks)

    @property
    def minimal(self) -> SetFamily:
        return SetFamily(self.ground, self.minimal_masks)

    @property
    def ell0(self) -> int:
        return max((m.bit_count() for m in self.minimal_masks), default=0)

    @property
    def ell(self) -> int:
        return max(self.ell0, 2)

    @property
    def is_trivial(self) -> bool:
        """True for the empty family and for all of 2^X."""
        return not self.minimal_masks or self.minimal_masks == (0,)

    @cached_property
    def indicator(self) -> np.ndarray:
        """Membership flags for every mask in ``range(2**n)`` (read-only)."""
        check_enumerable(self.ground.n)
        ind = kernels.upset_indicator(list(self.minimal_masks), self.ground.n)
        ind.setflags(write=False)
        return ind

    @cached_property
    def counts(self) -> tuple[int, ...]:
        """Number of members of each cardinality 0..n."""
        prof = kernels.indicator_profile(self.indicator, self.ground.n)
        return tuple(int(c) for c in prof)

    @cached_property
    def family(self) -> SetFamily:
        return SetFamily(self.ground, tuple(int(m) for m in np.flatnonzero(self.indicator)))

    def __len__(self) -> int:
        return sum(self.counts)

    def __repr__(self) -> str:
        gens = ", ".join("{" + ",".join(self.ground.labels_of(m)) + "}" for m in self.minimal_masks)
        return f"UpperSetFamily(<{gens}>)"


def up_closure(family: SetFamily) -> UpperSetFamily:
    """The upper set generated by ``family``: every superset of a member."""
    if isinstance(family, UpperSetFamily):
        return family
    if not family.masks:
        raise EmptyGeneratorError("empty generator")
    return UpperSetFamily(family.ground, tuple(kernels.minimal_masks(list(family.masks))))


def minimal_elements(upper: UpperSetFamily) -> SetFamily:
    return upper.minimal


def ell_stats(upper: UpperSetFamily) -> tuple[int, int]:
    return upper.ell0, upper.ell


def as_upper(family: SetFamily) -> UpperSetFamily:
    """View an explicit family as an :class:`UpperSetFamily`, checking closure."""
    upper = up_closure(family)
    if len(upper) != len(family):
        raise NotUpperSetError("family is not closed under supersets")
    return upper


def is_upper_in(sub: SetFamily, ambient: SetFamily) -> bool:
    """Whether ``sub`` is an upper set of ``ambient`` ordered by inclusion."""
    _same_ground(sub, ambient)
    if not sub.issubset(ambient):
        raise NotSubfamilyError("sub is not contained in the ambient family")
    inside = sub._mask_set
    outside = [t for t in ambient.masks if t not in inside]
    return not any(s & t == s for s in sub.masks for t in outside)


def family_from_json(obj: dict) -> SetFamily:
    try:
        ground = GroundSet(tuple(obj["ground"]))
        sets = obj["sets"]
    except (KeyError, TypeError) as exc:
        raise ThresholdLabError(f"malformed family JSON: missing {exc}") from None
    return SetFamily.from_labels(ground, sets)


def family_to_json(family: SetFamily | UpperSetFamily) -> dict:
    if isinstance(family, UpperSetFamily):
        family = family.family
    return {"ground": list(family.ground.labels), "sets": family.to_label_lists()}


def masks_of(family: SetFamily | UpperSetFamily | Sequence[int]) -> tuple[int, ...]:
    if isinstance(family, UpperSetFamily):
        return family.family.masks
    if isinstance(family, SetFamily):
        return family.masks
    return tuple(family)
