"""Instance generators: the worked three-element example, subnetwork posets
of weighted graphs, and seeded random families and posets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EnumerationCapError, PosetError, ThresholdLabError
from .family import ENUMERATION_CAP, GroundSet, SetFamily, UpperSetFamily, check_enumerable, up_closure
from .poset import MAX_POSET_ELEMENTS, FinitePoset, PosetEmbedding, PosetUpperSet, transitive_closure


class WorkedExample(NamedTuple):
    X: GroundSet
    A: SetFamily
    Aprime: SetFamily
    B: SetFamily


def paper_example(b_variant: str = "formula") -> WorkedExample:
    """The families on ``X = {a, b, c}``.

    ``b_variant="formula"`` gives ``B = {∅, {a}, {c}, {a,c}}``, the only
    reading consistent with both published ratio formulas. ``"diagram"`` adds
    ``{b}`` as the shaded Hasse diagram suggests.
    """
    X = GroundSet(("a", "b", "c"))
    A = SetFamily.from_labels(X, [["a"], ["c"]])
    Aprime = SetFamily.from_labels(X, [["a"], ["c"], ["a", "c"]])
    b_sets = [[], ["a"], ["c"], ["a", "c"]]
    if b_variant == "diagram":
        b_sets.append(["b"])
    elif b_variant != "formula":
        raise ThresholdLabError(f"b_variant must be 'formula' or 'diagram', got {b_variant!r}")
    return WorkedExample(X, A, Aprime, SetFamily.from_labels(X, b_sets))


@dataclass(frozen=True)
class WeightedGraphSpec:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    weights: tuple[str, ...]

    def __post_init__(self) -> None:
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple((str(u), str(v)) for u, v in self.edges)
        weights = tuple(str(w) for w in self.weights)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)
        if len(set(vertices)) != len(vertices):
            raise ThresholdLabError("vertex labels are not distinct")
        if not weights or len(set(weights)) != len(weights):
            raise ThresholdLabError("weight set must be nonempty and distinct")
        seen = set()
        for u, v in edges:
            if u not in vertices or v not in vertices:
                raise ThresholdLabError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise ThresholdLabError(f"loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ThresholdLabError(f"duplicate edge ({u}, {v})")
            seen.add(key)
        if not edges:
            raise ThresholdLabError("graph needs at least one edge")

    @classmethod
    def from_json(cls, obj: dict) -> "WeightedGraphSpec":
        try:
            return cls(tuple(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]), tuple(obj["weights"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ThresholdLabError):
                raise
            raise ThresholdLabError(f"malformed graph JSON: {exc}") from None

    @property
    def poset_size(self) -> int:
        return (len(self.weights) + 1) ** len(self.edges)


def _edge_label(edge: tuple[str, str]) -> str:
    return f"{edge[0]}-{edge[1]}"


def network_poset(spec: WeightedGraphSpec) -> tuple[FinitePoset, PosetEmbedding]:
    """Partial edge weightings of ``spec`` ordered by containment of graphs.

    Each element assigns every edge either nothing or one weight. It maps to
    its graph ``{(e, w(e))}`` inside ``E x R``, so ``|P| = (|R|+1)^|E|``.
    """
    n_e, n_r = len(spec.edges), len(spec.weights)
    if n_e * math.log2(n_r + 1) > ENUMERATION_CAP or spec.poset_size > MAX_POSET_ELEMENTS:
        raise EnumerationCapError(
            f"subnetwork poset would have {spec.poset_size} elements; "
            "use Monte Carlo mode for graphs this large"
        )
    labels = [f"{_edge_label(e)}:{r}" for e in spec.edges for r in spec.weights]
    ground = GroundSet(tuple(labels))

    def pairs(choice: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
        return tuple((e, w - 1) for e, w in enumerate(choice) if w)

    choices = sorted(itertools.product(range(n_r + 1), repeat=n_e), key=pairs)
    elements, images = [], []
    for c in choices:
        ps = pairs(c)
        names = ",".join(f"{_edge_label(spec.edges[e])}:{spec.weights[r]}" for e, r in ps)
        elements.append("{" + names + "}")
        images.append(sum(1 << (e * n_r + r) for e, r in ps))
    imgs = np.array(images, dtype=np.uint64)
    leq = (imgs[:, None] & imgs[None, :]) == imgs[:, None]
    poset = FinitePoset(tuple(elements), leq)
    return poset, PosetEmbedding(poset, ground, tuple(images))


def target_upper_set(P: FinitePoset, targets: Sequence[str]) -> PosetUpperSet:
    for t in targets:
        P.index(t)
    return PosetUpperSet(P, P.up_closure(targets))


def random_upper_set(
    n: int,
    density: float,
    seed: int,
    max_minimal: int | None = None,
    max_tries: int = 10_000,
) -> UpperSetFamily:
    """Up-closure of a Bernoulli(``density``) sample of nonempty subsets.

    Samples that produce an empty family, or more than ``max_minimal``
    minimal elements, are redrawn from the same seeded stream.
    """
    check_enumerable(n)
    if not 0.0 < density < 1.0:
        raise ThresholdLabError("density must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    ground = GroundSet(tuple(f"x{i}" for i in range(n)))
    candidates = np.arange(1, 1 << n)
    for _ in range(max_tries):
        chosen = candidates[rng.random(candidates.size) < density]
        if chosen.size == 0:
            continue
        upper = up_closure(SetFamily(ground, tuple(int(m) for m in chosen)))
        if max_minimal is not None and len(upper.minimal_masks) > max_minimal:
            continue
        return upper
    raise ThresholdLabError("could not draw a family meeting the constraints")


def random_poset(m: int, edge_prob: float, seed: int) -> FinitePoset:
    """Transitive closure of a random DAG on ``m`` shuffled elements."""
    if not 1 <= m <= 24:
        raise PosetError("random posets support 1 <= m <= 24 elements")
    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    rel = np.zeros((m, m), dtype=bool)
    upper = np.triu(rng.random((m, m)) < edge_prob, k=1)
    rel[np.ix_(order, order)] = upper
    return FinitePoset(tuple(f"v{i}" for i in range(m)), transitive_closure(rel))
