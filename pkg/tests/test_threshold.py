import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fam
from oracles import brute_min_cover, brute_up_closure
from threshold_lab.errors import CoverCapError, TrivialFamilyError
from threshold_lab.family import GroundSet, SetFamily, up_closure
from threshold_lab.forge import random_upper_set
from threshold_lab.measure import p_critical
from threshold_lab.threshold import Cover, greedy_cover_cost, is_p_small, min_cover_cost, q_threshold


@pytest.mark.parametrize("p", [0.05, 0.3, 0.5, 0.8])
def test_two_singletons_cost(abc, p):
    cost, cover = min_cover_cost(up_closure(fam(abc, "a", "c")), p)
    assert cost == pytest.approx(min(1.0, 2 * p), abs=1e-15)
    assert cover.is_valid()


def test_single_minimal_element():
    ab = GroundSet(("a", "b"))
    cost, cover = min_cover_cost(up_closure(fam(ab, "ab")), 0.3)
    assert cost == pytest.approx(0.09, abs=1e-15)
    assert cover.members.to_label_lists() == [["a", "b"]]


def test_grouping_is_worse_at_04(abc):
    cost, cover = min_cover_cost(up_closure(fam(abc, "ab", "bc")), 0.4)
    assert cost == pytest.approx(0.32, abs=1e-15)
    assert cover.members.to_label_lists() == [["a", "b"], ["b", "c"]]
    # at small p the single common element {b} wins: min(2p^2, p)
    cost, cover = min_cover_cost(up_closure(fam(abc, "ab", "bc")), 0.7)
    assert cost == pytest.approx(0.7, abs=1e-15)
    assert cover.members.to_label_lists() == [["b"]]


def test_is_p_small(abc):
    F = up_closure(fam(abc, "a", "c"))
    assert is_p_small(F, 0.2)
    assert not is_p_small(F, 0.3)
    assert is_p_small(F, 1e-9)


def test_q_threshold_examples(abc):
    q, cover = q_threshold(up_closure(fam(abc, "a")))
    assert q == pytest.approx(0.5, abs=1e-12)
    assert cover.members.to_label_lists() == [["a"]]
    q, _ = q_threshold(up_closure(fam(abc, "a", "c")))
    assert q == pytest.approx(0.25, abs=1e-12)
    ab = GroundSet(("a", "b"))
    q, _ = q_threshold(up_closure(fam(ab, "ab")))
    assert q == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_trivial_rejected(abc):
    with pytest.raises(TrivialFamilyError):
        q_threshold(up_closure(fam(abc, "")))
    with pytest.raises(TrivialFamilyError):
        min_cover_cost(up_closure(fam(abc, "")), 0.5)


def test_cover_cap():
    F = random_upper_set(10, 0.2, 1)
    assert len(F.minimal_masks) > 4
    with pytest.raises(CoverCapError, match="greedy"):
        min_cover_cost(F, 0.5, cap=4)
    cost, cover = greedy_cover_cost(F, 0.5)
    assert cover.is_valid()
    assert cost == pytest.approx(cover.cost(0.5))


def test_greedy_examples(abc):
    cost, cover = greedy_cover_cost(up_closure(fam(abc, "a", "c")), 0.2)
    assert cost <= 0.4 + 1e-15 and cover.is_valid()
    ab = GroundSet(("a", "b"))
    cost, _ = greedy_cover_cost(up_closure(fam(ab, "ab")), 0.6)
    assert cost == pytest.approx(0.36)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 10), st.integers(0, 100_000), st.floats(0.01, 0.99))
def test_greedy_never_beats_exact(n, seed, p):
    F = random_upper_set(n, min(0.5, 6 / (1 << n)), seed, max_minimal=10)
    exact, _ = min_cover_cost(F, p)
    greedy, cover = greedy_cover_cost(F, p)
    assert cover.is_valid()
    assert greedy >= exact - 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 100_000))
def test_cost_nondecreasing_and_certificates(n, seed):
    F = random_upper_set(n, min(0.5, 5 / (1 << n)), seed, max_minimal=9)
    ps = np.linspace(0.001, 0.999, 120)
    costs = []
    for p in ps:
        cost, cover = min_cover_cost(F, float(p))
        assert cover.is_valid()
        assert cover.cost(float(p)) == pytest.approx(cost, abs=1e-12)
        # emitted certificates have no redundant member
        for drop in cover.members.masks:
            rest = SetFamily(F.ground, tuple(m for m in cover.members.masks if m != drop))
            assert not Cover(F, rest).is_valid()
        costs.append(cost)
    assert np.all(np.diff(costs) >= -1e-14)
    # continuity on the grid: jumps bounded by the largest derivative
    assert np.max(np.abs(np.diff(costs))) < 0.2


def test_covering_f0_equals_covering_f():
    """Coverage of all of F is decided by its minimal elements."""
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        F = random_upper_set(n, 0.2, int(rng.integers(1 << 30)))
        members = brute_up_closure(F.minimal_masks, n)
        G = SetFamily(F.ground, tuple(int(x) for x in rng.integers(0, 1 << n, size=int(rng.integers(1, 4)))))
        covers_f = all(any(g & t == g for g in G.masks) for t in members)
        assert covers_f == Cover(F, G).is_valid()


def test_dp_matches_exhaustive_small():
    ps = [0.1, 0.35, 0.6, 0.9]
    rng = np.random.default_rng(2)
    for _ in range(60):
        n = int(rng.integers(1, 6))
        F = random_upper_set(n, 0.15, int(rng.integers(1 << 30)), max_minimal=4)
        members = brute_up_closure(F.minimal_masks, n)
        expected = brute_min_cover(members, F.minimal_masks, ps)
        got = [min_cover_cost(F, p)[0] for p in ps]
        assert got == pytest.approx(list(expected), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 100_000))
def test_q_at_most_p_critical(n, seed):
    F = random_upper_set(n, min(0.5, 4 / (1 << n)), seed, max_minimal=8)
    q, cover = q_threshold(F)
    assert q <= p_critical(F) + 1e-12
    assert cover.cost(q) <= 0.5 + 1e-12
