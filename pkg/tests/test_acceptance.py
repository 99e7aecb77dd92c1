"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary. Expected values come from the hand-derived formulas or the
brute-force oracles in ``oracles.py``.
"""

import math

import numpy as np

from conftest import record
from oracles import (
    all_upper_sets,
    antichains,
    brute_min_cover,
    brute_mu,
    brute_mu_many,
    brute_up_closure,
    bisect_increasing,
)
from threshold_lab.bounds import ConditionalProblem, bell_eps_bound, epsilon_floor, admissible_intervals
from threshold_lab.family import GroundSet, SetFamily, UpperSetFamily, up_closure
from threshold_lab.forge import paper_example, random_poset, random_upper_set
from threshold_lab.measure import conditional, mu_family, p_critical
from threshold_lab.montecarlo import estimate_family
from threshold_lab.poset import PosetEmbedding, y_p_distribution
from threshold_lab.threshold import min_cover_cost, q_threshold

GRID99 = np.linspace(0.01, 0.99, 99)


def ground(n):
    return GroundSet(tuple(f"x{i}" for i in range(n)))


def test_criterion_01_ratio_formula():
    ex = paper_example()
    prob = ConditionalProblem(ex.A, ex.B)
    dev = float(np.max(np.abs(prob.r(GRID99) - (2 - 2 / (2 - GRID99)))))
    ok = dev <= 1e-12
    record(1, "r_{A,B}(p) = 2 - 2/(2-p) on 99 points", ok, f"max deviation {dev:.2e}")
    assert ok


def test_criterion_02_floor_and_interval():
    ex = paper_example()
    floor = epsilon_floor(ex.A, ex.B, K=48)
    ivs = admissible_intervals(ex.A, ex.B, 0.99, K=48)
    ok = (
        abs(floor.value - 0.98051) <= 1e-4
        and abs(floor.argmin - 0.582289) <= 1e-3
        and len(ivs) == 1
        and abs(ivs[0][0] - 0.195217) <= 1e-4
        and abs(ivs[0][1] - 0.889027) <= 1e-4
    )
    iv = ivs[0] if ivs else (math.nan, math.nan)
    record(
        2,
        "floor, argmin and eps=0.99 interval for A,B",
        ok,
        f"floor {floor.value:.6f} at {floor.argmin:.6f}, interval ({iv[0]:.6f}, {iv[1]:.6f})",
    )
    assert ok


def test_criterion_03_upper_in_b_case():
    ex = paper_example()
    prob = ConditionalProblem(ex.Aprime, ex.B)
    dev = float(np.max(np.abs(prob.r(GRID99) - 1.0)))
    floor = prob.epsilon_floor()
    bound = bell_eps_bound(0.25, 1, 0.99)
    ok = (
        dev <= 1e-12
        and abs(floor.value - 2 ** (-1 / 12)) <= 1e-5
        and abs(floor.value - 0.943874) <= 1e-5
        and floor.boundary
        and floor.argmin > 0.999
        and abs(bound - 0.173995) <= 1e-5
    )
    record(
        3,
        "r_{A',B} = 1, boundary floor, eps bound",
        ok,
        f"deviation {dev:.2e}, floor {floor.value:.7f} at {floor.argmin:.6f}, bound {bound:.7f}",
    )
    assert ok


def test_criterion_04_derived_thresholds():
    X = GroundSet(("a", "b", "c"))
    ac = up_closure(SetFamily.from_labels(X, [["a"], ["c"]]))
    a = up_closure(SetFamily.from_labels(X, [["a"]]))
    q, _ = q_threshold(ac)
    pc_ac = p_critical(ac)
    pc_a = p_critical(a)
    # by hand: the cheapest cover of <{a},{c}> is {{a},{c}} at cost 2p, so q = 1/4;
    # mu_p(<{a},{c}>) = 1 - (1-p)^2 and mu_p(<{a}>) = p
    oracle_pc = bisect_increasing(lambda p: brute_mu(brute_up_closure([1, 4], 3), 3, p), 0.5)
    ok = (
        abs(q - 0.25) <= 1e-10
        and abs(pc_ac - (1 - math.sqrt(0.5))) <= 1e-10
        and abs(pc_ac - oracle_pc) <= 1e-10
        and abs(pc_a - 0.5) <= 1e-12
    )
    record(4, "q and p_c of the worked families", ok, f"q {q:.12f}, p_c {pc_ac:.12f}, {pc_a:.12f}")
    assert ok


def test_criterion_05_fraction_identity():
    n = 3
    X = ground(n)
    ps = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    worst, count = 0.0, 0
    for b_bits in range(1, 1 << (1 << n)):
        B = [s for s in range(1 << n) if b_bits >> s & 1]
        mu_b = brute_mu_many(B, n, ps)
        sub = b_bits
        while sub:
            A = [s for s in range(1 << n) if sub >> s & 1]
            fa = SetFamily(X, tuple(A))
            up = up_closure(fa)
            mu_a = brute_mu_many(A, n, ps)
            mu_up = brute_mu_many(up.family.masks, n, ps)
            # package side: P(A|B) P(B) / P(A|<A>), each factor from the library
            lhs = np.array([mu_family(up, p) for p in ps])
            rhs = np.array(
                [conditional(fa, SetFamily(X, tuple(B)), p) * mu_family(SetFamily(X, tuple(B)), p)
                 / conditional(fa, up.family, p) for p in ps]
            )
            oracle = (mu_a / mu_b) * mu_b / (mu_a / mu_up)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(lhs - oracle))))
            count += ps.size
            sub = (sub - 1) & b_bits
    ok = worst <= 1e-12 and count > 3000
    record(5, "fraction identity, all A in B for n = 3", ok, f"{count} checks, max error {worst:.2e}")
    assert ok


def _random_nested(rng, n, singletons=False, max_a=10):
    """Random ``A`` inside random ``B``; with ``singletons`` the generators of
    ``<A>`` are single points, so ``ell0 = 1`` and the gate is zero."""
    X = ground(n)
    size_b = int(rng.integers(1, min(1 << n, 60) + 1))
    B = set(int(b) for b in rng.choice(1 << n, size=size_b, replace=False))
    if singletons:
        points = [1 << int(i) for i in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)]
        B.update(points)
        above = [b for b in B if any(b & pt for pt in points) and b not in points]
        extra = [b for b in above if rng.random() < 0.5]
        return X, points + extra, sorted(B)
    nonempty = sorted(B - {0}) or [1]
    B.update(nonempty)
    k = int(rng.integers(1, min(max_a, len(nonempty)) + 1))
    A = rng.choice(nonempty, size=k, replace=False)
    return X, [int(a) for a in A], sorted(B)


def test_criterion_06_conditional_bound():
    rng = np.random.default_rng(2024)
    ex = paper_example()
    instances = [(ex.X, list(ex.A.masks), list(ex.B.masks))]
    instances += [_random_nested(rng, int(rng.integers(2, 9)), singletons=i % 2 == 1) for i in range(200)]
    eps = np.linspace(0.01, 0.99, 99)
    checked = bad = active = 0
    for X, A, B in instances:
        prob = ConditionalProblem(SetFamily(X, tuple(A)), SetFamily(X, tuple(B)), K=48)
        g = prob.g(GRID99)
        exact = brute_mu_many(A, X.n, GRID99) / brute_mu_many(B, X.n, GRID99)
        hit = eps[None, :] > g[:, None]
        checked += int(hit.sum())
        active += bool(hit.any())
        bad += int((hit & ~(exact[:, None] > 1 - eps[None, :])).sum())
    ok = bad == 0 and checked > 0
    record(
        6,
        "eps > g(p) implies P(A|B) > 1 - eps",
        ok,
        f"{len(instances)} instances ({active} with admissible pairs), {checked} pairs, {bad} counterexamples",
    )
    assert ok


def _threshold_violations(F: UpperSetFamily) -> int:
    q, _ = q_threshold(F)
    pc = p_critical(F)
    slack = 1e-10
    return int(not q <= pc + slack) + int(not pc <= 8 * q * math.log2(2 * F.ell0) + slack)


def test_criterion_07_threshold_sandwich():
    exhaustive = violations = 0
    for n in range(1, 5):
        X = ground(n)
        for fam in all_upper_sets(n):
            if not fam or 0 in fam:
                continue
            F = up_closure(SetFamily(X, tuple(fam)))
            violations += _threshold_violations(F)
            exhaustive += 1
    rng = np.random.default_rng(7)
    for i in range(500):
        n = int(rng.integers(1, 11))
        density = min(0.5, float(rng.uniform(0.5, 4.0)) / (1 << n))
        F = random_upper_set(n, density, seed=i, max_minimal=12)
        violations += _threshold_violations(F)
    ok = violations == 0 and exhaustive == 1 + 4 + 18 + 166
    record(7, "q <= p_c <= 8 q log2(2 ell0)", ok, f"{exhaustive} exhaustive + 500 random, {violations} violations")
    assert ok


def test_criterion_08_rv_conversion():
    rng = np.random.default_rng(99)
    worst = 0.0
    for i in range(300):
        m = int(rng.integers(1, 13))
        P = random_poset(m, float(rng.uniform(0.1, 0.6)), seed=i)
        n = max(1, math.ceil(math.log2(m))) + int(rng.integers(0, 4))
        images = tuple(int(x) for x in rng.choice(1 << n, size=m, replace=False))
        f = PosetEmbedding(P, ground(n), images)
        S = [x for x in P.elements if rng.random() < 0.5]
        p = float(rng.uniform(0.01, 0.99))
        left = y_p_distribution(P, f, p).prob(S)
        img_s = [images[P.index(x)] for x in S]
        right = brute_mu(img_s, n, p) / brute_mu(images, n, p)
        worst = max(worst, abs(left - right))
    ok = worst <= 1e-12
    record(8, "P(Y_p in S) = P(X_p in f(S) | X_p in f(P))", ok, f"300 instances, max error {worst:.2e}")
    assert ok


def test_criterion_09_cover_oracle():
    ps = np.array([0.05, 0.2, 0.35, 0.5, 0.8])
    checked, worst = 0, 0.0
    for n in range(1, 6):
        X = ground(n)
        for chain in antichains(n, 4):
            F = UpperSetFamily(X, chain)
            members = F.family.masks
            oracle = brute_min_cover(members, chain, ps)
            dp = np.array([min_cover_cost(F, float(p))[0] for p in ps])
            worst = max(worst, float(np.max(np.abs(dp - oracle))))
            checked += 1
    ok = worst <= 1e-12 and checked == 1 + 4 + 18 + 159 + 3426
    record(9, "DP cover cost equals exhaustive search", ok, f"{checked} upper sets, max error {worst:.2e}")
    assert ok


def test_criterion_10_mc_calibration():
    rng = np.random.default_rng(5)
    worst_cover = 100
    for i in range(20):
        n = int(rng.integers(3, 9))
        F = random_upper_set(n, min(0.5, 2.0 / (1 << n) + 0.05), seed=1000 + i)
        p = float(rng.uniform(0.15, 0.85))
        exact = brute_mu(F.family.masks, n, p)
        covered = sum(estimate_family(F, p, 2000, seed=s, confidence=0.99).covers(exact) for s in range(100))
        worst_cover = min(worst_cover, covered)
    ok = worst_cover >= 95
    record(10, "Monte Carlo 99% intervals cover the exact value", ok, f"worst instance {worst_cover}/100")
    assert ok
