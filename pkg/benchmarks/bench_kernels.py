"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best of ``--repeat`` runs for both backends and the
speedup. The q row runs a full bisection (about 45 cover evaluations).
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from threshold_lab import _pykernels

try:
    from threshold_lab import _kernels as compiled
except ImportError:
    compiled = None


def antichain(n: int, k: int, seed: int) -> list[int]:
    """``k`` distinct ``n//2``-subsets of ``[n]``: equal sizes keep it an antichain."""
    rng = np.random.default_rng(seed)
    out: set[int] = set()
    while len(out) < k:
        out.add(int(sum(1 << int(i) for i in rng.choice(n, size=n // 2, replace=False))))
    return sorted(out)


def q_bisection(impl, minimal: list[int], tol: float = 1e-12) -> float:
    sizes = impl.intersection_sizes(minimal)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cost, _ = impl.cover_dp(sizes, mid)
        if cost <= 0.5:
            lo = mid
        else:
            hi = mid
    return lo


def cases():
    for k in (8, 10, 12):
        minimal = antichain(20, k, seed=k)
        sizes = _pykernels.intersection_sizes(minimal)
        yield f"cover_dp |F0|={k}", lambda impl, s=sizes: impl.cover_dp(s, 0.3)
    for n in (16, 20):
        minimal = antichain(n, 12, seed=n)
        yield f"upset_indicator n={n}", lambda impl, m=minimal, n=n: impl.upset_indicator(m, n)
    minimal = antichain(20, 10, seed=3)
    yield "q bisection |F0|=10", lambda impl, m=minimal: q_bisection(impl, m)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    # sanity: both backends agree on a full q computation
    minimal = antichain(16, 8, seed=0)
    assert q_bisection(_pykernels, minimal) == q_bisection(compiled, minimal)

    print(f"{'kernel':<24}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for name, fn in cases():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        print(f"{name:<24}{t_py:>12.4f}{t_c:>14.5f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
