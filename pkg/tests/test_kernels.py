"""The compiled and pure-Python kernels must agree exactly."""

import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_lab import _pykernels, kernels

compiled = pytest.importorskip("threshold_lab._kernels")

BACKENDS = [pytest.param(_pykernels, id="python"), pytest.param(compiled, id="compiled")]

antichain_inputs = st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=9))
)


@pytest.mark.skipif(bool(os.environ.get("THRESHOLD_LAB_PURE")), reason="pure backend forced")
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "compiled"


def test_forced_pure_backend():
    import subprocess
    import sys

    env = dict(os.environ, THRESHOLD_LAB_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from threshold_lab import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@settings(max_examples=150, deadline=None)
@given(antichain_inputs, st.floats(0.0, 1.0))
def test_backends_agree(data, p):
    n, gens = data
    mins = [_pykernels.minimal_masks(gens), compiled.minimal_masks(gens)]
    assert mins[0] == mins[1]
    minimal = mins[0]
    sizes = [_pykernels.intersection_sizes(minimal), compiled.intersection_sizes(minimal)]
    assert np.array_equal(sizes[0], sizes[1])
    # identical costs and identical tie-breaking
    assert _pykernels.cover_dp(sizes[0], p) == compiled.cover_dp(sizes[0], p)
    inds = [_pykernels.upset_indicator(minimal, n), compiled.upset_indicator(minimal, n)]
    assert np.array_equal(inds[0], inds[1])
    assert np.array_equal(_pykernels.indicator_profile(inds[0], n), compiled.indicator_profile(inds[0], n))


@pytest.mark.parametrize("impl", BACKENDS)
def test_cover_dp_hand_example(impl):
    # minimal elements {a,b}, {b,c}: grouped intersection {b}
    sizes = impl.intersection_sizes([0b011, 0b110])
    assert list(sizes) == [0, 2, 2, 1]
    cost, groups = impl.cover_dp(sizes, 0.4)
    assert cost == pytest.approx(0.32)
    assert sorted(groups) == [1, 2]
    cost, groups = impl.cover_dp(sizes, 0.7)
    assert cost == pytest.approx(0.7)
    assert groups == [3]


@pytest.mark.parametrize("impl", BACKENDS)
def test_upset_indicator_read_only_input(impl):
    ind = impl.upset_indicator([0b01], 2)
    ind.setflags(write=False)
    assert list(impl.indicator_profile(ind, 2)) == [0, 1, 1]
