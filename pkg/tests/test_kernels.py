import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yeegrid import _kernels_py, kernels

try:
    from yeegrid import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

sorted_positions = st.lists(st.floats(-1, 1), min_size=0, max_size=60).map(lambda v: sorted(set(v)))


def naive_merge(positions, min_cell):
    clusters = [[p] for p in positions]
    while len(clusters) > 1:
        cen = [sum(c) / len(c) for c in clusters]
        gaps = [b - a for a, b in zip(cen, cen[1:])]
        i = min(range(len(gaps)), key=lambda k: (gaps[k], k))
        if gaps[i] >= min_cell:
            break
        clusters[i : i + 2] = [clusters[i] + clusters[i + 1]]
    return [len(c) for c in clusters], [sum(c) / len(c) for c in clusters]


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    assert _kernels_py.BACKEND == "python"


class TestMergeClose:
    def test_empty(self):
        labels, cen = _kernels_py.merge_close([], 0.1)
        assert labels.size == 0 and cen.size == 0

    def test_chain_collapses_from_closest_pair(self):
        labels, cen = _kernels_py.merge_close([0.0, 0.4, 0.5, 1.2], 0.3)
        assert list(labels) == [0, 1, 1, 2]
        np.testing.assert_allclose(cen, [0.0, 0.45, 1.2])

    @settings(max_examples=200)
    @given(sorted_positions, st.floats(1e-3, 0.5))
    def test_against_naive_oracle(self, pts, min_cell):
        labels, cen = _kernels_py.merge_close(pts, min_cell)
        sizes, ref = naive_merge(pts, min_cell * (1 - 1e-12))
        assert list(np.bincount(labels, minlength=len(ref))) == sizes
        np.testing.assert_allclose(cen, ref, rtol=0, atol=1e-12)


def brute_levels(sizes, r, kmax=6):
    import itertools

    best = None
    for ks in itertools.product(range(kmax + 1), repeat=len(sizes)):
        d = [s / 2**k for s, k in zip(sizes, ks)]
        if all(max(a, b) <= r * min(a, b) * (1 + 1e-12) for a, b in zip(d, d[1:])):
            best = ks if best is None else tuple(min(a, b) for a, b in zip(best, ks))
    return best


class TestGradingLevels:
    def test_example(self):
        levels = _kernels_py.grading_levels([0.01, 0.08], 2.0, 0.0, [False, False])
        assert list(levels) == [0, 2]

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(0.01, 1), min_size=1, max_size=4), st.sampled_from([2.0, 3.0]))
    def test_least_feasible(self, sizes, r):
        got = _kernels_py.grading_levels(sizes, r, 0.0, [False] * len(sizes))
        assert tuple(int(k) for k in got) == brute_levels(sizes, r)

    def test_frozen_and_floor_respected(self):
        got = _kernels_py.grading_levels([0.01, 1.0, 0.01], 2.0, 0.4, [True, False, True])
        assert list(got) == [0, 1, 0]


@needs_compiled
class TestBackendsBitwise:
    @settings(max_examples=300)
    @given(sorted_positions, st.floats(1e-4, 0.5))
    def test_merge_close(self, pts, min_cell):
        la, ca = _kernels_py.merge_close(pts, min_cell)
        lb, cb = compiled.merge_close(np.asarray(pts, dtype=float), min_cell)
        np.testing.assert_array_equal(la, lb)
        assert ca.tobytes() == np.asarray(cb, dtype=float).tobytes()

    @settings(max_examples=300)
    @given(
        st.lists(st.tuples(st.floats(1e-4, 1), st.booleans()), min_size=1, max_size=50),
        st.floats(1.2, 4),
        st.floats(0, 1e-2),
    )
    def test_grading_levels(self, cells, r, floor):
        sizes = np.array([c[0] for c in cells])
        frozen = np.array([c[1] for c in cells])
        a = _kernels_py.grading_levels(sizes, r, floor, frozen)
        b = compiled.grading_levels(sizes, r, floor, frozen)
        np.testing.assert_array_equal(a, b)
