import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histembed.errors import InvalidParameter
from histembed.histencode import (
    assign_bins,
    bin_center,
    build_histogram,
    to_amplitudes,
)


def linear_scan_bin(value, edges):
    """Lowest bin whose closed interval holds ``value``."""
    for k in range(len(edges) - 1):
        if edges[k] <= value <= edges[k + 1]:
            return k
    raise AssertionError("value outside histogram")


class TestBuildHistogram:
    def test_worked_example(self):
        h = build_histogram([3, 3, 6, 12], 2)
        np.testing.assert_array_equal(h.edges, [3, 7.5, 12])
        np.testing.assert_array_equal(h.counts, [3, 1])
        np.testing.assert_array_equal(h.assignments, [0, 0, 0, 1])

    def test_interior_edge_goes_low(self):
        h = build_histogram([3, 7.5, 12], 2)
        np.testing.assert_array_equal(h.assignments, [0, 0, 1])

    def test_extremes(self):
        h = build_histogram([0.0, 1.0, 2.0, 3.0, 4.0], 4)
        assert h.assignments[0] == 0
        assert h.assignments[-1] == 3
        # 1, 2, 3 sit on interior edges
        np.testing.assert_array_equal(h.assignments, [0, 0, 1, 2, 3])

    @pytest.mark.parametrize("bins", [1, 2, 7, 32])
    def test_degenerate(self, bins):
        h = build_histogram([5.0] * 6, bins)
        assert h.is_degenerate
        assert h.counts[0] == 6 and h.counts[1:].sum() == 0
        assert np.all(h.assignments == 0)
        assert bin_center(h, 0) == 5.0

    def test_full_range(self):
        h = build_histogram([1.0, 2.0], 4, value_range=(0.0, 8.0))
        np.testing.assert_array_equal(h.edges, [0, 2, 4, 6, 8])
        np.testing.assert_array_equal(h.assignments, [0, 0])

    def test_empty_input(self):
        with pytest.raises(InvalidParameter):
            build_histogram([], 4)

    @pytest.mark.parametrize("bins", [0, -3, 2.5])
    def test_bad_bin_count(self, bins):
        with pytest.raises(InvalidParameter):
            build_histogram([1.0, 2.0], bins)

    def test_out_of_range_values(self):
        with pytest.raises(InvalidParameter):
            assign_bins([9.0], [0.0, 4.0, 8.0])


class TestAmplitudes:
    def test_three_one(self):
        a = to_amplitudes(build_histogram([3, 3, 6, 12], 2))
        assert a.qubits == 1
        np.testing.assert_allclose(a.amplitudes, [math.sqrt(3) / 2, 0.5], rtol=0, atol=1e-15)

    def test_single_bin(self):
        a = to_amplitudes(build_histogram([1.0, 2.0, 3.0], 1))
        assert a.qubits == 0
        np.testing.assert_array_equal(a.amplitudes, [1.0])

    def test_five_uniform_bins(self):
        a = to_amplitudes(build_histogram([0, 1, 2, 3, 4], 5))
        assert a.qubits == 3
        np.testing.assert_allclose(a.amplitudes[:5], 1 / math.sqrt(5), rtol=1e-15)
        assert np.all(a.amplitudes[5:] == 0.0)


class TestBinCenter:
    def test_midpoints(self):
        h = build_histogram([3, 3, 6, 12], 2)
        assert bin_center(h, 0) == 5.25
        assert bin_center(h, 1) == 9.75

    @pytest.mark.parametrize("k", [-1, 2])
    def test_out_of_range(self, k):
        with pytest.raises(InvalidParameter):
            bin_center(build_histogram([3, 12], 2), k)


sums_strategy = st.lists(
    st.floats(0, 3072, allow_nan=False, allow_infinity=False), min_size=1, max_size=200
)


@settings(max_examples=100, deadline=None)
@given(sums=sums_strategy, bins=st.integers(1, 300))
def test_histogram_properties(sums, bins):
    h = build_histogram(sums, bins)
    n = len(sums)
    assert h.counts.sum() == n
    assert np.all(np.diff(h.edges) >= 0)
    for s, k in zip(sums, h.assignments):
        assert h.edges[k] <= s <= h.edges[k + 1]
        assert k == linear_scan_bin(s, h.edges)
        assert abs(bin_center(h, int(k)) - s) <= h.half_width * (1 + 1e-9) + 1e-12
    a = to_amplitudes(h)
    assert abs(np.sum(a.amplitudes**2) - 1.0) <= 1e-12
    assert np.all(a.amplitudes >= 0)
    assert np.all(a.amplitudes[bins:] == 0)
    np.testing.assert_allclose(a.amplitudes[:bins] ** 2 * n, h.counts, rtol=1e-9, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(sums=sums_strategy, bins=st.integers(1, 128))
def test_doubling_bins_never_loosens_bound(sums, bins):
    coarse = build_histogram(sums, bins)
    fine = build_histogram(sums, 2 * bins)
    assert fine.half_width <= coarse.half_width
