import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histembed.errors import DimensionMismatch, InvalidParameter
from histembed.image_io import ImageTensor
from histembed.metrics import mse, psnr, qubit_accounting, qubit_table, tvd

BIG_N = 3403 * 5266


class TestMSE:
    def test_identical(self, random_image):
        img = random_image(5, 4)
        assert mse(img, img) == 0.0

    def test_single_pixel(self):
        assert mse(ImageTensor(np.zeros((1, 1))), ImageTensor(np.full((1, 1), 0.5))) == 0.25

    def test_extremes(self):
        assert mse(ImageTensor(np.zeros((3, 2, 3))), ImageTensor(np.ones((3, 2, 3)))) == 1.0

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mse(ImageTensor(np.zeros((2, 2))), ImageTensor(np.zeros((2, 2, 3))))

    def test_symmetric(self, random_image):
        a, b = random_image(6, 6), random_image(6, 6)
        assert mse(a, b) == mse(b, a)


class TestPSNR:
    def test_twenty_db(self):
        assert psnr(0.01) == pytest.approx(20.0, abs=1e-12)

    def test_zero_db(self):
        assert psnr(1.0) == 0.0

    def test_infinite(self):
        assert psnr(0.0) == math.inf

    def test_negative(self):
        with pytest.raises(InvalidParameter):
            psnr(-1e-3)

    @given(st.floats(1e-300, 1e3), st.floats(1e-300, 1e3))
    def test_strictly_decreasing(self, a, b):
        if a < b and psnr(a) != psnr(b):
            assert psnr(a) > psnr(b)


class TestTVD:
    def test_equal(self):
        assert tvd([0.2, 0.8], [0.2, 0.8]) == 0.0

    def test_disjoint(self):
        assert tvd([1, 0], [0, 1]) == 1.0

    def test_small(self):
        assert tvd([0.75, 0.25], [0.70, 0.30]) == pytest.approx(0.05, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            tvd([1.0], [0.5, 0.5])

    def test_not_normalized(self):
        with pytest.raises(InvalidParameter):
            tvd([0.5, 0.6], [0.5, 0.5])

    @settings(max_examples=100)
    @given(st.integers(1, 40), st.integers(0, 2**32 - 1))
    def test_triangle(self, k, seed):
        rng = np.random.default_rng(seed)
        p, q, r = (v / v.sum() for v in rng.random((3, k)) + 1e-12)
        assert tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-12
        assert 0.0 <= tvd(p, q) <= 1.0


class TestQubitAccounting:
    def test_frqi_large(self):
        assert qubit_accounting(BIG_N, "FRQI") == 26

    def test_neqr_rgb(self):
        assert qubit_accounting(BIG_N, "NEQR", bit_depth=24) == 49

    def test_neqr_table_reading(self):
        assert qubit_accounting(BIG_N, "NEQR", bit_depth=1) == 26

    def test_ncqi(self):
        assert qubit_accounting(BIG_N, "NCQI") == 27

    @pytest.mark.parametrize("n", [1, 2, 1000, BIG_N, 10**9])
    def test_proposed_independent_of_size(self, n):
        assert qubit_accounting(n, "PROPOSED", bins=32) == 5

    def test_single_pixel(self):
        assert qubit_accounting(1, "FRQI") == 1

    def test_megapixel(self):
        t = qubit_table(2**20, bins=128)
        assert t["PROPOSED"] == 7 and t["FRQI"] == 21

    def test_unknown_method(self):
        with pytest.raises(InvalidParameter):
            qubit_accounting(10, "QPIXL")

    def test_bad_pixels(self):
        with pytest.raises(InvalidParameter):
            qubit_accounting(0, "FRQI")
