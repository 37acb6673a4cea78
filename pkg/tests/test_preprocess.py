"""Smoothing filter: hand-derived sequences, fixed points, and containment."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strokekit.ink import InkSample
from strokekit.preprocess import (
    PreprocessConfig,
    extract_axes,
    smooth_axis,
    smooth_sample,
    smooth_stroke,
)

from conftest import random_stroke, sample_of, stroke_from_xy

finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


class TestExtractAxes:
    def test_single_stroke_read_off(self):
        xs, ys = extract_axes(sample_of(stroke_from_xy([1, 3], [2, 4])))
        assert xs.tolist() == [1, 3]
        assert ys.tolist() == [2, 4]

    def test_concatenation_order(self):
        sample = sample_of(
            stroke_from_xy([1, 2], [1, 2]), stroke_from_xy([9, 8], [9, 8])
        )
        xs, ys = extract_axes(sample)
        assert xs.tolist() == [1, 2, 9, 8]
        assert ys.tolist() == [1, 2, 9, 8]

    def test_length_is_total_point_count(self, rng):
        sample = sample_of(*(random_stroke(rng) for _ in range(3)))
        xs, ys = extract_axes(sample)
        assert len(xs) == len(ys) == sample.point_count


class TestSmoothAxis:
    def test_three_point_hand_sequence(self):
        out = smooth_axis(np.array([0.0, 10.0, 20.0]))
        assert out == pytest.approx([0.0, 6.0, 20.0], abs=1e-12)

    def test_four_point_recursive_hand_sequence(self):
        out = smooth_axis(np.array([0.0, 10.0, 20.0, 30.0]))
        assert out == pytest.approx([0.0, 6.0, 13.6, 30.0], abs=1e-12)

    def test_constant_is_fixed_point(self):
        values = np.full(17, 4.25)
        for passes in (1, 2, 5):
            assert np.array_equal(smooth_axis(values, passes), values)

    def test_endpoints_pinned(self, rng):
        values = rng.normal(0, 3, 50)
        out = smooth_axis(values, passes=3)
        assert out[0] == values[0]
        assert out[-1] == values[-1]

    def test_two_points_unchanged(self):
        values = np.array([1.0, 9.0])
        assert np.array_equal(smooth_axis(values), values)

    def test_zero_passes_is_identity(self, rng):
        values = rng.normal(0, 1, 20)
        assert np.array_equal(smooth_axis(values, 0), values)

    @given(st.lists(finite_floats, min_size=2, max_size=60), st.integers(1, 4))
    def test_count_preserved_and_bounded(self, values, passes):
        arr = np.array(values)
        out = smooth_axis(arr, passes)
        assert out.shape == arr.shape
        assert out.min() >= arr.min() - 1e-9
        assert out.max() <= arr.max() + 1e-9

    @given(st.lists(finite_floats, min_size=3, max_size=40))
    def test_second_pass_equals_two_single_passes(self, values):
        arr = np.array(values)
        assert np.array_equal(smooth_axis(arr, 2), smooth_axis(smooth_axis(arr, 1), 1))


class TestSmoothStroke:
    def test_stroke_stays_in_bounding_box(self, rng):
        s = random_stroke(rng, 60)
        out = smooth_stroke(s, PreprocessConfig(passes=3))
        assert out.xs.min() >= s.xs.min() - 1e-9
        assert out.xs.max() <= s.xs.max() + 1e-9
        assert out.ys.min() >= s.ys.min() - 1e-9
        assert out.ys.max() <= s.ys.max() + 1e-9

    def test_point_count_preserved_generically(self, rng):
        for _ in range(20):
            s = random_stroke(rng)
            assert len(smooth_stroke(s).points) == len(s.points)

    def test_endpoints_identical(self, rng):
        s = random_stroke(rng, 30)
        out = smooth_stroke(s)
        assert (out.points[0].x, out.points[0].y) == (s.points[0].x, s.points[0].y)
        assert (out.points[-1].x, out.points[-1].y) == (s.points[-1].x, s.points[-1].y)

    def test_timestamps_ride_along(self):
        s = stroke_from_xy([0, 10, 20], [0, 10, 20], ts=[0.0, 0.5, 1.0])
        out = smooth_stroke(s)
        assert [p.t for p in out.points] == [0.0, 0.5, 1.0]
        assert out.points[1].x == pytest.approx(6.0, abs=1e-12)

    def test_passes_must_be_positive(self):
        with pytest.raises(ValueError):
            PreprocessConfig(passes=0)


class TestSmoothSample:
    def test_label_and_stroke_count_kept(self, rng):
        sample = InkSample("م", tuple(random_stroke(rng) for _ in range(3)))
        out = smooth_sample(sample)
        assert out.label == "م"
        assert out.stroke_count == 3
