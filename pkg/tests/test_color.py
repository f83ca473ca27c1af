import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nirfuse.color import (
    LMS2RGB,
    OpponentImage,
    backward_opponent,
    forward_opponent,
    luminance_of,
)
from nirfuse.image import gray_to_rgb

from conftest import random_rgb


def test_gray_is_achromatic():
    v = np.linspace(1 / 255, 1.0, 50)
    img = gray_to_rgb(np.tile(v, (3, 1)))
    opp = forward_opponent(img)
    assert np.max(np.abs(opp.c1)) < 1e-9
    assert np.max(np.abs(opp.c2)) < 1e-9


def test_gray_luminance_is_value_and_monotone():
    v = np.linspace(0.01, 1.0, 100)
    l = luminance_of(gray_to_rgb(v[None, :]))[0]
    np.testing.assert_allclose(l, v, rtol=1e-12)
    assert np.all(np.diff(l) > 0)


def test_identical_pixels_identical_output():
    img = np.full((2, 2, 3), [0.2, 0.5, 0.7])
    opp = forward_opponent(img)
    for p in opp:
        assert np.all(p == p[0, 0])


def test_round_trip(rng):
    img = random_rgb(rng, (32, 32))
    back = backward_opponent(forward_opponent(img))
    assert np.max(np.abs(back - img)) < 1e-5


def test_achromatic_round_trip():
    plane = np.linspace(0.05, 0.95, 16).reshape(4, 4)
    opp = OpponentImage(plane, np.zeros_like(plane), np.zeros_like(plane))
    np.testing.assert_allclose(backward_opponent(opp), gray_to_rgb(plane), atol=1e-12)


def test_unit_luminance_zero_chroma_is_white():
    # l = 1 with zero chroma means log-LMS = 0, i.e. LMS = (1, 1, 1)
    ones, zeros = np.ones((2, 2)), np.zeros((2, 2))
    rgb = backward_opponent(OpponentImage(ones, zeros, zeros), clamp=False)
    np.testing.assert_allclose(rgb[0, 0], LMS2RGB @ np.ones(3), atol=1e-12)
    np.testing.assert_allclose(rgb, 1.0, atol=1e-12)


def test_zero_planes_floor_to_black():
    z = np.zeros((2, 2))
    assert np.all(backward_opponent(OpponentImage(z, z, z)) < 1e-5)


def test_luminance_of_matches_forward(rng):
    img = random_rgb(rng)
    a = luminance_of(img)
    np.testing.assert_array_equal(a, forward_opponent(img).l)
    np.testing.assert_array_equal(a, luminance_of(img))


def test_backward_clamps():
    l = np.full((1, 1), 0.9)
    out = backward_opponent(OpponentImage(l, np.full((1, 1), 2.0), np.zeros((1, 1))))
    assert out.min() >= 0.0 and out.max() <= 1.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 255), min_size=3, max_size=3))
def test_round_trip_property(rgb8):
    img = np.array(rgb8, dtype=float).reshape(1, 1, 3) / 255.0
    back = backward_opponent(forward_opponent(img))
    assert np.max(np.abs(back - img)) < 1e-5


def test_dims_must_match():
    with pytest.raises(ValueError):
        backward_opponent((np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2))))
