import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hazevid import Frame, invert_frame, min_channel_map, rgb_to_hsv
from hazevid.frame import max_channel, saturation_value

from conftest import random_frame, uniform_frame

frames = arrays(np.uint8, st.tuples(st.integers(16, 24), st.integers(16, 24), st.just(3))).map(Frame)


def test_invert_endpoints():
    assert invert_frame(uniform_frame(0)).pixels.min() == 255
    assert invert_frame(uniform_frame(255)).pixels.max() == 0


def test_invert_preserves_meta(rng):
    f = random_frame(rng, 20, 30, index=7)
    g = invert_frame(f)
    assert (g.width, g.height, g.index) == (30, 20, 7)
    assert np.array_equal(g.pixels.astype(int), 255 - f.pixels.astype(int))


@given(frames)
def test_invert_is_involution(f):
    assert invert_frame(invert_frame(f)) == f


@given(frames)
def test_min_of_inverted_is_inverted_max(f):
    assert np.array_equal(min_channel_map(invert_frame(f)).values, 255 - max_channel(f.pixels))


def test_min_channel_examples():
    px = np.zeros((16, 16, 3), dtype=np.uint8)
    px[0, 0] = (10, 200, 30)
    px[1, 1] = (255, 255, 255)
    m = min_channel_map(Frame(px)).values
    assert m[0, 0] == 10 and m[1, 1] == 255
    assert (min_channel_map(uniform_frame(77)).values == 77).all()


@pytest.mark.parametrize("rgb,s,v", [((128, 128, 128), 0, 128), ((255, 0, 0), 255, 255), ((0, 0, 0), 0, 0)])
def test_rgb_to_hsv_examples(rgb, s, v):
    p = rgb_to_hsv(rgb)
    assert (p.s, p.v) == (s, v)


def test_hsv_hue():
    assert rgb_to_hsv((0, 255, 0)).h == pytest.approx(120.0)
    assert rgb_to_hsv((0, 0, 255)).h == pytest.approx(240.0)


@given(st.tuples(*[st.integers(0, 255)] * 3))
def test_hsv_ranges_and_rounding(rgb):
    p = rgb_to_hsv(rgb)
    assert 0 <= p.s <= 255 and 0 <= p.v <= 255
    assert p.v >= min(rgb)
    v, mn = max(rgb), min(rgb)
    if v:
        # exact rational rounding, half up
        from fractions import Fraction
        x = Fraction(255 * (v - mn), v)
        assert p.s == int(x + Fraction(1, 2))


@settings(max_examples=50)
@given(frames)
def test_vectorised_sv_matches_scalar(f):
    s, v = saturation_value(f.pixels)
    for y, x in [(0, 0), (f.height - 1, f.width - 1), (f.height // 2, 3)]:
        p = rgb_to_hsv(f.pixels[y, x])
        assert (s[y, x], v[y, x]) == (p.s, p.v)


def test_frame_validation():
    with pytest.raises(ValueError):
        Frame(np.zeros((15, 16, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        Frame(np.zeros((16, 16), dtype=np.uint8))
    with pytest.raises(ValueError):
        Frame(np.full((16, 16, 3), 300, dtype=np.int32))
    with pytest.raises(ValueError):
        Frame(np.zeros((16, 16, 3), dtype=np.uint8), index=-1)


def test_frame_is_immutable_copy():
    px = np.zeros((16, 16, 3), dtype=np.uint8)
    f = Frame(px)
    px[0, 0, 0] = 9
    assert f.pixels[0, 0, 0] == 0
    with pytest.raises(ValueError):
        f.pixels[0, 0, 0] = 1
