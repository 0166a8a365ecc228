import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hazevid import (Airlight, DehazeConfig, Frame, TransmissionMap, blend_airlight, boost_multiplier,
                     estimate_airlight, recover_frame, transmission_map)
from hazevid.dehaze import effective_divisor
from hazevid.errors import DomainError, ShapeMismatchError

from conftest import random_frame, uniform_frame
from oracles import brute_airlight, naive_transmission


# ---- airlight

def test_airlight_uniform_white():
    assert estimate_airlight(uniform_frame(255)) == (255, 255, 255)


def test_airlight_single_bright_pixel():
    px = np.zeros((16, 16, 3), dtype=np.uint8)
    px[9, 4] = (200, 210, 220)
    assert estimate_airlight(Frame(px)) == (200, 210, 220)


def test_airlight_black_frame_is_floored():
    assert estimate_airlight(uniform_frame(0)) == (1, 1, 1)


def test_airlight_two_stage_ranking(rng):
    # 16x16 = 256 px: 150 with channel minimum 100, the rest with minimum 50
    px = np.zeros((256, 3), dtype=np.uint8)
    hi_idx = rng.permutation(256)[:150]
    lo_mask = np.ones(256, bool)
    lo_mask[hi_idx] = False
    px[hi_idx] = 100
    px[hi_idx, rng.integers(0, 3, 150)] = rng.integers(100, 256, 150)
    px[lo_mask] = 50
    px[lo_mask, 0] = 255  # large sums, but excluded by the first stage
    f = Frame(px.reshape(16, 16, 3))
    expect = brute_airlight(f)
    assert min(expect) == 100
    assert estimate_airlight(f) == expect


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 300))
def test_airlight_matches_brute_force(seed, k):
    rng = np.random.default_rng(seed)
    # few distinct levels -> many ties in both stages
    f = Frame(rng.choice(np.array([0, 60, 61, 200, 255], dtype=np.uint8), (16, 17, 3)))
    assert estimate_airlight(f, DehazeConfig(airlight_candidates=k)) == brute_airlight(f, k)


def test_airlight_deterministic(rng):
    f = random_frame(rng)
    assert estimate_airlight(f) == estimate_airlight(f)


# ---- blending

def test_blend_examples():
    assert blend_airlight(Airlight(100, 100, 100), Airlight(200, 200, 200)) == pytest.approx((160, 160, 160))
    assert blend_airlight(Airlight(180, 170, 160), Airlight(180, 170, 160)) == (180, 170, 160)
    low = Airlight.floored((0, 0, 0))
    assert low == (1, 1, 1)
    assert blend_airlight(Airlight(255, 255, 255), low) == pytest.approx((102.6, 102.6, 102.6))


@given(st.tuples(*[st.floats(1, 255)] * 3), st.tuples(*[st.floats(1, 255)] * 3))
def test_blend_between_and_fixed_point(p, c):
    p, c = Airlight(*p), Airlight(*c)
    out = blend_airlight(p, c)
    for o, a, b in zip(out, p, c):
        assert min(a, b) - 1e-9 <= o <= max(a, b) + 1e-9
    assert blend_airlight(p, p) == p


# ---- transmission

def test_transmission_uniform():
    t = transmission_map(uniform_frame(51), Airlight(255, 255, 255)).t
    assert np.allclose(t, 1 - 0.8 * 0.2, atol=1e-12)


def test_transmission_black_pixel_window():
    px = np.full((32, 32, 3), 200, dtype=np.uint8)
    px[10, 12] = 0
    t = transmission_map(Frame(px), Airlight(255, 255, 255)).t
    assert (t[6:15, 8:17] == 1.0).all()
    assert t[5, 12] < 1.0 and t[10, 17] < 1.0


def test_transmission_matches_naive_oracle(rng, backend):
    f = random_frame(rng, 32, 32)
    a = estimate_airlight(f)
    assert np.abs(transmission_map(f, a).t - naive_transmission(f, a)).max() <= 1e-9


def test_transmission_other_radius(rng, backend):
    f = random_frame(rng, 20, 23)
    a = Airlight(180.0, 200.5, 90.25)
    cfg = DehazeConfig(window_radius=2, omega=0.95)
    got = transmission_map(f, a, cfg).t
    assert np.abs(got - naive_transmission(f, a, 0.95, 2)).max() <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_transmission_bounds(seed):
    rng = np.random.default_rng(seed)
    f = random_frame(rng, 16, 16)
    t = transmission_map(f, Airlight.floored(rng.uniform(0, 255, 3))).t
    assert t.min() >= 0.1 and t.max() <= 1.0


# ---- multiplier

def test_boost_examples():
    assert boost_multiplier(0.25) == 0.5
    assert boost_multiplier(0.5) == 1.0
    assert boost_multiplier(1.0) == 3.0


@pytest.mark.parametrize("t", [0.0, -0.1, 1.0001, 2.0])
def test_boost_domain(t):
    with pytest.raises(DomainError):
        boost_multiplier(t)


def test_effective_divisor_monotone_and_boost_dull():
    ts = np.arange(1, 101) / 100
    g = np.array([boost_multiplier(t) * t for t in ts])
    assert (np.diff(g) > 0).all()
    assert (g[ts <= 0.5] < 1).all()
    assert g[-1] == 3.0
    # jump across the branch boundary
    assert boost_multiplier(0.5) * 0.5 == 0.5
    assert boost_multiplier(0.5 + 1e-12) * (0.5 + 1e-12) == pytest.approx(0.75)
    assert effective_divisor(0.01) == 0.1


# ---- recovery

def test_recover_at_airlight_is_airlight(rng):
    a = Airlight(120, 130, 140)
    f = uniform_frame((120, 130, 140))
    tm = TransmissionMap(rng.uniform(0.1, 1.0, f.shape))
    for mult in (False, True):
        out = recover_frame(f, a, tm, DehazeConfig(use_multiplier=mult))
        assert (out.pixels == (120, 130, 140)).all()


def test_recover_identity_with_unit_transmission(rng, backend):
    f = random_frame(rng)
    out = recover_frame(f, Airlight(200, 100, 50), TransmissionMap(np.ones(f.shape)))
    assert out == f


def test_recover_arithmetic():
    f = uniform_frame(100)
    out = recover_frame(f, Airlight(200, 200, 200), TransmissionMap(np.full(f.shape, 0.5)))
    assert (out.pixels == 0).all()
    # (100 - 50) / 0.4 + 50 = 175
    out = recover_frame(f, Airlight(50, 50, 50), TransmissionMap(np.full(f.shape, 0.4)))
    assert (out.pixels == 175).all()


def test_recover_multiplier_arithmetic(backend):
    f = uniform_frame(100)
    a = Airlight(200, 200, 200)
    # t = 0.8: P = -1.28 + 8 - 3.75 = 2.97, divisor 2.376
    out = recover_frame(f, a, TransmissionMap(np.full(f.shape, 0.8)), DehazeConfig(use_multiplier=True))
    expect = np.floor((100 - 200) / (2.97 * 0.8) + 200 + 0.5)
    assert (out.pixels == expect).all()
    # t = 0.2: P*t = 0.08 -> floored to 0.1
    out = recover_frame(f, a, TransmissionMap(np.full(f.shape, 0.2)), DehazeConfig(use_multiplier=True))
    assert (out.pixels == 0).all()
    out = recover_frame(uniform_frame(210), a, TransmissionMap(np.full(f.shape, 0.2)),
                        DehazeConfig(use_multiplier=True))
    assert (out.pixels == 255).all()


def test_recover_rounds_half_away_from_zero():
    # (101 - 100) / 0.4 + 100 = 102.5 -> 103
    f = uniform_frame(101)
    out = recover_frame(f, Airlight(100, 100, 100), TransmissionMap(np.full(f.shape, 0.4)))
    assert (out.pixels == 103).all()


def test_recover_shape_mismatch(rng):
    with pytest.raises(ShapeMismatchError):
        recover_frame(random_frame(rng, 16, 16), Airlight(1, 1, 1), TransmissionMap(np.ones((16, 17))))


def test_config_validation():
    for bad in (dict(omega=0), dict(omega=1.5), dict(blend_old=0.5), dict(t_floor=0), dict(t_floor=1)):
        with pytest.raises(ValueError):
            DehazeConfig(**bad)
