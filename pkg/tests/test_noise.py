import numpy as np
import pytest
from scipy import stats

from conftest import make_test_card
from grainstat.noise import corrupt_binary, corrupt_gray, make_rng

N = 256


def test_binary_zero_noise_identity():
    img = make_rng(0).random((N, N)) < 0.5
    np.testing.assert_array_equal(corrupt_binary(img, 0, 0, seed=1), img)


def test_binary_p1_clears_ones():
    assert not corrupt_binary(np.ones((N, N), bool), 1.0, 0.0, seed=2).any()


def test_binary_flip_rate_three_sigma():
    out = corrupt_binary(np.ones((N, N), bool), 0.1, seed=3)
    rate = 1 - out.mean()
    assert abs(rate - 0.1) <= 3 * np.sqrt(0.1 * 0.9 / N**2)


def test_binary_q_channel():
    out = corrupt_binary(np.zeros((N, N), bool), 0.0, 0.2, seed=4)
    assert abs(out.mean() - 0.2) <= 3 * np.sqrt(0.2 * 0.8 / N**2)


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_binary_rejects_bad_probability(bad):
    with pytest.raises(ValueError):
        corrupt_binary(np.zeros((2, 2), bool), bad)


def test_gray_zero_noise_identity():
    card = make_test_card()
    np.testing.assert_array_equal(corrupt_gray(card, 0.0, seed=5), card)


def test_gray_full_noise_is_uniform():
    out = corrupt_gray(np.zeros((N, N), np.uint8), 1.0, seed=6)
    counts = np.bincount(out.ravel(), minlength=256)
    assert stats.chisquare(counts).pvalue > 0.01


@pytest.mark.parametrize("lam", [1, 64, 128, 200, 255])
def test_gray_level_channel(lam):
    # u >= lam everywhere; P(v < lam | u >= lam) = p * lam / 256
    p = 0.15
    v = corrupt_gray(np.full((N, N), 255, np.uint8), p, seed=lam)
    rate = np.mean(v < lam)
    target = p * lam / 256
    assert abs(rate - target) <= 3 * np.sqrt(target * (1 - target) / N**2)


def test_gray_two_level_matches_binary_rate():
    # on a {0, 255} image the level-128 slice behaves like a binary channel
    # with p = q = p_gray / 2
    p = 0.2
    img = np.zeros((N, N), np.uint8)
    img[:, N // 2:] = 255
    v = corrupt_gray(img, p, seed=9) >= 128
    b = corrupt_binary(img > 0, p / 2, p / 2, seed=9)
    flips_v = np.mean(v != (img > 0))
    flips_b = np.mean(b != (img > 0))
    assert abs(flips_v - flips_b) <= 3 * np.sqrt(2 * 0.1 * 0.9 / N**2)


def test_seed_reproducible():
    card = make_test_card()
    np.testing.assert_array_equal(corrupt_gray(card, 0.3, seed=42), corrupt_gray(card, 0.3, seed=42))
    a = corrupt_binary(card > 100, 0.1, 0.2, seed=7)
    np.testing.assert_array_equal(a, corrupt_binary(card > 100, 0.1, 0.2, seed=7))
    assert np.any(a != corrupt_binary(card > 100, 0.1, 0.2, seed=8))


def test_gray_rejects_out_of_range():
    with pytest.raises(ValueError):
        corrupt_gray(np.full((2, 2), 300), 0.1)
