"""Greenlist baseline: partition determinism, biased generation, binomial z-test."""

import math

import numpy as np
import pytest

import tokenmark as tm
from tokenmark import MwmParams, green_partition, mwm_detect, mwm_generate
from tokenmark.greenlist import _green_mask_for
from helpers_wm import generate_batch, make_lm

# frozen first run of the reference permutation (context [5], k=1, vocab 8)
GOLDEN_PARTITION_5 = {0, 3, 4, 5}


def test_partition_size():
    part = green_partition([1, 2, 3], 1, 0.25, 40)
    assert len(part) == 10
    assert all(0 <= t < 40 for t in part)


def test_partition_floor_sizing():
    assert len(green_partition([0], 1, 0.5, 7)) == 3
    assert len(green_partition([0], 1, 0.999, 10)) == 9


def test_partition_deterministic():
    a = green_partition([9, 5], 1, 0.25, 100)
    b = green_partition([3, 5], 1, 0.25, 100)  # same trailing token
    c = green_partition([9, 6], 1, 0.25, 100)
    assert a == b
    assert a != c


def test_partition_golden():
    assert green_partition([5], 1, 0.5, 8) == GOLDEN_PARTITION_5


def test_partition_validation():
    with pytest.raises(ValueError):
        green_partition([1], 1, 0.25, 0)
    with pytest.raises(ValueError):
        green_partition([1], 1, 0.0, 10)
    with pytest.raises(ValueError):
        green_partition([1], 1, 1.0, 10)


def test_params_validation():
    with pytest.raises(ValueError):
        MwmParams(gamma=0.0)
    with pytest.raises(ValueError):
        MwmParams(delta=-1.0)
    with pytest.raises(ValueError):
        MwmParams(temperature=0.0)


def test_delta_zero_matches_unwatermarked_bitwise():
    lm = make_lm()
    prompt = list(range(100))
    for seed in range(30):
        a = mwm_generate(lm, prompt, 40, MwmParams(delta=0.0), seed)
        b = tm.generate_unwatermarked(lm, prompt, 40, 40, 1.0, seed)
        assert a == b


def test_huge_delta_saturates_green():
    lm = make_lm()
    params = MwmParams(delta=1e6)
    comp = mwm_generate(lm, list(range(100)), 60, params, 3)
    text = list(range(100)) + comp
    for r in range(100, len(text)):
        assert int(text[r]) in green_partition(text[:r], 1, 0.25, 1000)


def test_mwm_generate_deterministic_exact_length():
    lm = make_lm()
    params = MwmParams()
    a = mwm_generate(lm, list(range(100)), 50, params, 11)
    b = mwm_generate(lm, list(range(100)), 50, params, 11)
    assert a == b and len(a) == 50


def test_detect_zero_when_green_rate_matches_gamma():
    # alternate green / non-green picks so g equals gamma * T exactly
    params = MwmParams(gamma=0.5, k=1)
    text = [0]
    for step in range(40):
        part = green_partition(text, 1, 0.5, 8)
        pool = sorted(part) if step % 2 == 0 else sorted(set(range(8)) - part)
        text.append(pool[0])
    report = mwm_detect(text, params, 8)
    assert report.z == 0.0
    assert report.sna == 0.5
    assert report.verdict == tm.NOT_WATERMARKED


def test_detect_full_green_z_value():
    # g = T = 200, gamma = 0.25 -> 150 / sqrt(37.5)
    z = (200 - 0.25 * 200) / math.sqrt(200 * 0.25 * 0.75)
    assert z == pytest.approx(24.49, abs=0.01)


def test_mwm_detect_on_watermarked():
    lm = make_lm()
    batch = generate_batch(lm, "mwm", MwmParams(), 25, seed0=700)
    reports = [mwm_detect(c, MwmParams(), 1000) for _, c in batch]
    assert all(r.verdict == tm.WATERMARKED for r in reports)
    assert all(r.n_scored == 199 for r in reports)


def test_mwm_detect_null_on_random_text():
    stream = tm.SplitMix64(44)
    hits = 0
    for _ in range(200):
        text = [int(stream.random() * 1000) for _ in range(200)]
        hits += mwm_detect(text, MwmParams(), 1000).verdict == tm.WATERMARKED
    assert hits <= 2


def test_mwm_detect_short_text_errors():
    with pytest.raises(tm.InsufficientTokensError):
        mwm_detect([4], MwmParams(k=1), 10)


def test_delta_preserves_nongreen_ordering():
    rng = np.random.default_rng(5)
    raw = rng.dirichlet(np.ones(100))
    mask = _green_mask_for([7], 1, 0.25, 100)
    with np.errstate(divide="ignore"):
        logp = np.log(raw)
    logp[mask] += 2.0
    biased = np.exp(logp - logp.max())
    biased /= biased.sum()
    nongreen = ~np.asarray(mask)
    assert np.array_equal(np.argsort(raw[nongreen]), np.argsort(biased[nongreen]))


def test_delta_zero_green_rate_near_gamma():
    lm = make_lm()
    params = MwmParams(delta=0.0)
    green = total = 0
    batch = generate_batch(lm, "mwm", params, 50, seed0=13_000)
    for _, comp in batch:
        report = mwm_detect(comp, params, 1000)
        green += round(report.sna * report.n_scored)
        total += report.n_scored
    rate = green / total
    assert abs(rate - 0.25) < 3.0 * math.sqrt(0.25 * 0.75 / total)
