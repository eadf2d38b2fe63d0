"""Decoding transform, candidate sampling, token selection, and generation loops."""

import numpy as np
import pytest

import tokenmark as tm
from tokenmark import (
    DegenerateDistributionError,
    GenerationError,
    SplitMix64,
    WatermarkParams,
    sample_candidates,
    secret_number,
    select_next_token,
    transform_distribution,
)
from helpers_wm import make_lm

UNIFORM_40 = np.full(40, 1.0 / 40.0)

# frozen first run of the reference sampler (uniform over 40, y=5, seed 42)
GOLDEN_SWR_SEED42 = [29, 6, 11, 13, 1]


class FixedLm:
    """Returns the same distribution at every step."""

    def __init__(self, probs):
        self.probs = np.asarray(probs, dtype=np.float64)
        self.vocab_size = self.probs.size

    def next_distribution(self, context):
        return self.probs


class ExplodingLm(FixedLm):
    """Valid for the first few steps, then degenerate."""

    def __init__(self, probs, good_steps):
        super().__init__(probs)
        self.good_steps = good_steps
        self.calls = 0

    def next_distribution(self, context):
        self.calls += 1
        if self.calls > self.good_steps:
            return np.zeros(self.vocab_size)
        return self.probs


# ---------------------------------------------------------------- transform

def test_transform_identity_when_topk_covers_vocab():
    dist = np.array([0.5, 0.3, 0.2])
    out = transform_distribution(dist, top_k=3, temperature=1.0)
    assert np.allclose(out, dist, atol=1e-12)
    out = transform_distribution(dist, top_k=10, temperature=1.0)
    assert np.allclose(out, dist, atol=1e-12)


def test_transform_topk_tiebreak_prefers_small_ids():
    out = transform_distribution(np.full(100, 0.01), top_k=40, temperature=1.0)
    assert np.allclose(out[:40], 1.0 / 40.0)
    assert np.all(out[40:] == 0.0)


def test_transform_temperature_half_squares_probabilities():
    out = transform_distribution(np.array([0.7, 0.2, 0.1]), top_k=3, temperature=0.5)
    expected = np.array([0.49, 0.04, 0.01])
    expected /= expected.sum()
    assert np.allclose(out, [0.9074074074074074, 0.0740740740740741, 0.018518518518518524])
    assert np.allclose(out, expected)


def test_transform_order_temperature_before_topk():
    # temperature flattens enough to change which ids survive the cut is not
    # possible (powers preserve order); but zeroed entries must stay zero
    dist = np.array([0.0, 0.6, 0.4])
    out = transform_distribution(dist, top_k=2, temperature=2.0)
    assert out[0] == 0.0
    assert out.sum() == pytest.approx(1.0)
    assert out[1] > out[2]


def test_transform_rejects_bad_temperature():
    with pytest.raises(ValueError):
        transform_distribution(UNIFORM_40, top_k=40, temperature=0.0)
    with pytest.raises(ValueError):
        transform_distribution(UNIFORM_40, top_k=40, temperature=-1.0)


def test_transform_degenerate_input():
    with pytest.raises(DegenerateDistributionError):
        transform_distribution(np.zeros(5), top_k=3, temperature=1.0)


# ----------------------------------------------------------------- sampling

def test_sample_degenerate_point_mass():
    dist = np.zeros(10)
    dist[3] = 1.0
    rng = SplitMix64(0)
    assert sample_candidates(dist, 5, tm.WITH_REPLACEMENT, rng) == [3, 3, 3, 3, 3]


def test_sample_without_replacement_exhausts_support():
    dist = np.zeros(10)
    dist[[0, 1, 2]] = 1.0 / 3.0
    rng = SplitMix64(7)
    out = sample_candidates(dist, 3, tm.WITHOUT_REPLACEMENT, rng)
    assert sorted(out) == [0, 1, 2]


def test_sample_without_replacement_shrinks_effective_count():
    dist = np.zeros(10)
    dist[[0, 1, 2]] = 1.0 / 3.0
    out = sample_candidates(dist, 5, tm.WITHOUT_REPLACEMENT, SplitMix64(3))
    assert sorted(out) == [0, 1, 2]


def test_sample_golden_stream():
    assert sample_candidates(UNIFORM_40, 5, tm.WITH_REPLACEMENT, SplitMix64(42)) \
        == GOLDEN_SWR_SEED42


def test_sample_empty_support_errors():
    with pytest.raises(DegenerateDistributionError, match="degenerate distribution"):
        sample_candidates(np.zeros(4), 2, tm.WITH_REPLACEMENT, SplitMix64(0))


def test_sample_rejects_bad_args():
    with pytest.raises(ValueError):
        sample_candidates(UNIFORM_40, 0, tm.WITH_REPLACEMENT, SplitMix64(0))
    with pytest.raises(ValueError):
        sample_candidates(UNIFORM_40, 3, "sideways", SplitMix64(0))


def test_without_replacement_candidates_distinct():
    rng = SplitMix64(11)
    for _ in range(200):
        out = sample_candidates(UNIFORM_40, 5, tm.WITHOUT_REPLACEMENT, rng)
        assert len(set(out)) == 5


# ---------------------------------------------------------------- selection

def test_select_single_candidate():
    dist = np.zeros(10)
    dist[3] = 1.0
    params = WatermarkParams(y=4, k=1)
    assert select_next_token(dist, [1, 2], params, SplitMix64(0)) == 3


def test_select_picks_larger_golden_secret():
    # candidates {7, 8} with context [5]: token 8 carries the larger value
    dist = np.zeros(10)
    dist[[7, 8]] = 0.5
    params = WatermarkParams(y=2, k=1, mode=tm.WITHOUT_REPLACEMENT)
    assert secret_number([5], 8, 1) > secret_number([5], 7, 1)
    assert select_next_token(dist, [5], params, SplitMix64(1)) == 8


def test_select_support_limited():
    dist = np.zeros(10)
    dist[[0, 1, 2]] = 1.0 / 3.0
    params = WatermarkParams(y=5, k=1, mode=tm.WITHOUT_REPLACEMENT)
    assert select_next_token(dist, [5], params, SplitMix64(2)) in (0, 1, 2)


def test_selected_token_always_in_transformed_support():
    lm = make_lm(concentration=0.2)
    params = WatermarkParams()
    rng = SplitMix64(5)
    context = list(range(100))
    for _ in range(50):
        dist = transform_distribution(lm.next_distribution(context), params.top_k,
                                      params.temperature)
        token = select_next_token(dist, context, params, rng)
        assert dist[token] > 0.0
        context.append(token)


def test_mean_selected_secret_matches_order_statistic():
    # independent steps: selected value is the max of y i.i.d. uniforms
    params = WatermarkParams(y=5, k=1, mode=tm.WITHOUT_REPLACEMENT)
    rng = SplitMix64(31)
    ctx_stream = SplitMix64(17)
    total = 0.0
    n = 10_000
    for _ in range(n):
        context = [int(ctx_stream.random() * 2**32)]
        token = select_next_token(UNIFORM_40, context, params, rng)
        total += secret_number(context, token, 1)
    mean = total / n
    se = (5.0 / (36.0 * 7.0)) ** 0.5 / n**0.5  # sd of max of 5 uniforms
    assert abs(mean - 5.0 / 6.0) < 3.0 * se


def test_mean_selected_secret_invariant_to_temperature():
    # peaky base distribution, support >= y after top-k at every temperature
    base = np.exp(np.linspace(0.0, 8.0, 40))
    base /= base.sum()
    params_by_temp = {t: WatermarkParams(y=5, k=1, temperature=t) for t in (0.8, 1.0, 1.2)}
    n = 4000
    means = {}
    for temp, params in params_by_temp.items():
        rng = SplitMix64(101)
        ctx_stream = SplitMix64(55)
        dist = transform_distribution(base, params.top_k, temp)
        total = 0.0
        for _ in range(n):
            context = [int(ctx_stream.random() * 2**32)]
            token = select_next_token(dist, context, params, rng)
            total += secret_number(context, token, 1)
        means[temp] = total / n
    se = (5.0 / (36.0 * 7.0)) ** 0.5 / n**0.5
    for mean in means.values():
        assert abs(mean - 5.0 / 6.0) < 3.0 * se


# --------------------------------------------------------------- generation

def test_generate_zero_tokens():
    lm = FixedLm(UNIFORM_40)
    assert tm.generate(lm, [1, 2, 3], 0, WatermarkParams(), 0) == []


def test_generate_deterministic_and_exact_length():
    lm = make_lm()
    params = WatermarkParams()
    prompt = list(range(100))
    a = tm.generate(lm, prompt, 50, params, 42)
    b = tm.generate(lm, prompt, 50, params, 42)
    assert a == b
    assert len(a) == 50
    assert prompt == list(range(100))  # prompt never mutated


def test_generate_differs_across_seeds():
    lm = make_lm()
    params = WatermarkParams()
    a = tm.generate(lm, list(range(100)), 50, params, 1)
    b = tm.generate(lm, list(range(100)), 50, params, 2)
    assert a != b


def test_generate_unwatermarked_degenerate_lm():
    dist = np.zeros(10)
    dist[3] = 1.0
    out = tm.generate_unwatermarked(FixedLm(dist), [0], 20, 5, 1.0, 9)
    assert out == [3] * 20


def test_generate_unwatermarked_deterministic():
    lm = make_lm()
    a = tm.generate_unwatermarked(lm, list(range(100)), 50, 40, 1.0, 4)
    b = tm.generate_unwatermarked(lm, list(range(100)), 50, 40, 1.0, 4)
    assert a == b


def test_generation_error_carries_partial_output():
    lm = ExplodingLm(UNIFORM_40, good_steps=3)
    with pytest.raises(GenerationError) as info:
        tm.generate(lm, [0], 10, WatermarkParams(), 0)
    assert len(info.value.partial) == 3


def test_params_validation():
    with pytest.raises(ValueError):
        WatermarkParams(y=0)
    with pytest.raises(ValueError):
        WatermarkParams(k=-1)
    with pytest.raises(ValueError):
        WatermarkParams(mode="bogus")
    with pytest.raises(ValueError):
        WatermarkParams(top_k=0)
    with pytest.raises(ValueError):
        WatermarkParams(temperature=0.0)
