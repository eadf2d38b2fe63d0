"""Watermarked decoding: sample candidate tokens, keep the one whose secret number is largest.

The generation loop never modifies the language model's distribution (beyond
the usual temperature / top-k decoding transform); the watermark lives purely
in which of the sampled candidates gets emitted.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, GenerationError
from .rng import SplitMix64, draw_index
from .secret_numbers import secret_number

WITH_REPLACEMENT = "with_replacement"
WITHOUT_REPLACEMENT = "without_replacement"
SAMPLING_MODES = (WITH_REPLACEMENT, WITHOUT_REPLACEMENT)


@dataclass(frozen=True)
class WatermarkParams:
    """Knobs of the sampling watermarker.

    ``y`` candidate tokens are drawn per step (with or without replacement)
    and the one with the highest secret number is emitted; ``k`` preceding
    tokens are hashed together with each candidate.
    """

    y: int = 5
    k: int = 1
    mode: str = WITHOUT_REPLACEMENT
    top_k: int = 40
    temperature: float = 1.0
    threshold_u: float = 4.0

    def __post_init__(self):
        if self.y < 1:
            raise ValueError("sampling count y must be >= 1")
        if self.k < 0:
            raise ValueError("context width k must be >= 0")
        if self.mode not in SAMPLING_MODES:
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax; -inf entries map to exactly zero mass."""
    logits = np.asarray(logits, dtype=np.float64)
    peak = np.max(logits)
    if not np.isfinite(peak):
        raise DegenerateDistributionError("degenerate distribution")
    w = np.exp(logits - peak)
    return w / w.sum()


def transform_distribution(raw, top_k: int, temperature: float) -> np.ndarray:
    """Standard decoding transform: temperature, then top-k truncation, then renormalize.

    Temperature acts on log-probabilities (logit / temperature, re-softmax).
    Ties at the top-k boundary keep the smaller token id.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    probs = np.asarray(raw, dtype=np.float64)
    if temperature != 1.0:
        with np.errstate(divide="ignore"):
            logp = np.log(probs)
        probs = softmax(logp / temperature)
    if top_k < probs.size:
        # stable sort on -p: equal probabilities keep ascending id order
        order = np.argsort(-probs, kind="stable")
        kept = np.zeros(probs.size, dtype=bool)
        kept[order[:top_k]] = True
        probs = np.where(kept, probs, 0.0)
    total = probs.sum()
    if total <= 0.0:
        raise DegenerateDistributionError("degenerate distribution")
    return probs / total


def sample_candidates(dist, y: int, mode: str, rng: SplitMix64) -> list[int]:
    """Draw ``y`` candidate tokens from ``dist``, in draw order.

    With replacement: independent categorical draws, duplicates allowed.
    Without replacement: iterative draw-remove-renormalize over the support;
    when the support holds fewer than ``y`` tokens, all of them are returned
    and the effective ``y`` shrinks.
    """
    if y < 1:
        raise ValueError("sampling count y must be >= 1")
    if mode not in SAMPLING_MODES:
        raise ValueError(f"unknown sampling mode {mode!r}")
    probs = np.asarray(dist, dtype=np.float64)
    support = int(np.count_nonzero(probs > 0.0))
    if support == 0:
        raise DegenerateDistributionError("degenerate distribution")
    if mode == WITH_REPLACEMENT:
        return [draw_index(probs, rng) for _ in range(y)]
    remaining = probs.copy()
    out = []
    for _ in range(min(y, support)):
        i = draw_index(remaining, rng)
        out.append(i)
        remaining[i] = 0.0
    return out


def select_next_token(dist, context, params: WatermarkParams, rng: SplitMix64) -> int:
    """Sample candidates and return the one with the maximum secret number.

    Ties (possible only between duplicate candidates, which share a secret
    number) resolve to the smallest token id.
    """
    candidates = sample_candidates(dist, params.y, params.mode, rng)
    best_token = None
    best_value = -1.0
    for token in candidates:
        value = secret_number(context, token, params.k)
        if value > best_value or (value == best_value and token < best_token):
            best_token = token
            best_value = value
    return best_token


def generate(lm, prompt, max_new: int, params: WatermarkParams, rng_seed: int) -> list[int]:
    """Generate ``max_new`` watermarked tokens after ``prompt``; returns the completion only.

    Each step queries ``lm`` with the full text so far, applies the decoding
    transform, and appends the candidate with the highest secret number.
    Deterministic given (lm, prompt, params, rng_seed).
    """
    if max_new < 0:
        raise ValueError("max_new must be >= 0")
    rng = SplitMix64(rng_seed)
    text = list(prompt)
    completion: list[int] = []
    for _ in range(max_new):
        try:
            dist = transform_distribution(
                lm.next_distribution(text), params.top_k, params.temperature
            )
            token = select_next_token(dist, text, params, rng)
        except DegenerateDistributionError as exc:
            raise GenerationError(str(exc), partial=completion) from exc
        text.append(token)
        completion.append(token)
    return completion


def generate_unwatermarked(
    lm, prompt, max_new: int, top_k: int, temperature: float, rng_seed: int
) -> list[int]:
    """Plain decoding loop: one categorical draw per step from the transformed distribution."""
    if max_new < 0:
        raise ValueError("max_new must be >= 0")
    rng = SplitMix64(rng_seed)
    text = list(prompt)
    completion: list[int] = []
    for _ in range(max_new):
        try:
            dist = transform_distribution(lm.next_distribution(text), top_k, temperature)
            token = draw_index(dist, rng)
        except DegenerateDistributionError as exc:
            raise GenerationError(str(exc), partial=completion) from exc
        text.append(token)
        completion.append(token)
    return completion
