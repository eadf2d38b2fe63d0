"""Greenlist logit-bias watermark baseline (method code "mwm").

Generation promotes a context-seeded "green" subset of the vocabulary by
adding a bias to its logits; detection counts green tokens and applies the
standard binomial z-test.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import softmax, transform_distribution
from .detect import NOT_WATERMARKED, WATERMARKED, DetectionReport
from .errors import DegenerateDistributionError, GenerationError, InsufficientTokensError
from .rng import SplitMix64, draw_index
from .secret_numbers import context_hash_seed

METHOD_MWM = "mwm"


@dataclass(frozen=True)
class MwmParams:
    gamma: float = 0.25
    delta: float = 2.0
    k: int = 1
    top_k: int = 40
    temperature: float = 1.0
    threshold_u: float = 4.0

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.k < 0:
            raise ValueError("context width k must be >= 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


def _fisher_yates_permutation(n: int, stream: SplitMix64) -> list[int]:
    # classic downward Fisher-Yates driven by the pinned double stream
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(stream.random() * (i + 1))
        if j > i:
            j = i
        perm[i], perm[j] = perm[j], perm[i]
    return perm


@lru_cache(maxsize=8192)
def _green_mask(context_tail: tuple, gamma: float, vocab_size: int) -> np.ndarray:
    seed = context_hash_seed(context_tail, k=len(context_tail))
    perm = _fisher_yates_permutation(vocab_size, SplitMix64(seed))
    size = int(math.floor(gamma * vocab_size))
    mask = np.zeros(vocab_size, dtype=bool)
    mask[perm[:size]] = True
    mask.setflags(write=False)
    return mask


def green_partition(context, k: int, gamma: float, vocab_size: int) -> set[int]:
    """Green subset of the vocabulary for the trailing ``min(k, len)`` context tokens.

    A Fisher-Yates permutation of [0, vocab_size) is seeded from the SHA-256
    of the serialized context tail (same serialization as the secret numbers)
    and the first floor(gamma * vocab_size) entries form the green set.
    """
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    tail = tuple(int(t) for t in (context[-k:] if k > 0 else []))
    mask = _green_mask(tail, gamma, vocab_size)
    return {int(i) for i in np.flatnonzero(mask)}


def _green_mask_for(context, k: int, gamma: float, vocab_size: int) -> np.ndarray:
    tail = tuple(int(t) for t in (context[-k:] if k > 0 else []))
    return _green_mask(tail, gamma, vocab_size)


def mwm_generate(lm, prompt, max_new: int, params: MwmParams, rng_seed: int) -> list[int]:
    """Greenlist-biased decoding: bias in log-space, then the usual decoding transform.

    Returns exactly ``max_new`` tokens; deterministic given the seed.
    """
    if max_new < 0:
        raise ValueError("max_new must be >= 0")
    rng = SplitMix64(rng_seed)
    text = list(prompt)
    completion: list[int] = []
    for _ in range(max_new):
        try:
            raw = np.asarray(lm.next_distribution(text), dtype=np.float64)
            if params.delta != 0.0:
                mask = _green_mask_for(text, params.k, params.gamma, raw.size)
                with np.errstate(divide="ignore"):
                    logp = np.log(raw)
                logp[mask] += params.delta
                raw = softmax(logp)
            # delta == 0 is the identity bias; skipping keeps it bit-equal
            # to the unwatermarked loop under a shared seed
            dist = transform_distribution(raw, params.top_k, params.temperature)
            token = draw_index(dist, rng)
        except DegenerateDistributionError as exc:
            raise GenerationError(str(exc), partial=completion) from exc
        text.append(token)
        completion.append(token)
    return completion


def mwm_detect(text, params: MwmParams, vocab_size: int) -> DetectionReport:
    """Count green tokens at positions >= k and z-test against the binomial null."""
    n = len(text)
    if n <= params.k:
        raise InsufficientTokensError("insufficient tokens")
    green = 0
    for r in range(params.k, n):
        mask = _green_mask_for(text[:r], params.k, params.gamma, vocab_size)
        if mask[int(text[r])]:
            green += 1
    scored = n - params.k
    z = (green - params.gamma * scored) / math.sqrt(scored * params.gamma * (1.0 - params.gamma))
    verdict = WATERMARKED if z > params.threshold_u else NOT_WATERMARKED
    return DetectionReport(
        method=METHOD_MWM,
        sna=green / scored,
        n_scored=scored,
        z=z,
        threshold_u=params.threshold_u,
        verdict=verdict,
    )
