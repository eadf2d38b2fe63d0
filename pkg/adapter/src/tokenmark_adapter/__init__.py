"""Step-wise adapter for wiring the sampling watermark into external decoding loops.

Host pipelines expose raw next-token logits at a hook point; this package
turns one logits vector at a time into the watermarked token choice by
calling the tokenmark core (softmax, decoding transform, candidate
selection) -- a single shared implementation, so every value crossing the
boundary is bit-identical to calling the core directly.

Detection works on plain token id lists and requires the ids produced by
the generation tokenizer; detecting under a different tokenizer is
undefined.
"""

import numpy as np

from tokenmark import (
    DetectionReport,
    SplitMix64,
    WatermarkParams,
    detect,
    select_next_token,
    softmax,
    transform_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "SamplingWatermarkProcessor",
    "StepState",
    "detect_ids",
    "step",
]


class StepState:
    """Decoding-loop state: accumulated context ids, immutable params, rng stream.

    The context only ever grows; one state drives one generation.  Distinct
    states never share anything, so interleaving them is safe.
    """

    def __init__(self, params: WatermarkParams, rng_seed: int, prompt=(),
                 vocab_size: int | None = None):
        self.params = params
        self.vocab_size = vocab_size
        self._context = [int(t) for t in prompt]
        self._rng = SplitMix64(rng_seed)

    @property
    def context(self) -> tuple[int, ...]:
        return tuple(self._context)

    def extend(self, tokens) -> None:
        """Record tokens the host emitted outside the watermark step."""
        self._context.extend(int(t) for t in tokens)


def step(state: StepState, logits) -> int:
    """Consume one logits vector, append and return the watermarked token choice."""
    scores = np.asarray(logits, dtype=np.float64)
    if scores.ndim != 1:
        raise ValueError("logits must be a 1-D vector")
    if state.vocab_size is None:
        state.vocab_size = scores.size
    elif scores.size != state.vocab_size:
        raise ValueError(
            f"logits length {scores.size} does not match vocab_size {state.vocab_size}"
        )
    dist = transform_distribution(
        softmax(scores), state.params.top_k, state.params.temperature
    )
    token = select_next_token(dist, state._context, state.params, state._rng)
    state._context.append(token)
    return token


def detect_ids(token_ids, k: int, threshold_u: float = 4.0) -> DetectionReport:
    """Score a token id list with the core detector; z values cross unchanged."""
    return detect([int(t) for t in token_ids], k, threshold_u)


class SamplingWatermarkProcessor:
    """Logits-processor-convention wrapper around :func:`step`.

    Construct with params, then call with ``(input_ids, scores)`` once per
    decoding step; the returned scores are masked so that any downstream
    sampler (greedy or stochastic) emits the watermarked choice.  Tokens the
    host adds on its own (the prompt, forced tokens) are adopted from
    ``input_ids`` before each step.
    """

    def __init__(self, params: WatermarkParams, rng_seed: int,
                 vocab_size: int | None = None):
        self._params = params
        self._rng_seed = rng_seed
        self._vocab_size = vocab_size
        self._state: StepState | None = None
        self.last_token: int | None = None

    @property
    def state(self) -> StepState | None:
        return self._state

    def reset(self) -> None:
        self._state = None
        self.last_token = None

    def __call__(self, input_ids, scores):
        ids = [int(t) for t in input_ids]
        if self._state is None:
            self._state = StepState(self._params, self._rng_seed, prompt=ids,
                                    vocab_size=self._vocab_size)
        else:
            known = list(self._state.context)
            if ids[: len(known)] != known:
                raise ValueError("input_ids diverged from this processor's history")
            self._state.extend(ids[len(known):])
        token = step(self._state, scores)
        self.last_token = token
        out = np.full(np.asarray(scores).shape, -np.inf, dtype=np.float64)
        out[token] = float(np.asarray(scores, dtype=np.float64)[token])
        return out
