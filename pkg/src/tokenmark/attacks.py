"""Token-level substitution attack: replace a seeded random fraction of tokens."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError
from .rng import SplitMix64, draw_index

POLICY_RANDOM_DIFFERENT = "random_different"
POLICY_LM_PROPOSAL = "lm_proposal"
ATTACK_POLICIES = (POLICY_RANDOM_DIFFERENT, POLICY_LM_PROPOSAL)


@dataclass(frozen=True)
class AttackParams:
    rate_t: float
    policy: str = POLICY_RANDOM_DIFFERENT
    attack_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rate_t <= 1.0:
            raise ValueError("rate_t must lie in [0, 1]")
        if self.policy not in ATTACK_POLICIES:
            raise ValueError(f"unknown attack policy {self.policy!r}")


def _pick_positions(n: int, count: int, rng: SplitMix64) -> list[int]:
    # partial Fisher-Yates: first `count` entries are a uniform distinct sample
    idx = list(range(n))
    for i in range(count):
        j = i + int(rng.random() * (n - i))
        if j >= n:
            j = n - 1
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:count]


def substitution_attack(text, params: AttackParams, vocab_size: int, lm=None) -> list[int]:
    """Replace floor(rate_t * |text|) distinct positions; every replacement differs
    from the original token and the length is preserved.

    ``random_different`` draws uniformly over the vocabulary minus the
    original token.  ``lm_proposal`` draws from the model's distribution at
    the position (conditioned on the current, partially attacked left
    context) with the original token excluded and the rest renormalized.
    """
    if len(text) < 1:
        raise ValueError("text must be non-empty")
    if vocab_size < 2:
        raise ValueError("vocab_size must be >= 2 to guarantee a different token")
    if params.policy == POLICY_LM_PROPOSAL and lm is None:
        raise ValueError("lm_proposal policy requires a language model")
    rng = SplitMix64(params.attack_seed)
    n_replace = int(math.floor(params.rate_t * len(text)))
    positions = sorted(_pick_positions(len(text), n_replace, rng))
    out = [int(t) for t in text]
    for pos in positions:
        original = out[pos]
        if params.policy == POLICY_RANDOM_DIFFERENT:
            r = int(rng.random() * (vocab_size - 1))
            if r >= vocab_size - 1:
                r = vocab_size - 2
            out[pos] = r if r < original else r + 1
        else:
            probs = np.array(lm.next_distribution(out[:pos]), dtype=np.float64)
            if original < probs.size:
                probs[original] = 0.0
            if probs.sum() <= 0.0:
                raise DegenerateDistributionError("degenerate distribution")
            out[pos] = draw_index(probs, rng)
    return out
