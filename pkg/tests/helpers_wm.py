"""Shared test fixtures: pinned model presets and batch generation."""

import numpy as np

import tokenmark as tm

VOCAB = 1000
PROMPT_LEN = 100
MAX_NEW = 200

# near-flat distribution over the vocabulary: top-40 support is the full 40
# tokens everywhere, so candidate draws never collide by necessity
HIGH_ENTROPY_CONCENTRATION = 8.0

# calibrated so that with-replacement candidate draws collide at a rate
# comparable to a real mid-size model at temperature 1.0
MEDIUM_ENTROPY_CONCENTRATION = 0.2

MODEL_SEED = 7


def make_lm(concentration=HIGH_ENTROPY_CONCENTRATION, vocab=VOCAB, order=1,
            model_seed=MODEL_SEED):
    return tm.SyntheticLm(vocab, order=order, concentration=concentration,
                          model_seed=model_seed)


def random_prompt(stream, vocab=VOCAB, length=PROMPT_LEN):
    return [int(stream.random() * vocab) for _ in range(length)]


def generate_batch(lm, method, params, n, seed0, max_new=MAX_NEW, prompt_seed=999):
    """n completions with per-run seeds seed0..seed0+n-1 and streamed prompts."""
    stream = tm.SplitMix64(prompt_seed)
    out = []
    for i in range(n):
        prompt = random_prompt(stream, vocab=lm.vocab_size)
        if method == "none":
            comp = tm.generate_unwatermarked(lm, prompt, max_new, params["top_k"],
                                             params["temperature"], seed0 + i)
        elif method == "mwm":
            comp = tm.mwm_generate(lm, prompt, max_new, params, seed0 + i)
        else:
            comp = tm.generate(lm, prompt, max_new, params, seed0 + i)
        out.append((prompt, comp))
    return out


def z_values(completions, k=1, threshold_u=4.0):
    return np.array([tm.detect(c, k, threshold_u).z for _, c in completions])
