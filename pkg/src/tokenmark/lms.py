"""Desk-scale language models driving the experiments.

Any object with a ``vocab_size`` attribute and a
``next_distribution(context) -> probability vector`` method works as a model;
the two implementations here are a hash-driven synthetic model with an
entropy knob and a corpus-trained n-gram model with additive smoothing.
"""

import json
from collections import Counter, defaultdict
from importlib import resources
from pathlib import Path
from typing import Protocol

import numpy as np
from scipy.special import ndtri

from .core import softmax
from .rng import MASK64

_GOLDEN = 0x9E3779B97F4A7C15
_CACHE_LIMIT = 8192


class LanguageModel(Protocol):
    vocab_size: int

    def next_distribution(self, context) -> np.ndarray: ...


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, vectorized over uint64 arrays (wrapping multiply)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _mix64_int(x: int) -> int:
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class SyntheticLm:
    """Deterministic pseudo-random language model with a tunable entropy knob.

    Each (trailing context of ``order`` tokens, vocabulary entry) pair hashes
    to a standard-normal logit; logits are scaled by 1/``concentration`` and
    softmaxed.  Small concentration gives peaky distributions, large
    concentration approaches uniform.  Same context, same distribution.
    """

    def __init__(self, vocab_size: int, order: int = 1, concentration: float = 1.0,
                 model_seed: int = 0):
        if vocab_size < 2:
            raise ValueError("vocab_size must be >= 2")
        if order < 0:
            raise ValueError("order must be >= 0")
        if concentration <= 0:
            raise ValueError("concentration must be positive")
        self.vocab_size = vocab_size
        self.order = order
        self.concentration = concentration
        self.model_seed = model_seed
        self._ids = np.arange(1, vocab_size + 1, dtype=np.uint64)
        self._cache: dict[tuple, np.ndarray] = {}

    def descriptor(self) -> str:
        return (
            f"synthetic:vocab={self.vocab_size},order={self.order},"
            f"concentration={self.concentration!r},seed={self.model_seed}"
        )

    def _base_logits(self, tail: tuple) -> np.ndarray:
        # fold the context into a 64-bit key with exact Python-int arithmetic
        key = self.model_seed & MASK64
        for t in tail:
            key = _mix64_int(key ^ (((int(t) + 1) * _GOLDEN) & MASK64))
        words = _mix64(np.uint64(key) ^ self._ids * np.uint64(_GOLDEN))
        u = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))

    def next_distribution(self, context) -> np.ndarray:
        tail = tuple(int(t) for t in (context[-self.order:] if self.order > 0 else []))
        probs = self._cache.get(tail)
        if probs is None:
            probs = softmax(self._base_logits(tail) / self.concentration)
            probs.setflags(write=False)
            if len(self._cache) >= _CACHE_LIMIT:
                self._cache.clear()
            self._cache[tail] = probs
        return probs


class NgramLm:
    """Additively smoothed n-gram model over integer token ids."""

    def __init__(self, n: int, alpha: float, vocab_size: int,
                 context_totals: dict, successor_counts: dict):
        self.n = n
        self.alpha = alpha
        self.vocab_size = vocab_size
        self._totals = context_totals
        self._successors = successor_counts

    def descriptor(self) -> str:
        return f"ngram:vocab={self.vocab_size},n={self.n},alpha={self.alpha!r}"

    def next_distribution(self, context) -> np.ndarray:
        width = self.n - 1
        tail = tuple(int(t) for t in (context[-width:] if width > 0 else []))
        counts = np.zeros(self.vocab_size, dtype=np.float64)
        total = self._totals.get(tail, 0)
        if total:
            for token, c in self._successors[tail].items():
                counts[token] = c
        return (counts + self.alpha) / (total + self.alpha * self.vocab_size)


def ngram_train(corpus, n: int, alpha: float, vocab_size: int | None = None) -> NgramLm:
    """Count n-gram contexts and successors over ``corpus``.

    ``next_distribution`` then returns (count(ctx, t) + alpha) /
    (count(ctx) + alpha * vocab_size) for the trailing n-1 tokens; contexts
    never seen in training fall back to the uniform distribution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if len(corpus) < n:
        raise ValueError("corpus shorter than n")
    if vocab_size is None:
        vocab_size = int(max(corpus)) + 1
    totals: dict = defaultdict(int)
    successors: dict = defaultdict(Counter)
    width = n - 1
    for i in range(len(corpus) - width):
        ctx = tuple(int(t) for t in corpus[i : i + width])
        token = int(corpus[i + width])
        totals[ctx] += 1
        successors[ctx][token] += 1
    return NgramLm(n, alpha, vocab_size, dict(totals), dict(successors))


def make_prompts(source, prompt_len: int, count: int) -> list[list[int]]:
    """Slice ``source`` into ``count`` non-overlapping prompts of exactly ``prompt_len`` tokens."""
    if prompt_len < 1:
        raise ValueError("prompt_len must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    if len(source) < prompt_len * count:
        raise ValueError("insufficient source tokens")
    return [
        [int(t) for t in source[i * prompt_len : (i + 1) * prompt_len]]
        for i in range(count)
    ]


class TokenTable:
    """Bidirectional token id <-> string table for whitespace-tokenized text."""

    def __init__(self, tokens: list[str]):
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate token strings in table")

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_text(cls, text: str) -> "TokenTable":
        return cls(sorted(set(text.split())))

    def encode(self, text: str) -> list[int]:
        try:
            return [self.index[w] for w in text.split()]
        except KeyError as exc:
            raise ValueError(f"token not in table: {exc.args[0]!r}") from None

    def decode(self, ids) -> str:
        return " ".join(self.tokens[int(i)] for i in ids)

    def save(self, path):
        Path(path).write_text(json.dumps(self.tokens), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "TokenTable":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))


def load_corpus(path) -> tuple[list[int], TokenTable]:
    """Whitespace-tokenize a UTF-8 text file into ids plus its token table."""
    text = Path(path).read_text(encoding="utf-8")
    table = TokenTable.from_text(text)
    return table.encode(text), table


def bundled_corpus_path() -> Path:
    """Path of the corpus text file shipped with the package."""
    return Path(resources.files("tokenmark").joinpath("data/corpus.txt"))
