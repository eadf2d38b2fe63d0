"""Text-quality metrics: n-gram diversity and a pluggable similarity scorer hook."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

VARIANT_TABLE_CONSISTENT = "table_consistent"
VARIANT_PAPER_LITERAL = "paper_literal"
DIVERSITY_VARIANTS = (VARIANT_TABLE_CONSISTENT, VARIANT_PAPER_LITERAL)


@dataclass(frozen=True)
class DiversityConfig:
    max_order_n: int = 4
    formula_variant: str = VARIANT_TABLE_CONSISTENT
    clamp_epsilon: float = 1e-6

    def __post_init__(self):
        if self.max_order_n < 1:
            raise ValueError("max_order_n must be >= 1")
        if self.formula_variant not in DIVERSITY_VARIANTS:
            raise ValueError(f"unknown diversity variant {self.formula_variant!r}")
        if not 0.0 < self.clamp_epsilon < 1.0:
            raise ValueError("clamp_epsilon must lie in (0, 1)")


def unique_ngram_fraction(text, n: int) -> float:
    """Distinct n-grams divided by the number of n-gram slots."""
    total = len(text) - n + 1
    if total < 1:
        raise ValueError("text shorter than n")
    grams = {tuple(int(t) for t in text[i : i + n]) for i in range(total)}
    return len(grams) / total


def diversity(text, config: DiversityConfig = DiversityConfig()) -> float:
    """Aggregate n-gram uniqueness over orders 1..max_order_n.

    The default ``table_consistent`` variant returns -ln(1 - prod(u_n)) with
    the product clamped below 1, so fully repetitive text scores near 0 and
    fully unique text hits -ln(clamp_epsilon).  The ``paper_literal`` variant
    returns -ln(1 - prod(1 - u_n)) instead; both are provided because they
    disagree strongly on highly unique text.
    """
    if len(text) < config.max_order_n:
        raise ValueError("text shorter than max_order_n")
    fractions = [unique_ngram_fraction(text, n) for n in range(1, config.max_order_n + 1)]
    if config.formula_variant == VARIANT_TABLE_CONSISTENT:
        prod = 1.0
        for u in fractions:
            prod *= u
        prod = min(prod, 1.0 - config.clamp_epsilon)
        return -math.log(1.0 - prod)
    prod = 1.0
    for u in fractions:
        prod *= 1.0 - u
    return -math.log(1.0 - prod)


_similarity_scorer: Optional[Callable] = None


def register_similarity_scorer(scorer: Optional[Callable]) -> None:
    """Install (or clear, with None) the external similarity scorer.

    The scorer is called as ``scorer(reference_tokens, candidate_tokens)`` and
    must return a float.  No scorer ships with the package; reports omit the
    similarity column while none is registered.
    """
    global _similarity_scorer
    _similarity_scorer = scorer


def similarity_available() -> bool:
    return _similarity_scorer is not None


def similarity_score(reference, candidate) -> Optional[float]:
    """Score a (reference, candidate) pair, or None when no scorer is registered."""
    if _similarity_scorer is None:
        return None
    return float(_similarity_scorer(reference, candidate))
