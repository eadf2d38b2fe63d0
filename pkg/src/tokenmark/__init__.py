"""Sampling-based watermarking for token streams.

Embed a statistical watermark while decoding from any language model, detect
it from token ids alone via a one-sided z-test, and reproduce detectability,
robustness, and parameter-sweep experiments with the bundled toy models.
"""

from .attacks import (
    ATTACK_POLICIES,
    POLICY_LM_PROPOSAL,
    POLICY_RANDOM_DIFFERENT,
    AttackParams,
    substitution_attack,
)
from .core import (
    SAMPLING_MODES,
    WITH_REPLACEMENT,
    WITHOUT_REPLACEMENT,
    WatermarkParams,
    generate,
    generate_unwatermarked,
    sample_candidates,
    select_next_token,
    softmax,
    transform_distribution,
)
from .detect import (
    NOT_WATERMARKED,
    WATERMARKED,
    DetectionReport,
    detect,
    secret_number_average,
    z_score,
)
from .errors import DegenerateDistributionError, GenerationError, InsufficientTokensError
from .greenlist import MwmParams, green_partition, mwm_detect, mwm_generate
from .lms import (
    NgramLm,
    SyntheticLm,
    TokenTable,
    bundled_corpus_path,
    load_corpus,
    make_prompts,
    ngram_train,
)
from .metrics import (
    DiversityConfig,
    diversity,
    register_similarity_scorer,
    similarity_available,
    similarity_score,
    unique_ngram_fraction,
)
from .records import (
    METHOD_MWM,
    METHOD_NONE,
    METHOD_SWOR,
    METHOD_SWR,
    METHODS,
    GenerationRecord,
    params_from_dict,
    params_to_dict,
    read_records,
    record_id,
    write_records,
)
from .rng import RNG_ALGORITHM, SplitMix64, draw_index
from .secret_numbers import context_hash_seed, secret_number, serialize_tokens

__version__ = "0.1.0"

__all__ = [
    "ATTACK_POLICIES",
    "AttackParams",
    "DegenerateDistributionError",
    "DetectionReport",
    "DiversityConfig",
    "GenerationError",
    "GenerationRecord",
    "InsufficientTokensError",
    "METHOD_MWM",
    "METHOD_NONE",
    "METHOD_SWOR",
    "METHOD_SWR",
    "METHODS",
    "MwmParams",
    "NOT_WATERMARKED",
    "NgramLm",
    "POLICY_LM_PROPOSAL",
    "POLICY_RANDOM_DIFFERENT",
    "RNG_ALGORITHM",
    "SAMPLING_MODES",
    "SplitMix64",
    "SyntheticLm",
    "TokenTable",
    "WATERMARKED",
    "WITH_REPLACEMENT",
    "WITHOUT_REPLACEMENT",
    "WatermarkParams",
    "bundled_corpus_path",
    "context_hash_seed",
    "detect",
    "diversity",
    "draw_index",
    "generate",
    "generate_unwatermarked",
    "green_partition",
    "load_corpus",
    "make_prompts",
    "mwm_detect",
    "mwm_generate",
    "ngram_train",
    "params_from_dict",
    "params_to_dict",
    "read_records",
    "record_id",
    "register_similarity_scorer",
    "sample_candidates",
    "secret_number",
    "secret_number_average",
    "select_next_token",
    "serialize_tokens",
    "similarity_available",
    "similarity_score",
    "softmax",
    "substitution_attack",
    "transform_distribution",
    "unique_ngram_fraction",
    "write_records",
    "z_score",
]
