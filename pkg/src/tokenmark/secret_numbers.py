"""Per-token secret numbers: hash a token and its left context to a uniform value.

The secret number of a token depends only on the token id and the ids of the
(at most) ``k`` tokens preceding it, so a detector can recompute the exact
values seen at generation time from the token stream alone.
"""

import hashlib
import struct

TOKEN_BYTE_WIDTH = 4  # unsigned 32-bit big-endian per token id


def serialize_tokens(tokens) -> bytes:
    """Pack token ids as 4-byte big-endian words, in sequence order."""
    return struct.pack(f">{len(tokens)}I", *(int(t) for t in tokens))


def secret_number(context, candidate: int, k: int) -> float:
    """Deterministic pseudo-uniform value in [0, 1) for (context tail, candidate).

    Takes the last ``min(k, len(context))`` context tokens oldest-first,
    appends the candidate, hashes the serialized ids with SHA-256, and maps
    the first 8 digest bytes (big-endian) to [0, 1).  Total and side-effect
    free; bit-identical on every platform.
    """
    if k < 0:
        raise ValueError("context width k must be >= 0")
    tail = list(context[-k:]) if k > 0 else []
    tail.append(int(candidate))
    digest = hashlib.sha256(serialize_tokens(tail)).digest()
    return int.from_bytes(digest[:8], "big") / 2.0**64


def context_hash_seed(context, k: int) -> int:
    """64-bit seed from the SHA-256 of the trailing ``min(k, len)`` token ids.

    Same serialization as :func:`secret_number`; used to key the greenlist
    baseline's vocabulary permutation.
    """
    if k < 0:
        raise ValueError("context width k must be >= 0")
    tail = list(context[-k:]) if k > 0 else []
    digest = hashlib.sha256(serialize_tokens(tail)).digest()
    return int.from_bytes(digest[:8], "big")
