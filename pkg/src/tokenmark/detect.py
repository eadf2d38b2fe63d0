"""Watermark detection via the secret-number average and its one-sided z-test.

Under the null (tokens chosen with no regard to secret numbers) the per-token
secret numbers are i.i.d. uniform on [0, 1), so the average over N scored
tokens has mean 0.5 and variance 1/(12 N).
"""

import json
import math
from dataclasses import dataclass

from .errors import InsufficientTokensError
from .secret_numbers import secret_number

WATERMARKED = "watermarked"
NOT_WATERMARKED = "not_watermarked"

METHOD_GENERIC = "secret-number-generic"


@dataclass(frozen=True)
class DetectionReport:
    """Outcome of one detection run.

    ``sna`` is the observed per-token statistic mean (secret-number average
    for this detector; green fraction for the greenlist baseline).
    """

    method: str
    sna: float
    n_scored: int
    z: float
    threshold_u: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "sna": self.sna,
            "n_scored": self.n_scored,
            "z": self.z,
            "threshold_u": self.threshold_u,
            "verdict": self.verdict,
        }

    def to_json_line(self) -> str:
        """One JSON object per line, stable field order."""
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "DetectionReport":
        d = json.loads(line)
        return cls(method=d["method"], sna=float(d["sna"]), n_scored=int(d["n_scored"]),
                   z=float(d["z"]), threshold_u=float(d["threshold_u"]),
                   verdict=d["verdict"])


def secret_number_average(text, k: int) -> tuple[float, int]:
    """Mean secret number over positions k..|text|-1 and the count scored.

    Positions with fewer than ``k`` predecessors are skipped rather than
    scored with a truncated context, so the detector only scores pairs it can
    reconstruct exactly.
    """
    n = len(text)
    if n <= k:
        raise InsufficientTokensError("insufficient tokens")
    total = 0.0
    for r in range(k, n):
        total += secret_number(text[r - k : r], text[r], k)
    n_scored = n - k
    return total / n_scored, n_scored


def z_score(sna: float, n_scored: int) -> float:
    """Standardized deviation of the secret-number average from the uniform null."""
    if n_scored < 1:
        raise ValueError("n_scored must be >= 1")
    return (sna - 0.5) / math.sqrt(1.0 / (12.0 * n_scored))


def detect(text, k: int, threshold_u: float = 4.0, method: str = METHOD_GENERIC) -> DetectionReport:
    """Score ``text`` and declare it watermarked iff z strictly exceeds ``threshold_u``."""
    sna, n_scored = secret_number_average(text, k)
    z = z_score(sna, n_scored)
    verdict = WATERMARKED if z > threshold_u else NOT_WATERMARKED
    return DetectionReport(
        method=method,
        sna=sna,
        n_scored=n_scored,
        z=z,
        threshold_u=threshold_u,
        verdict=verdict,
    )
