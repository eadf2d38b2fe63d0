"""Persisted experiment records: one JSON object per line, stable field order."""

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .core import WITH_REPLACEMENT, WITHOUT_REPLACEMENT, WatermarkParams
from .greenlist import MwmParams
from .rng import MASK64
from .secret_numbers import serialize_tokens

METHOD_SWR = "swr"
METHOD_SWOR = "swor"
METHOD_MWM = "mwm"
METHOD_NONE = "none"
METHODS = (METHOD_SWR, METHOD_SWOR, METHOD_MWM, METHOD_NONE)

_MODE_BY_METHOD = {METHOD_SWR: WITH_REPLACEMENT, METHOD_SWOR: WITHOUT_REPLACEMENT}


def record_id(method: str, rng_seed: int, prompt) -> str:
    """Stable record identity: SHA-256 hex over (method, seed, prompt)."""
    h = hashlib.sha256()
    h.update(method.encode("utf-8"))
    h.update(struct.pack(">Q", rng_seed & MASK64))
    h.update(serialize_tokens(prompt))
    return h.hexdigest()


@dataclass
class GenerationRecord:
    id: str
    method: str
    lm_descriptor: str
    prompt: list[int]
    completion: list[int]
    params: dict
    rng_seed: int
    rng_algorithm: str
    attack: Optional[dict] = field(default=None)

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "method": self.method,
            "lm_descriptor": self.lm_descriptor,
            "prompt": self.prompt,
            "completion": self.completion,
            "params": self.params,
            "rng_seed": self.rng_seed,
            "rng_algorithm": self.rng_algorithm,
        }
        if self.attack is not None:
            d["attack"] = self.attack
        return d

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationRecord":
        return cls(
            id=d["id"],
            method=d["method"],
            lm_descriptor=d["lm_descriptor"],
            prompt=[int(t) for t in d["prompt"]],
            completion=[int(t) for t in d["completion"]],
            params=dict(d["params"]),
            rng_seed=int(d["rng_seed"]),
            rng_algorithm=d["rng_algorithm"],
            attack=dict(d["attack"]) if d.get("attack") is not None else None,
        )

    @classmethod
    def from_json_line(cls, line: str) -> "GenerationRecord":
        return cls.from_dict(json.loads(line))


def params_to_dict(method: str, params) -> dict:
    """Wire form of the per-method parameter block."""
    if method in (METHOD_SWR, METHOD_SWOR):
        return {
            "y": params.y,
            "k": params.k,
            "mode": params.mode,
            "top_k": params.top_k,
            "temperature": params.temperature,
            "threshold_u": params.threshold_u,
        }
    if method == METHOD_MWM:
        return {
            "gamma": params.gamma,
            "delta": params.delta,
            "k": params.k,
            "top_k": params.top_k,
            "temperature": params.temperature,
            "threshold_u": params.threshold_u,
        }
    if method == METHOD_NONE:
        # no watermark: only the decoding transform settings
        return {"top_k": params["top_k"], "temperature": params["temperature"]}
    raise ValueError(f"unknown method {method!r}")


def params_from_dict(method: str, d: dict):
    if method in (METHOD_SWR, METHOD_SWOR):
        return WatermarkParams(
            y=int(d["y"]),
            k=int(d["k"]),
            mode=d.get("mode", _MODE_BY_METHOD[method]),
            top_k=int(d["top_k"]),
            temperature=float(d["temperature"]),
            threshold_u=float(d["threshold_u"]),
        )
    if method == METHOD_MWM:
        return MwmParams(
            gamma=float(d["gamma"]),
            delta=float(d["delta"]),
            k=int(d["k"]),
            top_k=int(d["top_k"]),
            temperature=float(d["temperature"]),
            threshold_u=float(d["threshold_u"]),
        )
    if method == METHOD_NONE:
        return dict(d)
    raise ValueError(f"unknown method {method!r}")


def write_records(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record.to_json_line())
            fh.write("\n")


def read_records(path) -> list[tuple[int, Optional[GenerationRecord], Optional[str]]]:
    """Read a JSONL file; malformed lines come back as (lineno, None, error)."""
    rows: list[tuple[int, Optional[GenerationRecord], Optional[str]]] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append((lineno, GenerationRecord.from_json_line(line), None))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            rows.append((lineno, None, f"{type(exc).__name__}: {exc}"))
    return rows
