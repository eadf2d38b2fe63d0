"""Experiment orchestration: batched generation, detection, attacks, sweeps, reports.

Every batch derives per-record seeds from a master seed by record index, so a
whole pipeline is reproducible byte-for-byte from one integer.
"""

import csv
import itertools
from pathlib import Path
from typing import Optional

from .attacks import AttackParams, substitution_attack
from .core import WatermarkParams, generate, generate_unwatermarked
from .detect import detect
from .errors import GenerationError
from .greenlist import MwmParams, mwm_detect, mwm_generate
from .lms import NgramLm, SyntheticLm, load_corpus, make_prompts, ngram_train
from .metrics import DiversityConfig, diversity, similarity_available, similarity_score
from .records import (
    METHOD_MWM,
    METHOD_NONE,
    METHOD_SWOR,
    METHOD_SWR,
    GenerationRecord,
    params_from_dict,
    params_to_dict,
    read_records,
    record_id,
)
from .rng import RNG_ALGORITHM, MASK64, SplitMix64

DETECT_CSV_COLUMNS = [
    "row_type", "record_id", "method", "detector", "n_scored", "sna", "z",
    "threshold_u", "verdict", "detection_rate", "mean_z", "n_samples",
    "n_errors", "error",
]

SWEEP_CSV_COLUMNS = [
    "method", "y", "temperature", "attack_rate", "n_samples", "mean_z",
    "detection_rate", "mean_diversity",
]

DETECTOR_SECRET = "secret-number"
DETECTOR_MWM = "mwm"

_PROMPT_SEED_SALT = 0x70726F6D707473  # distinct stream for prompt material


def parse_descriptor(descriptor: str) -> dict:
    """Parse an lm_descriptor string back into a {kind, key: value} dict."""
    kind, _, rest = descriptor.partition(":")
    out: dict = {"kind": kind}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            try:
                out[key] = int(value)
            except ValueError:
                try:
                    out[key] = float(value)
                except ValueError:
                    out[key] = value
    return out


class PromptFeed:
    """Deterministic per-attempt prompts, sliced from a token source."""

    def __init__(self, tokens: Optional[list[int]], prompt_len: int,
                 vocab_size: int = 0, stream_seed: int = 0):
        self._tokens = list(tokens) if tokens is not None else []
        self._stream = None if tokens is not None else SplitMix64(stream_seed)
        self._vocab_size = vocab_size
        self.prompt_len = prompt_len

    def prompt(self, attempt: int) -> list[int]:
        need = (attempt + 1) * self.prompt_len
        while self._stream is not None and len(self._tokens) < need:
            self._tokens.append(int(self._stream.random() * self._vocab_size))
        return make_prompts(self._tokens[: need], self.prompt_len, attempt + 1)[attempt]


def synthetic_prompt_feed(vocab_size: int, prompt_len: int, master_seed: int) -> PromptFeed:
    return PromptFeed(None, prompt_len, vocab_size=vocab_size,
                      stream_seed=(master_seed ^ _PROMPT_SEED_SALT) & MASK64)


def corpus_prompt_feed(corpus_tokens, prompt_len: int) -> PromptFeed:
    return PromptFeed(corpus_tokens, prompt_len)


def build_lm(kind: str, vocab_size: int = 1000, order: int = 1,
             concentration: float = 8.0, model_seed: int = 0,
             corpus_path=None, ngram_order: int = 3, alpha: float = 0.1):
    """Construct a toy model plus (for the corpus model) its token source."""
    if kind == "synthetic":
        return SyntheticLm(vocab_size, order=order, concentration=concentration,
                           model_seed=model_seed), None
    if kind == "ngram":
        if corpus_path is None:
            raise ValueError("ngram model requires a corpus path")
        corpus_ids, _table = load_corpus(corpus_path)
        return ngram_train(corpus_ids, ngram_order, alpha), corpus_ids
    raise ValueError(f"unknown lm kind {kind!r}")


def lm_descriptor(lm) -> str:
    return lm.descriptor()


def _generate_one(lm, method: str, prompt, max_new: int, params, seed: int) -> list[int]:
    if method in (METHOD_SWR, METHOD_SWOR):
        return generate(lm, prompt, max_new, params, seed)
    if method == METHOD_MWM:
        return mwm_generate(lm, prompt, max_new, params, seed)
    if method == METHOD_NONE:
        return generate_unwatermarked(
            lm, prompt, max_new, params["top_k"], params["temperature"], seed
        )
    raise ValueError(f"unknown method {method!r}")


def generate_records(lm, method: str, params, n: int, max_new: int,
                     prompt_feed: PromptFeed, master_seed: int,
                     failures: Optional[list] = None) -> list[GenerationRecord]:
    """Produce exactly ``n`` records; failed attempts advance to the next seed."""
    descriptor = lm_descriptor(lm)
    records: list[GenerationRecord] = []
    attempt = 0
    max_attempts = 10 * n + 100
    while len(records) < n:
        if attempt >= max_attempts:
            raise GenerationError(f"gave up after {attempt} generation attempts")
        prompt = prompt_feed.prompt(attempt)
        seed = (master_seed + attempt) & MASK64
        try:
            completion = _generate_one(lm, method, prompt, max_new, params, seed)
        except GenerationError as exc:
            if failures is not None:
                failures.append((attempt, seed, str(exc)))
            attempt += 1
            continue
        records.append(GenerationRecord(
            id=record_id(method, seed, prompt),
            method=method,
            lm_descriptor=descriptor,
            prompt=prompt,
            completion=completion,
            params=params_to_dict(method, params),
            rng_seed=seed,
            rng_algorithm=RNG_ALGORITHM,
        ))
        attempt += 1
    return records


def _detector_for(record: GenerationRecord, requested: str) -> str:
    if requested != "auto":
        return requested
    return DETECTOR_MWM if record.method == METHOD_MWM else DETECTOR_SECRET


def detect_record(record: GenerationRecord, detector: str,
                  k: Optional[int] = None, threshold_u: Optional[float] = None,
                  gamma: Optional[float] = None):
    """Run one detector over a record's completion; the prompt is not scored.

    Context width, threshold, and gamma come from the record's params unless
    overridden; records without watermark params fall back to k=1, u=4.
    """
    params = params_from_dict(record.method, record.params)
    record_k = params.k if not isinstance(params, dict) else 1
    record_u = params.threshold_u if not isinstance(params, dict) else 4.0
    use_k = k if k is not None else record_k
    use_u = threshold_u if threshold_u is not None else record_u
    if detector == DETECTOR_SECRET:
        method = record.method if record.method in (METHOD_SWR, METHOD_SWOR) \
            else "secret-number-generic"
        return detect(record.completion, use_k, use_u, method=method)
    if detector == DETECTOR_MWM:
        vocab_size = parse_descriptor(record.lm_descriptor).get("vocab")
        if not isinstance(vocab_size, int):
            raise ValueError(f"cannot infer vocab size from {record.lm_descriptor!r}")
        record_gamma = params.gamma if isinstance(params, MwmParams) else 0.25
        mwm_params = MwmParams(
            gamma=gamma if gamma is not None else record_gamma,
            delta=0.0,
            k=use_k,
            threshold_u=use_u,
        )
        return mwm_detect(record.completion, mwm_params, vocab_size)
    raise ValueError(f"unknown detector {detector!r}")


def detect_rows(rows, detector: str = "auto", k: Optional[int] = None,
                threshold_u: Optional[float] = None, gamma: Optional[float] = None):
    """Per-record detection rows plus a summary row, from read_records() output."""
    out = []
    z_values = []
    hits = 0
    n_errors = 0
    for lineno, record, error in rows:
        if error is not None:
            n_errors += 1
            out.append({"row_type": "error", "record_id": f"line-{lineno}", "error": error})
            continue
        report = detect_record(record, _detector_for(record, detector),
                               k=k, threshold_u=threshold_u, gamma=gamma)
        z_values.append(report.z)
        hits += report.verdict == "watermarked"
        out.append({
            "row_type": "record",
            "record_id": record.id,
            "method": record.method,
            "detector": _detector_for(record, detector),
            "n_scored": report.n_scored,
            "sna": report.sna,
            "z": report.z,
            "threshold_u": report.threshold_u,
            "verdict": report.verdict,
        })
    summary = {
        "row_type": "summary",
        "n_samples": len(z_values),
        "n_errors": n_errors,
        "mean_z": (sum(z_values) / len(z_values)) if z_values else "",
        "detection_rate": (hits / len(z_values)) if z_values else "",
    }
    out.append(summary)
    return out, summary


def attack_records(records, rate_t: float, policy: str, master_seed: int,
                   lm=None) -> list[GenerationRecord]:
    """Attacked copies of ``records``: completions perturbed, ids kept for joining."""
    out = []
    for index, record in enumerate(records):
        vocab_size = parse_descriptor(record.lm_descriptor).get("vocab")
        if not isinstance(vocab_size, int):
            raise ValueError(f"cannot infer vocab size from {record.lm_descriptor!r}")
        params = AttackParams(rate_t=rate_t, policy=policy,
                              attack_seed=(master_seed + index) & MASK64)
        attacked = substitution_attack(record.completion, params, vocab_size, lm=lm)
        out.append(GenerationRecord(
            id=record.id,
            method=record.method,
            lm_descriptor=record.lm_descriptor,
            prompt=record.prompt,
            completion=attacked,
            params=dict(record.params),
            rng_seed=record.rng_seed,
            rng_algorithm=record.rng_algorithm,
            attack={"rate_t": rate_t, "policy": policy, "attack_seed": params.attack_seed},
        ))
    return out


def summarize_records(records, detector: str = "auto",
                      diversity_config: DiversityConfig = DiversityConfig()) -> dict:
    """Mean z, detection rate, and metric columns over a batch of records."""
    rows = [(i, r, None) for i, r in enumerate(records)]
    _, summary = detect_rows(rows, detector=detector)
    div_values = [diversity(r.completion, diversity_config) for r in records]
    summary = dict(summary)
    summary["mean_diversity"] = (sum(div_values) / len(div_values)) if div_values else ""
    if similarity_available():
        sims = [similarity_score(r.prompt, r.completion) for r in records]
        summary["mean_similarity"] = (sum(sims) / len(sims)) if sims else ""
    return summary


SWEEP_AXES = ("y", "temperature", "t")


def parse_axis_specs(specs: list[str]) -> dict:
    """Parse axis specs like "y=2,5,8,11" into an ordered {axis: values} dict."""
    axes: dict = {}
    for spec in specs:
        name, sep, values = spec.partition("=")
        name = name.strip()
        if name == "temp":
            name = "temperature"
        if not sep or name not in SWEEP_AXES:
            raise ValueError(f"invalid axis spec {spec!r}")
        try:
            parsed = [float(v) for v in values.split(",") if v.strip() != ""]
        except ValueError:
            raise ValueError(f"invalid axis spec {spec!r}") from None
        if not parsed:
            raise ValueError(f"invalid axis spec {spec!r}")
        if name == "y":
            axes[name] = [int(v) for v in parsed]
        else:
            axes[name] = parsed
    return axes


def run_sweep(lm, method: str, base_params, axes: dict, n: int, max_new: int,
              prompt_feed_factory, master_seed: int,
              attack_policy: str = "random_different") -> list[dict]:
    """Cartesian sweep: generate -> (attack) -> detect -> metrics per cell."""
    names = [a for a in SWEEP_AXES if a in axes]
    cells = list(itertools.product(*(axes[a] for a in names))) or [()]
    rows = []
    for cell_index, values in enumerate(cells):
        cell = dict(zip(names, values))
        params = _cell_params(method, base_params, cell)
        cell_seed = (master_seed + cell_index * n) & MASK64
        feed = prompt_feed_factory(cell_seed)
        records = generate_records(lm, method, params, n, max_new, feed, cell_seed)
        if "t" in cell:
            records = attack_records(records, cell["t"], attack_policy,
                                     (cell_seed ^ 0xA77AC4) & MASK64)
        summary = summarize_records(records)
        row = {
            "method": method,
            "y": cell.get("y", getattr(params, "y", "")),
            "temperature": cell.get("temperature", _params_temperature(params)),
            "attack_rate": cell.get("t", ""),
            "n_samples": summary["n_samples"],
            "mean_z": summary["mean_z"],
            "detection_rate": summary["detection_rate"],
            "mean_diversity": summary["mean_diversity"],
        }
        if "mean_similarity" in summary:
            row["mean_similarity"] = summary["mean_similarity"]
        rows.append(row)
    return rows


def _params_temperature(params) -> float:
    if isinstance(params, dict):
        return params["temperature"]
    return params.temperature


def _cell_params(method: str, base_params, cell: dict):
    if method in (METHOD_SWR, METHOD_SWOR):
        return WatermarkParams(
            y=cell.get("y", base_params.y),
            k=base_params.k,
            mode=base_params.mode,
            top_k=base_params.top_k,
            temperature=cell.get("temperature", base_params.temperature),
            threshold_u=base_params.threshold_u,
        )
    if method == METHOD_MWM:
        return MwmParams(
            gamma=base_params.gamma,
            delta=base_params.delta,
            k=base_params.k,
            top_k=base_params.top_k,
            temperature=cell.get("temperature", base_params.temperature),
            threshold_u=base_params.threshold_u,
        )
    if method == METHOD_NONE:
        params = dict(base_params)
        if "temperature" in cell:
            params["temperature"] = cell["temperature"]
        return params
    raise ValueError(f"unknown method {method!r}")


def write_csv(path, columns: list[str], rows: list[dict]) -> None:
    """RFC-4180 CSV with a fixed column set; missing keys become empty cells."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore",
                                lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: _format_cell(row.get(c, "")) for c in columns})


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def read_summary_csv(path) -> list[dict]:
    if not Path(path).exists():
        raise FileNotFoundError(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def aggregate_report(rows: list[dict]) -> list[dict]:
    """Order sweep/detect summary rows by (method, axis values) for the report table."""
    def sort_key(row):
        return (
            row.get("method", ""),
            _float_or_inf(row.get("y")),
            _float_or_inf(row.get("temperature")),
            _float_or_inf(row.get("attack_rate")),
        )

    return sorted(rows, key=sort_key)


def _float_or_inf(value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        return float("inf")


def svg_detection_chart(series: dict[str, list[tuple[float, float]]],
                        title: str = "Detection rate vs attack rate") -> str:
    """Self-contained SVG line chart; x ticks are the data's attack rates."""
    width, height = 640, 420
    left, right, top, bottom = 70, 20, 40, 50
    plot_w, plot_h = width - left - right, height - top - bottom
    xs = sorted({x for pts in series.values() for x, _ in pts})
    if not xs:
        xs = [0.0, 1.0]
    x_min, x_max = min(xs), max(xs)
    if x_max == x_min:
        x_max = x_min + 1.0

    def sx(x: float) -> float:
        return left + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y: float) -> float:
        return top + (1.0 - y) * plot_h

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{title}</text>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="black"/>',
    ]
    for x in xs:
        parts.append(
            f'<line x1="{sx(x):.1f}" y1="{top + plot_h}" x2="{sx(x):.1f}" '
            f'y2="{top + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{sx(x):.1f}" y="{top + plot_h + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{x:.6g}</text>'
        )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts.append(
            f'<line x1="{left - 5}" y1="{sy(frac):.1f}" x2="{left}" y2="{sy(frac):.1f}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 10}" y="{sy(frac) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{frac:.6g}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">attack rate</text>'
    )
    parts.append(
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.1f})">detection rate</text>'
    )
    for i, (name, points) in enumerate(sorted(series.items())):
        color = palette[i % len(palette)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in sorted(points))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        parts.append(
            f'<text x="{left + plot_w - 5}" y="{top + 16 + 16 * i}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
