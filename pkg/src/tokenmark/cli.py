"""Command-line front end: generate, detect, attack, sweep, report.

Exit codes: 0 success, 1 usage error, 2 data error (bad or missing files).
"""

import argparse
import sys
from pathlib import Path

from .core import WITH_REPLACEMENT, WITHOUT_REPLACEMENT, WatermarkParams
from .errors import GenerationError
from .greenlist import MwmParams
from .harness import (
    DETECT_CSV_COLUMNS,
    DETECTOR_MWM,
    DETECTOR_SECRET,
    SWEEP_CSV_COLUMNS,
    aggregate_report,
    attack_records,
    build_lm,
    corpus_prompt_feed,
    detect_rows,
    generate_records,
    parse_axis_specs,
    read_summary_csv,
    run_sweep,
    svg_detection_chart,
    synthetic_prompt_feed,
    write_csv,
)
from .records import (
    METHOD_MWM,
    METHOD_NONE,
    METHOD_SWOR,
    METHOD_SWR,
    METHODS,
    read_records,
    write_records,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract wants 1
    def error(self, message):
        raise UsageError(message)


def _add_lm_flags(parser):
    parser.add_argument("--lm", choices=["synthetic", "ngram"], default="synthetic")
    parser.add_argument("--vocab", type=int, default=1000, help="synthetic vocabulary size")
    parser.add_argument("--concentration", type=float, default=8.0,
                        help="synthetic entropy knob; larger is flatter")
    parser.add_argument("--order", type=int, default=1, help="synthetic context order")
    parser.add_argument("--model-seed", type=int, default=0)
    parser.add_argument("--corpus", type=Path, default=None, help="corpus for the ngram model")
    parser.add_argument("--ngram-order", type=int, default=3)
    parser.add_argument("--alpha", type=float, default=0.1, help="ngram smoothing constant")


def _add_method_flags(parser):
    parser.add_argument("--method", choices=list(METHODS), default=METHOD_SWOR)
    parser.add_argument("--y", type=int, default=5, help="candidate sampling count")
    parser.add_argument("--k", type=int, default=1, help="context window size")
    parser.add_argument("--top-k", type=int, default=40, dest="top_k")
    parser.add_argument("--temp", type=float, default=1.0)
    parser.add_argument("--gamma", type=float, default=0.25)
    parser.add_argument("--delta", type=float, default=2.0)
    parser.add_argument("--threshold", type=float, default=4.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tokenmark",
                     description="Sampling watermark toolkit for token streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate watermarked (or plain) records")
    _add_lm_flags(p)
    _add_method_flags(p)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--max-new", type=int, default=200, dest="max_new")
    p.add_argument("--prompt-len", type=int, default=100, dest="prompt_len")
    p.add_argument("--seed", type=int, default=0, help="master seed; record i uses seed+i")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="run a detector over a JSONL record file")
    p.add_argument("--in", type=Path, required=True, dest="in_path")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--detector", choices=["auto", DETECTOR_SECRET, DETECTOR_MWM],
                   default="auto")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("attack", help="apply the substitution attack to records")
    _add_lm_flags(p)
    p.add_argument("--in", type=Path, required=True, dest="in_path")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--rate", type=float, required=True, help="fraction of tokens to replace")
    p.add_argument("--policy", choices=["random_different", "lm_proposal"],
                   default="random_different")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("sweep", help="cartesian parameter sweep with one summary row per cell")
    _add_lm_flags(p)
    _add_method_flags(p)
    p.add_argument("--axes", action="append", required=True,
                   help="axis spec, e.g. y=2,5,8,11 / temp=0.8,1.0,1.2 / t=0.1,0.2")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--max-new", type=int, default=200, dest="max_new")
    p.add_argument("--prompt-len", type=int, default=100, dest="prompt_len")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attack-policy", choices=["random_different", "lm_proposal"],
                   default="random_different", dest="attack_policy")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="aggregate summary CSVs; optionally render an SVG chart")
    p.add_argument("--in", type=Path, action="append", required=True, dest="in_paths")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--chart", type=Path, default=None, help="write an SVG detection-rate chart")
    p.set_defaults(func=cmd_report)

    return parser


def _method_params(args):
    if args.method in (METHOD_SWR, METHOD_SWOR):
        mode = WITH_REPLACEMENT if args.method == METHOD_SWR else WITHOUT_REPLACEMENT
        return WatermarkParams(y=args.y, k=args.k, mode=mode, top_k=args.top_k,
                               temperature=args.temp, threshold_u=args.threshold)
    if args.method == METHOD_MWM:
        return MwmParams(gamma=args.gamma, delta=args.delta, k=args.k, top_k=args.top_k,
                         temperature=args.temp, threshold_u=args.threshold)
    if args.method == METHOD_NONE:
        return {"top_k": args.top_k, "temperature": args.temp}
    raise UsageError(f"unknown method {args.method!r}")


def _build_lm(args):
    try:
        return build_lm(args.lm, vocab_size=args.vocab, order=args.order,
                        concentration=args.concentration, model_seed=args.model_seed,
                        corpus_path=args.corpus, ngram_order=args.ngram_order,
                        alpha=args.alpha)
    except FileNotFoundError as exc:
        raise DataError(f"corpus not found: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _prompt_feed_factory(args, lm, corpus_ids):
    if corpus_ids is None:
        return lambda seed: synthetic_prompt_feed(lm.vocab_size, args.prompt_len, seed)
    return lambda seed: corpus_prompt_feed(corpus_ids, args.prompt_len)


def cmd_generate(args) -> int:
    lm, corpus_ids = _build_lm(args)
    params = _method_params(args)
    feed = _prompt_feed_factory(args, lm, corpus_ids)(args.seed)
    failures: list = []
    try:
        records = generate_records(lm, args.method, params, args.n, args.max_new,
                                   feed, args.seed, failures=failures)
    except (GenerationError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    for attempt, seed, message in failures:
        print(f"generation attempt {attempt} (seed {seed}) failed: {message}",
              file=sys.stderr)
    write_records(args.out, records)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _read_records_or_fail(path):
    if not Path(path).exists():
        raise DataError(f"input file not found: {path}")
    return read_records(path)


def cmd_detect(args) -> int:
    rows = _read_records_or_fail(args.in_path)
    try:
        out_rows, summary = detect_rows(rows, detector=args.detector, k=args.k,
                                        threshold_u=args.threshold, gamma=args.gamma)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    write_csv(args.out, DETECT_CSV_COLUMNS, out_rows)
    print(f"scored {summary['n_samples']} records "
          f"({summary['n_errors']} errors) -> {args.out}")
    return EXIT_OK


def cmd_attack(args) -> int:
    rows = _read_records_or_fail(args.in_path)
    records = [r for _, r, err in rows if err is None]
    bad = len(rows) - len(records)
    if bad:
        print(f"skipping {bad} malformed input lines", file=sys.stderr)
    lm = None
    if args.policy == "lm_proposal":
        lm, _ = _build_lm(args)
    try:
        attacked = attack_records(records, args.rate, args.policy, args.seed, lm=lm)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    write_records(args.out, attacked)
    print(f"wrote {len(attacked)} attacked records to {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        axes = parse_axis_specs(args.axes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    lm, corpus_ids = _build_lm(args)
    params = _method_params(args)
    factory = _prompt_feed_factory(args, lm, corpus_ids)
    try:
        rows = run_sweep(lm, args.method, params, axes, args.n, args.max_new,
                         factory, args.seed, attack_policy=args.attack_policy)
    except (GenerationError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    columns = list(SWEEP_CSV_COLUMNS)
    if rows and "mean_similarity" in rows[0]:
        columns.append("mean_similarity")
    write_csv(args.out, columns, rows)
    print(f"wrote {len(rows)} sweep cells to {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    rows = []
    for path in args.in_paths:
        try:
            rows.extend(read_summary_csv(path))
        except FileNotFoundError:
            raise DataError(f"input file not found: {path}") from None
    table = aggregate_report(rows)
    columns = list(SWEEP_CSV_COLUMNS)
    extra = [c for row in table for c in row.keys() if c not in columns]
    columns.extend(dict.fromkeys(extra))
    write_csv(args.out, columns, table)
    if args.chart is not None:
        series: dict = {}
        for row in table:
            rate = row.get("attack_rate", "")
            if rate in ("", None):
                continue
            series.setdefault(row.get("method", "?"), []).append(
                (float(rate), float(row["detection_rate"]))
            )
        Path(args.chart).write_text(svg_detection_chart(series), encoding="utf-8")
        print(f"wrote chart to {args.chart}")
    print(f"wrote report with {len(table)} rows to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
