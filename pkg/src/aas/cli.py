"""Command line interface: ``aas score | simulate | verify | report``.

Exit codes: 0 success, 1 property failure, 2 usage error, 3 record parse
error, 4 validation error, 5 I/O error. ``AAS_EPSILON`` in the environment
sets the default smoothing constant; ``--epsilon`` wins over it.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys

from .exceptions import RecordParseError, ValidationError
from .kernel import DEFAULT_EPSILON, KernelConfig
from .properties import run_suite
from .protocol import ProtocolSpec, simulate
from .records import dump_records, parse_records
from .session import CHANNELS, DAY, EXPERIMENT, ScoreConfig, aggregate, grade, score_phase

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_IO = 5

REPORT_COLUMNS = ("t", "day_index", "slot", "language", "day_x", "exp_x", "aas_total", "running_total")

log = logging.getLogger("aas")


def fmt(value: float) -> str:
    return f"{value:.7f}"


def _channel_values(text: str) -> dict[str, float]:
    out = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or name not in CHANNELS:
            raise argparse.ArgumentTypeError(f"expected day=<v>,experiment=<v>, got {text!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    return out


def _default_epsilon() -> float:
    env = os.environ.get("AAS_EPSILON")
    if env:
        try:
            return float(env)
        except ValueError:
            log.warning("ignoring non-numeric AAS_EPSILON=%r", env)
    return DEFAULT_EPSILON


def _add_scoring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="JSON Lines session log ('-' for stdin)")
    p.add_argument("--epsilon", type=float, default=None, help="kernel smoothing constant (default 1e-6)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--weights", type=_channel_values, help="channel weights, e.g. day=0.5,experiment=0.5")
    group.add_argument("--k", type=float, help="single-channel reduction k = w_exp (1 - R_exp)")
    p.add_argument("--redundancy", choices=("neutral", "explicit", "empirical"), default="neutral")
    p.add_argument("--redundancy-values", type=_channel_values, help="explicit per-channel R values")
    p.add_argument("--outcome-counts", type=_channel_values, help="outcome space sizes for empirical redundancy")
    p.add_argument("--strict-language", action="store_true", help="day answer must match the prompt language")


def _score_config(args) -> ScoreConfig:
    epsilon = args.epsilon if args.epsilon is not None else _default_epsilon()
    counts = {ch: int(v) for ch, v in args.outcome_counts.items()} if args.outcome_counts else None
    return ScoreConfig(
        epsilon=epsilon,
        weights=args.weights,
        redundancy_mode=args.redundancy,
        redundancy_values=args.redundancy_values,
        outcome_counts=counts,
        k=args.k,
        strict_language=args.strict_language,
    )


def _read_records(path: str):
    if path == "-":
        return parse_records(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return parse_records(fh)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def summary_text(summary, cfg: ScoreConfig) -> str:
    mode = "k-reduction (k={:g})".format(cfg.k) if cfg.k is not None else cfg.redundancy_mode
    lines = [
        f"sessions:   {summary.count}",
        f"redundancy: {mode}",
        f"epsilon:    {cfg.epsilon:g}",
        f"mean:       {fmt(summary.mean)}",
        f"median:     {fmt(summary.median)}",
        f"min:        {fmt(summary.min)}",
        f"max:        {fmt(summary.max)}",
        f"total:      {fmt(summary.total)}",
    ]
    for ch, value in summary.per_channel_mean.items():
        lines.append(f"channel {ch}: mean {fmt(value)}  p_correct {fmt(summary.proportion_correct[ch])}")
    return "\n".join(lines) + "\n"


def cmd_score(args) -> int:
    cfg = _score_config(args)
    records = _read_records(args.input)
    summary = aggregate(score_phase(records, cfg))
    sys.stdout.write(summary_text(summary, cfg))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("statistic", "value"))
            writer.writerow(("count", summary.count))
            for stat in ("mean", "median", "min", "max", "total"):
                writer.writerow((stat, fmt(getattr(summary, stat))))
            for ch, value in summary.per_channel_mean.items():
                writer.writerow((f"mean_{ch}", fmt(value)))
                writer.writerow((f"p_correct_{ch}", fmt(summary.proportion_correct[ch])))
    return EXIT_OK


def cmd_simulate(args) -> int:
    p_correct = args.p_correct
    if args.p_correct_day is not None:
        p_correct = {DAY: args.p_correct_day, EXPERIMENT: 1.0 if p_correct is None else p_correct}
    spec = ProtocolSpec(
        phase=args.phase,
        days=args.days,
        sessions_per_day=args.sessions_per_day,
        first_language=args.first_language,
        behavior="canonical" if p_correct is None else "stochastic",
        p_correct=1.0 if p_correct is None else p_correct,
        seed=args.seed,
        matched_day_language=args.matched_day_language,
    )
    out, close = _open_out(args.output)
    try:
        dump_records(simulate(spec), out)
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    epsilon = args.epsilon if args.epsilon is not None else _default_epsilon()
    results = run_suite(samples=args.samples, seed=args.seed, cfg=KernelConfig(epsilon))
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    return EXIT_PROPERTY_FAILURE if failed else EXIT_OK


def report_csv(records, scores, cfg: ScoreConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    running = 0.0
    for record, s in zip(records, scores):
        running += s.total
        x = grade(record, strict_language=cfg.strict_language)
        writer.writerow(
            (record.t, record.day_index, record.slot, record.language,
             f"{x[DAY]:g}", f"{x[EXPERIMENT]:g}", fmt(s.total), fmt(running))
        )
    return buf.getvalue()


def cmd_report(args) -> int:
    cfg = _score_config(args)
    records = _read_records(args.input)
    text = report_csv(records, score_phase(records, cfg), cfg)
    out, close = _open_out(args.output)
    try:
        out.write(text)
    finally:
        if close:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aas", description="Artificial Age Score metrology")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a session log and print phase statistics")
    _add_scoring_flags(p)
    p.add_argument("--csv", help="also write the summary as CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", help="generate protocol session records")
    p.add_argument("--phase", choices=("stateless", "persistent"), required=True)
    p.add_argument("--canonical", action="store_true", help="scripted outcomes (default unless --p-correct)")
    p.add_argument("--p-correct", type=float, help="stochastic mode: per-session correctness probability")
    p.add_argument("--p-correct-day", type=float, help="override p-correct for the day channel")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=10)
    p.add_argument("--sessions-per-day", type=int, default=2)
    p.add_argument("--first-language", choices=("EN", "TR"), default="EN")
    p.add_argument("--matched-day-language", action=argparse.BooleanOptionalAction, default=None,
                   help="answer the day in the prompt's language (default: only in persistent phase)")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="write the per-session AAS trajectory as CSV")
    _add_scoring_flags(p)
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "canonical", False) and args.p_correct is not None:
        parser.error("--canonical and --p-correct are mutually exclusive")
    try:
        return args.func(args)
    except RecordParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
