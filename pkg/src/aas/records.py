"""JSON Lines serialization of session records.

One JSON object per line::

    {"t": 2, "day_index": 1, "slot": "night", "language": "TR", "phase": "stateless",
     "answers": {"day": "Monday", "experiment": "1"},
     "expected": {"day": ["Monday", "Pazartesi"], "experiment": ["2"]}}

Instead of ``answers``/``expected`` a line may carry precomputed recall scores
under ``"x"`` (and optionally per-channel redundancy under ``"R"``) for every
channel. Mixing the two forms in one line is an error. Unknown keys are
ignored with a logged warning.
"""

from __future__ import annotations

import json
import logging
from typing import IO, Iterable

from .exceptions import RecordParseError, ValidationError
from .session import CHANNELS, RecallRecord

logger = logging.getLogger(__name__)

KNOWN_FIELDS = {"t", "day_index", "slot", "language", "phase", "answers", "expected", "x", "R"}


def _channel_map(obj: dict, key: str, lineno: int, *, numeric: bool = False) -> dict:
    value = obj[key]
    if not isinstance(value, dict):
        raise RecordParseError(f"{key!r} must be an object keyed by channel", lineno)
    for ch in CHANNELS:
        if ch not in value:
            raise RecordParseError(f"{key!r} is missing channel {ch!r}", lineno)
    if numeric:
        for ch, v in value.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise RecordParseError(f"{key}[{ch!r}] must be a number, got {v!r}", lineno)
    return value


def record_from_dict(obj: dict, lineno: int | None = None) -> RecallRecord:
    if not isinstance(obj, dict):
        raise RecordParseError("expected a JSON object", lineno)
    unknown = set(obj) - KNOWN_FIELDS
    if unknown:
        logger.warning("line %s: ignoring unknown fields %s", lineno, sorted(unknown))
    t = obj.get("t")
    if isinstance(t, bool) or not isinstance(t, int) or t < 1:
        raise RecordParseError(f"'t' must be a positive integer, got {t!r}", lineno)

    raw = "answers" in obj or "expected" in obj
    pre = "x" in obj
    if raw and pre:
        raise RecordParseError("record mixes raw answers with precomputed 'x' values", lineno)
    if not raw and not pre:
        raise RecordParseError("record has neither answers/expected nor precomputed 'x'", lineno)

    common = dict(
        t=t,
        day_index=obj.get("day_index", 1),
        slot=obj.get("slot", "afternoon"),
        language=obj.get("language", "EN"),
        phase=obj.get("phase", "stateless"),
        line=lineno,
    )
    if "R" in obj:
        common["redundancy"] = {ch: float(v) for ch, v in _channel_map(obj, "R", lineno, numeric=True).items()}
    try:
        if pre:
            x = _channel_map(obj, "x", lineno, numeric=True)
            return RecallRecord(recall={ch: float(v) for ch, v in x.items()}, **common)
        for key in ("answers", "expected"):
            if key not in obj:
                raise RecordParseError(f"raw record is missing {key!r}", lineno)
        answers = _channel_map(obj, "answers", lineno)
        expected = _channel_map(obj, "expected", lineno)
        expected = {ch: [v] if isinstance(v, str) else v for ch, v in expected.items()}
        if not all(isinstance(v, list) for v in expected.values()):
            raise RecordParseError("'expected' values must be strings or lists of strings", lineno)
        return RecallRecord(
            answers={ch: str(v) for ch, v in answers.items()},
            expected={ch: frozenset(str(s) for s in v) for ch, v in expected.items()},
            **common,
        )
    except ValidationError as exc:
        raise RecordParseError(str(exc), lineno) from None


def record_to_dict(record: RecallRecord) -> dict:
    out = {
        "t": record.t,
        "day_index": record.day_index,
        "slot": record.slot,
        "language": record.language,
        "phase": record.phase,
    }
    if record.recall is not None:
        out["x"] = {ch: record.recall[ch] for ch in CHANNELS}
    else:
        out["answers"] = {ch: record.answers[ch] for ch in CHANNELS}
        out["expected"] = {ch: sorted(record.expected[ch]) for ch in CHANNELS}
    if record.redundancy is not None:
        out["R"] = {ch: record.redundancy[ch] for ch in CHANNELS if ch in record.redundancy}
    return out


def parse_records(stream: IO[str] | Iterable[str]) -> list[RecallRecord]:
    """Read records in line order; blank lines are skipped but still counted."""
    records = []
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordParseError(f"invalid JSON: {exc.msg}", lineno) from None
        records.append(record_from_dict(obj, lineno))
    if not records:
        raise RecordParseError("no records")
    return records


def dump_records(records: Iterable[RecallRecord], stream: IO[str]) -> None:
    for record in records:
        stream.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
