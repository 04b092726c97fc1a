"""Grading recall transcripts, scoring sessions and aggregating phases."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .exceptions import ValidationError
from .info_theory import empirical_distribution, normalize_symbol, redundancy as dist_redundancy
from .kernel import DEFAULT_EPSILON, KernelConfig
from .score import WEIGHT_TOLERANCE, ChannelObservation, SessionScore, aas

DAY = "day"
EXPERIMENT = "experiment"
CHANNELS = (DAY, EXPERIMENT)

SLOTS = ("afternoon", "night")
LANGUAGES = ("EN", "TR")
PHASES = ("stateless", "persistent")

WEEKDAYS = {
    "EN": ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"),
    "TR": ("Pazartesi", "Salı", "Çarşamba", "Perşembe", "Cuma", "Cumartesi", "Pazar"),
}

REDUNDANCY_MODES = ("neutral", "explicit", "empirical")


@dataclass
class RecallRecord:
    """One scored session of the recall protocol.

    Either ``answers`` + ``expected`` are given for every channel, or
    ``recall`` holds precomputed scores. ``redundancy`` optionally carries
    per-channel R values used in explicit redundancy mode.
    """

    t: int
    day_index: int = 1
    slot: str = "afternoon"
    language: str = "EN"
    phase: str = "stateless"
    answers: dict[str, str] = field(default_factory=dict)
    expected: dict[str, frozenset[str]] = field(default_factory=dict)
    recall: dict[str, float] | None = None
    redundancy: dict[str, float] | None = None
    line: int | None = None

    def __post_init__(self):
        if self.recall is not None:
            if self.answers or self.expected:
                raise ValidationError(f"session {self.t}: give raw answers or precomputed recall, not both")
            for ch in CHANNELS:
                if ch not in self.recall:
                    raise ValidationError(f"session {self.t}: missing precomputed recall for channel {ch!r}")
            return
        self.expected = {ch: frozenset(v) for ch, v in self.expected.items()}
        for ch in CHANNELS:
            if ch not in self.answers:
                raise ValidationError(f"session {self.t}: missing answer for channel {ch!r}")
            if ch not in self.expected:
                raise ValidationError(f"session {self.t}: missing expected answers for channel {ch!r}")
            if not self.expected[ch]:
                raise ValidationError(f"session {self.t}: empty expected set for channel {ch!r}")


@dataclass(frozen=True)
class ScoreConfig:
    """How sessions are turned into channel observations.

    ``k`` engages the single-channel reduction: the experiment channel carries
    weight ``k`` (which already absorbs its redundancy) and the day channel
    weight 0. It cannot be combined with explicit ``weights``.
    """

    epsilon: float = DEFAULT_EPSILON
    weights: Mapping[str, float] | None = None
    redundancy_mode: str = "neutral"
    redundancy_values: Mapping[str, float] | None = None
    outcome_counts: Mapping[str, int] | None = None
    k: float | None = None
    strict_language: bool = False

    def __post_init__(self):
        if self.redundancy_mode not in REDUNDANCY_MODES:
            raise ValidationError(
                f"redundancy mode must be one of {REDUNDANCY_MODES}, got {self.redundancy_mode!r}"
            )
        if self.k is not None:
            if self.weights is not None:
                raise ValidationError("k and explicit weights are mutually exclusive")
            if not 0.0 < self.k <= 1.0:
                raise ValidationError(f"k must lie in (0, 1], got {self.k!r}")
        if self.weights is not None:
            unknown = set(self.weights) - set(CHANNELS)
            if unknown:
                raise ValidationError(f"unknown channels in weights: {sorted(unknown)}")
            if any(w < 0 for w in self.weights.values()):
                raise ValidationError("channel weights must be nonnegative")
            total = math.fsum(self.weights.get(ch, 0.0) for ch in CHANNELS)
            if abs(total - 1.0) > WEIGHT_TOLERANCE:
                raise ValidationError(f"channel weights must sum to 1, got {total!r}")
        for ch, r in (self.redundancy_values or {}).items():
            if not 0.0 <= r <= 1.0:
                raise ValidationError(f"redundancy for {ch!r} outside [0, 1]: {r!r}")

    @cached_property
    def kernel(self) -> KernelConfig:
        return KernelConfig(self.epsilon)

    def channel_weights(self) -> dict[str, float]:
        if self.k is not None:
            return {DAY: 0.0, EXPERIMENT: float(self.k)}
        if self.weights is None:
            return {DAY: 0.5, EXPERIMENT: 0.5}
        return {ch: float(self.weights.get(ch, 0.0)) for ch in CHANNELS}


@dataclass(frozen=True)
class PhaseSummary:
    count: int
    mean: float
    median: float
    min: float
    max: float
    total: float
    per_channel_mean: dict[str, float]
    proportion_correct: dict[str, float]


def _accepted(record: RecallRecord, channel: str, strict_language: bool) -> set[str]:
    accepted = {normalize_symbol(s) for s in record.expected[channel]}
    if strict_language and channel == DAY:
        native = {normalize_symbol(s) for s in WEEKDAYS.get(record.language, ())}
        accepted &= native
    return accepted


def grade(record: RecallRecord, *, strict_language: bool = False) -> dict[str, float]:
    """Map each channel to recall 1 (answer accepted) or 0 (incorrect).

    Answers are compared trimmed and case-folded. In strict-language mode the
    day answer must also be a weekday name in the prompt's language.
    """
    if record.recall is not None:
        return {ch: float(record.recall[ch]) for ch in CHANNELS}
    out = {}
    for ch in CHANNELS:
        if ch not in record.answers or ch not in record.expected:
            raise ValidationError(f"session {record.t}: missing channel {ch!r}")
        answer = normalize_symbol(record.answers[ch])
        out[ch] = 1.0 if answer in _accepted(record, ch, strict_language) else 0.0
    return out


def _record_redundancy(record: RecallRecord, cfg: ScoreConfig) -> dict[str, float]:
    if cfg.redundancy_mode == "neutral" or cfg.k is not None:
        return {ch: 0.0 for ch in CHANNELS}
    if cfg.redundancy_mode == "explicit":
        out = {}
        for ch in CHANNELS:
            if record.redundancy and ch in record.redundancy:
                out[ch] = float(record.redundancy[ch])
            elif cfg.redundancy_values and ch in cfg.redundancy_values:
                out[ch] = float(cfg.redundancy_values[ch])
            else:
                raise ValidationError(
                    f"session {record.t}: explicit redundancy mode but no value for channel {ch!r}"
                )
        return out
    raise ValidationError(
        "empirical redundancy is measured across a phase; use score_phase or pass redundancy="
    )


def empirical_redundancy(records: Sequence[RecallRecord], cfg: ScoreConfig | None = None) -> dict[str, float]:
    """Per-channel redundancy of the observed answers across a whole phase."""
    counts = (cfg.outcome_counts if cfg else None) or {}
    out = {}
    for ch in CHANNELS:
        answers = [r.answers[ch] for r in records if r.recall is None]
        if not answers:
            raise ValidationError(f"no raw answers for channel {ch!r}; cannot measure redundancy")
        out[ch] = dist_redundancy(empirical_distribution(answers, counts.get(ch)))
    return out


def score_session(
    record: RecallRecord,
    cfg: ScoreConfig | None = None,
    *,
    redundancy: Mapping[str, float] | None = None,
) -> SessionScore:
    """Grade one record and score it; ``redundancy`` overrides the configured mode."""
    cfg = cfg or ScoreConfig()
    x = grade(record, strict_language=cfg.strict_language)
    r = dict(redundancy) if redundancy is not None else _record_redundancy(record, cfg)
    weights = cfg.channel_weights()
    observations = [
        ChannelObservation(recall=x[ch], weight=weights[ch], redundancy=r[ch], label=ch)
        for ch in CHANNELS
    ]
    return aas(observations, cfg.kernel, simplex=cfg.k is None)


def score_phase(records: Sequence[RecallRecord], cfg: ScoreConfig | None = None) -> list[SessionScore]:
    cfg = cfg or ScoreConfig()
    redundancy = None
    if cfg.redundancy_mode == "empirical" and cfg.k is None:
        redundancy = empirical_redundancy(records, cfg)
    return [score_session(r, cfg, redundancy=redundancy) for r in records]


def aggregate(scores: Sequence[SessionScore]) -> PhaseSummary:
    """Mean, median, min, max and total of session totals, plus per-channel views.

    Even counts take the mean of the two middle order statistics as median.
    ``proportion_correct`` counts sessions whose channel recall is exactly 1.
    """
    if not scores:
        raise ValidationError("cannot aggregate an empty list of sessions")
    totals = [s.total for s in scores]
    count = len(totals)
    total = math.fsum(totals)
    labels = [t.label for t in scores[0].terms]
    per_channel = {}
    correct = {}
    for label in labels:
        terms = [s.by_channel()[label] for s in scores]
        per_channel[label] = math.fsum(t.weighted for t in terms) / count
        correct[label] = sum(1 for t in terms if t.recall == 1.0) / count
    return PhaseSummary(
        count=count,
        mean=total / count,
        median=statistics.median(totals),
        min=min(totals),
        max=max(totals),
        total=total,
        per_channel_mean=per_channel,
        proportion_correct=correct,
    )


def expected_mean(p_correct: float, k: float, cfg: KernelConfig | None = None) -> float:
    """Mean session score when a fraction ``p_correct`` of sessions is correct: ``(1 - p) k M``."""
    if not 0.0 <= p_correct <= 1.0:
        raise ValidationError(f"p_correct must lie in [0, 1], got {p_correct!r}")
    if not 0.0 <= k <= 1.0:
        raise ValidationError(f"k must lie in [0, 1], got {k!r}")
    cfg = cfg or KernelConfig()
    return (1.0 - p_correct) * k * cfg.sup_penalty
