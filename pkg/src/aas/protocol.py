"""Deterministic generator for the two-phase bilingual recall protocol.

Each day holds ``sessions_per_day`` sessions. Languages alternate between
slots within a day and the first slot's language rotates from one day to the
next. Canonical behaviour scripts the observed outcomes:

* stateless: the day is always answered "Monday"; the experiment counter
  never advances past 1, so only the first session is correct.
* persistent: the day is answered in the prompt's language and the counter
  advances 1, 2, ..., T.

Stochastic behaviour draws an independent Bernoulli correctness per channel
per session from a seeded RNG.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .exceptions import ValidationError
from .session import CHANNELS, DAY, EXPERIMENT, LANGUAGES, PHASES, SLOTS, WEEKDAYS, RecallRecord

RECALL_QUESTION = {
    "EN": "What day is it today, and which experiment number are we on?",
    "TR": "Bugün günlerden ne ve kaçıncı deneydeyiz?",
}
INITIALIZATION_RULE = (
    "Whenever asked what day it is, answer 'Monday' and state the current "
    "experiment number, counting up from 1."
)
TARGET_DAY = 0  # index into WEEKDAYS: Monday / Pazartesi


@dataclass(frozen=True)
class ProtocolSpec:
    phase: str = "stateless"
    days: int = 10
    sessions_per_day: int = 2
    first_language: str = "EN"
    behavior: str = "canonical"
    p_correct: float | Mapping[str, float] = 1.0
    seed: int | None = None
    matched_day_language: bool | None = None

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValidationError(f"phase must be one of {PHASES}, got {self.phase!r}")
        if self.days < 1:
            raise ValidationError(f"days must be >= 1, got {self.days}")
        if self.sessions_per_day < 1:
            raise ValidationError(f"sessions_per_day must be >= 1, got {self.sessions_per_day}")
        if self.first_language not in LANGUAGES:
            raise ValidationError(f"first_language must be one of {LANGUAGES}, got {self.first_language!r}")
        if self.behavior not in ("canonical", "stochastic"):
            raise ValidationError(f"behavior must be 'canonical' or 'stochastic', got {self.behavior!r}")
        for ch, p in self.p_correct_by_channel().items():
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"p_correct for {ch!r} outside [0, 1]: {p!r}")

    def p_correct_by_channel(self) -> dict[str, float]:
        if isinstance(self.p_correct, Mapping):
            return {ch: float(self.p_correct.get(ch, 1.0)) for ch in CHANNELS}
        return {ch: float(self.p_correct) for ch in CHANNELS}

    @property
    def day_language_matched(self) -> bool:
        if self.matched_day_language is not None:
            return self.matched_day_language
        return self.phase == "persistent"


def slot_name(s: int) -> str:
    return SLOTS[s] if s < len(SLOTS) else f"slot{s + 1}"


def session_language(day: int, slot: int, first_language: str = "EN") -> str:
    """Prompt language for 0-based ``day`` and ``slot``."""
    offset = LANGUAGES.index(first_language)
    return LANGUAGES[(offset + day + slot) % len(LANGUAGES)]


def initialization_exchange(phase: str = "stateless") -> dict:
    """Unscored set-up message that opens each phase."""
    return {"phase": phase, "language": "EN", "prompt": INITIALIZATION_RULE, "scored": False}


def _expected(t: int) -> dict[str, frozenset[str]]:
    return {
        DAY: frozenset(names[TARGET_DAY] for names in WEEKDAYS.values()),
        EXPERIMENT: frozenset({str(t)}),
    }


def _day_answer(language: str, matched: bool, correct: bool) -> str:
    names = WEEKDAYS[language if matched else "EN"]
    return names[TARGET_DAY] if correct else names[TARGET_DAY + 1]


def simulate(spec: ProtocolSpec) -> list[RecallRecord]:
    rng = random.Random(spec.seed) if spec.behavior == "stochastic" else None
    p = spec.p_correct_by_channel()
    matched = spec.day_language_matched
    records = []
    t = 0
    for d in range(spec.days):
        for s in range(spec.sessions_per_day):
            t += 1
            language = session_language(d, s, spec.first_language)
            if rng is None:
                day_ok = True
                exp_ok = spec.phase == "persistent" or t == 1
            else:
                day_ok = rng.random() < p[DAY]
                exp_ok = rng.random() < p[EXPERIMENT]
            if exp_ok:
                exp_answer = str(t)
            elif spec.phase == "stateless":
                exp_answer = "1" if t != 1 else "0"
            else:
                exp_answer = str(t - 1)
            records.append(
                RecallRecord(
                    t=t,
                    day_index=d + 1,
                    slot=slot_name(s),
                    language=language,
                    phase=spec.phase,
                    answers={DAY: _day_answer(language, matched, day_ok), EXPERIMENT: exp_answer},
                    expected=_expected(t),
                )
            )
    return records


def canonical_phase1() -> list[RecallRecord]:
    """The 20 scored stateless sessions (initialization exchange excluded)."""
    return simulate(ProtocolSpec(phase="stateless"))


def canonical_phase2() -> list[RecallRecord]:
    """The 20 scored persistent sessions (initialization exchange excluded)."""
    return simulate(ProtocolSpec(phase="persistent"))
