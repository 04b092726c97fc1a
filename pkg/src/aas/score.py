"""Redundancy-adjusted Artificial Age Score for a single session.

For channels ``i`` with recall ``x_i``, redundancy ``R_i`` and weight ``w_i``::

    AAS = sum_i w_i * a_i,    a_i = (1 - R_i) * phi(x_i)

The unweighted coefficient ``a_i`` is kept separately from the weighted term
because weight transfers on the simplex change the score by ``delta * (a_i - a_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

from .exceptions import ValidationError
from .kernel import DEFAULT_KERNEL, KernelConfig, phi

WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ChannelObservation:
    """One scored dimension of a session."""

    recall: float
    weight: float
    redundancy: float = 0.0
    label: str = ""

    def __post_init__(self):
        for name in ("recall", "weight", "redundancy"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValidationError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.recall <= 1.0:
            raise ValidationError(f"recall {self.recall!r} outside [0, 1] ({self.label or 'unlabelled'})")
        if not 0.0 <= self.redundancy <= 1.0:
            raise ValidationError(
                f"redundancy {self.redundancy!r} outside [0, 1] ({self.label or 'unlabelled'})"
            )
        if self.weight < 0.0:
            raise ValidationError(f"weight {self.weight!r} is negative ({self.label or 'unlabelled'})")


@dataclass(frozen=True)
class TermContribution:
    label: str
    recall: float
    redundancy: float
    weight: float
    a: float
    weighted: float


@dataclass(frozen=True)
class SessionScore:
    """Session total with its per-channel terms and running partial sums ``S_0..S_m``."""

    total: float
    terms: tuple[TermContribution, ...]
    partials: tuple[float, ...]

    def by_channel(self) -> dict[str, TermContribution]:
        return {t.label: t for t in self.terms}

    @property
    def a(self) -> tuple[float, ...]:
        return tuple(t.a for t in self.terms)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(t.weight for t in self.terms)


class ScoreBounds(NamedTuple):
    lower: float
    conditional_upper: float
    global_upper: float


class PartitionScore(NamedTuple):
    subtotals: tuple[float, ...]
    total: float


def check_simplex(observations: Sequence[ChannelObservation]) -> float:
    total = math.fsum(o.weight for o in observations)
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise ValidationError(f"channel weights must sum to 1, got {total!r}")
    return total


def term(obs: ChannelObservation, cfg: KernelConfig = DEFAULT_KERNEL) -> TermContribution:
    a = (1.0 - obs.redundancy) * phi(obs.recall, cfg)
    return TermContribution(
        label=obs.label,
        recall=obs.recall,
        redundancy=obs.redundancy,
        weight=obs.weight,
        a=a,
        weighted=obs.weight * a,
    )


def aas_incremental(
    previous: float, next_obs: ChannelObservation, cfg: KernelConfig = DEFAULT_KERNEL
) -> float:
    """Advance a running score by one channel: ``S_m = S_{m-1} + w_m a_m``."""
    previous = float(previous)
    if not math.isfinite(previous) or previous < 0:
        raise ValidationError(f"partial score must be finite and >= 0, got {previous!r}")
    return previous + term(next_obs, cfg).weighted


def aas(
    observations: Sequence[ChannelObservation],
    cfg: KernelConfig = DEFAULT_KERNEL,
    *,
    simplex: bool = True,
) -> SessionScore:
    """Score one session.

    With ``simplex=False`` the weights are only required to be nonnegative;
    the bounds in terms of ``M(eps)`` then scale with the weight sum.
    """
    observations = list(observations)
    if not observations:
        raise ValidationError("a session needs at least one channel observation")
    if simplex:
        check_simplex(observations)
    terms = []
    partials = [0.0]
    for obs in observations:
        t = term(obs, cfg)
        terms.append(t)
        partials.append(partials[-1] + t.weighted)
    return SessionScore(total=partials[-1], terms=tuple(terms), partials=tuple(partials))


def _check_partition(grouping: Sequence[Sequence[int]], m: int) -> None:
    seen: set[int] = set()
    for group in grouping:
        for idx in group:
            if not isinstance(idx, int) or not 0 <= idx < m:
                raise ValidationError(f"channel index {idx!r} outside 0..{m - 1}")
            if idx in seen:
                raise ValidationError(f"channel index {idx} appears in more than one group")
            seen.add(idx)
    missing = set(range(m)) - seen
    if missing:
        raise ValidationError(f"grouping does not cover channels {sorted(missing)}")


def partition_score(
    observations: Sequence[ChannelObservation],
    grouping: Sequence[Sequence[int]],
    cfg: KernelConfig = DEFAULT_KERNEL,
    *,
    simplex: bool = True,
) -> PartitionScore:
    """Per-group subtotals of the weighted terms, plus the ungrouped session total."""
    score = aas(observations, cfg, simplex=simplex)
    _check_partition(grouping, len(score.terms))
    subtotals = tuple(math.fsum(score.terms[i].weighted for i in group) for group in grouping)
    return PartitionScore(subtotals=subtotals, total=score.total)


def bounds(
    cfg: KernelConfig, observations: Sequence[ChannelObservation], *, simplex: bool = True
) -> ScoreBounds:
    """``0 <= AAS <= M * sum w_i (1 - R_i) <= M`` (the last step needs simplex weights)."""
    observations = list(observations)
    if simplex:
        check_simplex(observations)
    cap = cfg.sup_penalty
    conditional = cap * math.fsum(o.weight * (1.0 - o.redundancy) for o in observations)
    global_upper = cap if simplex else cap * math.fsum(o.weight for o in observations)
    return ScoreBounds(0.0, conditional, global_upper)


def weight_transfer_effect(
    a: Sequence[float], weights: Sequence[float], i: int, k: int, delta: float
) -> float:
    """Score change from moving ``delta`` weight from channel ``k`` to channel ``i``."""
    if i == k:
        raise ValidationError("weight transfer needs two distinct channels")
    if delta < 0:
        raise ValidationError(f"transfer amount must be >= 0, got {delta!r}")
    if delta > weights[k]:
        raise ValidationError(
            f"cannot transfer {delta!r} from channel {k} holding weight {weights[k]!r}"
        )
    return delta * (a[i] - a[k])


def transfer_weights(
    observations: Sequence[ChannelObservation], i: int, k: int, delta: float
) -> list[ChannelObservation]:
    """Copy of ``observations`` with ``w' = w + delta (e_i - e_k)``."""
    if i == k:
        raise ValidationError("weight transfer needs two distinct channels")
    if delta < 0 or delta > observations[k].weight:
        raise ValidationError(
            f"cannot transfer {delta!r} from channel {k} holding weight {observations[k].weight!r}"
        )
    out = list(observations)
    out[i] = replace(out[i], weight=out[i].weight + delta)
    out[k] = replace(out[k], weight=out[k].weight - delta)
    return out


def is_zero_condition(observations: Sequence[ChannelObservation]) -> bool:
    """True iff every positively weighted channel has perfect recall or full redundancy."""
    return all(o.weight == 0 or o.recall == 1.0 or o.redundancy == 1.0 for o in observations)
