"""Shannon entropy, maximum entropy and normalized redundancy over discrete distributions.

All logarithms are base 2, so every quantity is in bits.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import DomainError, ValidationError

SUM_TOLERANCE = 1e-9


def normalize_symbol(symbol: object) -> str:
    """Canonical form used when comparing observed outputs: trimmed and case-folded."""
    return str(symbol).strip().casefold()


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Nonnegative masses summing to one over ``outcome_count`` outcomes.

    Fewer masses than outcomes is allowed; the unlisted outcomes carry zero mass.
    Masses whose sum is within ``SUM_TOLERANCE`` of one are renormalized.
    """

    masses: tuple[float, ...]
    outcome_count: int

    def __post_init__(self):
        masses = tuple(float(p) for p in self.masses)
        n = self.outcome_count
        if isinstance(n, bool) or not isinstance(n, int):
            raise ValidationError(f"outcome_count must be an integer, got {n!r}")
        if n < 2:
            raise ValidationError(f"outcome_count must be >= 2, got {n}")
        if not masses:
            raise ValidationError("distribution has no masses")
        if len(masses) > n:
            raise ValidationError(
                f"{len(masses)} masses listed for only {n} outcomes"
            )
        for i, p in enumerate(masses):
            if not math.isfinite(p):
                raise ValidationError(f"mass {i} is not finite: {p!r}")
            if p < 0:
                raise ValidationError(f"mass {i} is negative: {p!r}")
        total = math.fsum(masses)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"masses sum to {total!r}, not 1")
        if total != 1.0:
            masses = tuple(p / total for p in masses)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def uniform(cls, n: int) -> ProbabilityDistribution:
        return cls(tuple([1.0 / n] * n), n)

    @property
    def n(self) -> int:
        return self.outcome_count

    @property
    def entropy(self) -> float:
        return entropy(self)

    @property
    def redundancy(self) -> float:
        return redundancy(self)


def _as_distribution(dist) -> ProbabilityDistribution:
    if isinstance(dist, ProbabilityDistribution):
        return dist
    masses = tuple(dist)
    return ProbabilityDistribution(masses, max(len(masses), 2))


def entropy(dist: ProbabilityDistribution | Sequence[float]) -> float:
    """Shannon entropy ``-sum p log2 p`` in bits, with ``0 log 0 = 0``.

    A bare sequence of masses is accepted and taken to span ``len(masses)`` outcomes.
    """
    dist = _as_distribution(dist)
    n = dist.outcome_count
    if len(dist.masses) == n and len(set(dist.masses)) == 1:
        # equiprobable: H is exactly log2 n, avoid n rounded terms
        return max_entropy(n)
    h = -math.fsum(p * math.log2(p) for p in dist.masses if p > 0)
    # Clamp round-off into [0, log2 n]; -0.0 also becomes 0.0 here.
    return min(max(h, 0.0), max_entropy(n))


def max_entropy(n: int) -> float:
    """Entropy of the equiprobable distribution over ``n`` outcomes, ``log2 n``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DomainError(f"maximum entropy needs an integer n >= 2, got {n!r}")
    return math.log2(n)


def redundancy(dist: ProbabilityDistribution | Sequence[float]) -> float:
    """Normalized (relative) redundancy ``1 - H / log2 n``, in [0, 1]."""
    dist = _as_distribution(dist)
    r = 1.0 - entropy(dist) / max_entropy(dist.outcome_count)
    return min(max(r, 0.0), 1.0)


def normalized_entropy(dist: ProbabilityDistribution | Sequence[float]) -> float:
    """``H / log2 n``, computed as the complement of :func:`redundancy`."""
    return 1.0 - redundancy(dist)


def empirical_distribution(
    symbols: Iterable[object], outcome_count: int | None = None
) -> ProbabilityDistribution:
    """Relative frequencies of observed symbols.

    Symbols are compared after :func:`normalize_symbol`. Masses are ordered by
    first appearance. Without ``outcome_count`` the outcome space is taken to be
    the distinct observed symbols, but never fewer than two outcomes.
    """
    counts = Counter(normalize_symbol(s) for s in symbols)
    if not counts:
        raise ValidationError("cannot build a distribution from an empty sequence")
    distinct = len(counts)
    if outcome_count is None:
        outcome_count = max(distinct, 2)
    elif outcome_count < 2:
        raise ValidationError(f"outcome_count must be >= 2, got {outcome_count}")
    elif outcome_count < distinct:
        raise ValidationError(
            f"outcome_count {outcome_count} is smaller than the {distinct} distinct symbols observed"
        )
    total = sum(counts.values())
    return ProbabilityDistribution(
        tuple(c / total for c in counts.values()), outcome_count
    )
