"""Log-scaled recall penalty ``phi(x) = -log2((x + eps) / (1 + eps))``.

The kernel is zero at perfect recall and rises to its supremum
``M(eps) = log2((1 + eps) / eps)`` as recall vanishes. ``x = 0`` is accepted
as the sentinel for an incorrect answer and evaluates to ``M(eps)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DomainError, ValidationError

DEFAULT_EPSILON = 1e-6
LN2 = math.log(2.0)


@dataclass(frozen=True)
class KernelConfig:
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps) or eps <= 0:
            raise ValidationError(f"epsilon must be a positive finite number, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", eps)

    @cached_property
    def log2_one_plus_eps(self) -> float:
        return math.log2(1.0 + self.epsilon)

    @cached_property
    def sup_penalty(self) -> float:
        """``M(eps)``, the value of the kernel at ``x = 0``."""
        return self.log2_one_plus_eps - math.log2(self.epsilon)


DEFAULT_KERNEL = KernelConfig()


def _check_recall(x: float, *, allow_zero: bool) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"recall score must be a real number, got {x!r}") from None
    if not math.isfinite(x):
        raise DomainError(f"recall score must be finite, got {x!r}")
    if x > 1.0 or x < 0.0 or (x == 0.0 and not allow_zero):
        bound = "[0, 1]" if allow_zero else "(0, 1]"
        raise DomainError(f"recall score {x!r} outside {bound}")
    return x


def phi(x, cfg: KernelConfig = DEFAULT_KERNEL):
    """Penalty in bits for recall score(s) ``x`` in [0, 1].

    Evaluated as ``log2(1 + eps) - log2(x + eps)`` so that ``phi(1) == 0`` exactly.
    Scalars return a float; array-likes return an ndarray.
    """
    if np.ndim(x) == 0:
        x = _check_recall(x, allow_zero=True)
        return cfg.log2_one_plus_eps - math.log2(x + cfg.epsilon)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("recall scores must be finite")
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("recall scores must lie in [0, 1]")
    return cfg.log2_one_plus_eps - np.log2(arr + cfg.epsilon)


def phi_derivative(x: float, cfg: KernelConfig = DEFAULT_KERNEL) -> float:
    """``phi'(x) = -1 / ((x + eps) ln 2)`` for ``x`` in (0, 1]."""
    x = _check_recall(x, allow_zero=False)
    return -1.0 / ((x + cfg.epsilon) * LN2)


def phi_sup(cfg: KernelConfig = DEFAULT_KERNEL) -> float:
    """Supremum ``M(eps) = phi(0+)``; identical to ``phi(0, cfg)``."""
    return cfg.sup_penalty


def derivative_bounds(cfg: KernelConfig = DEFAULT_KERNEL) -> tuple[float, float]:
    """``(lower, upper)`` with ``lower < phi'(x) <= upper`` on (0, 1].

    The lower bound is strict: it is the limit at ``x -> 0+``.
    """
    eps = cfg.epsilon
    return -1.0 / (eps * LN2), -1.0 / ((1.0 + eps) * LN2)
