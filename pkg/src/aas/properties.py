"""Randomized and exhaustive checks of the score's structural guarantees.

Every check returns a :class:`PropertyResult`; the first violating input is
kept as ``counterexample``. Checks go through the public module functions at
call time, so a patched kernel is picked up by the whole suite.

Strictness claims (e.g. "raising recall strictly lowers the score") are only
asserted when the exact change exceeds a few ulps of the quantities involved;
below that resolution IEEE addition cannot express the change.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import info_theory, kernel, score
from .exceptions import AASError
from .kernel import KernelConfig
from .score import ChannelObservation

ABS_TOL = 1e-12
FD_STEP = 1e-6
FD_TOL = 1e-4
# Central differences need x - h >= 0 and a truncation error (~h^2 / (3 (x+eps)^3 ln 2))
# below FD_TOL; that holds for x >= 0.01.
FD_MIN_X = 0.01
MAX_CHANNELS = 8


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    counterexample: dict | None = None
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name} ({self.checked} cases, {self.seconds:.2f}s)"
        if self.counterexample is not None:
            text += f"\n       counterexample: {self.counterexample}"
        return text


@dataclass
class _Check:
    name: str
    checked: int = 0
    counterexample: dict | None = field(default=None)

    def __call__(self, ok: bool, **context) -> None:
        self.checked += 1
        if not ok and self.counterexample is None:
            self.counterexample = context

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, self.counterexample is None, self.checked, self.counterexample)


def _resolvable(change: float, *refs: float) -> bool:
    return change > 8 * max(math.ulp(max(abs(r), 1.0)) for r in refs)


def random_session(rng: np.random.Generator, max_channels: int = MAX_CHANNELS) -> list[ChannelObservation]:
    """Random simplex-weighted session, with boundary values of x, R and w over-represented."""
    m = int(rng.integers(1, max_channels + 1))
    x = rng.uniform(0.0, 1.0, m)
    u = rng.uniform(size=m)
    x[u < 0.15] = 0.0
    x[u > 0.85] = 1.0
    r = rng.uniform(0.0, 1.0, m)
    v = rng.uniform(size=m)
    r[v < 0.1] = 0.0
    r[v > 0.9] = 1.0
    w = rng.dirichlet(np.ones(m))
    if m > 1:
        w[rng.uniform(size=m) < 0.1] = 0.0
        if w.sum() == 0.0:
            w[0] = 1.0
    w = w / w.sum()
    return [
        ChannelObservation(recall=float(x[i]), weight=float(w[i]), redundancy=float(r[i]), label=f"c{i}")
        for i in range(m)
    ]


def _describe(observations) -> dict:
    return {
        "x": [o.recall for o in observations],
        "R": [o.redundancy for o in observations],
        "w": [o.weight for o in observations],
    }


def _random_distribution(rng: np.random.Generator) -> list[float]:
    n = int(rng.integers(2, 9))
    p = rng.dirichlet(np.full(n, 0.7))
    p[rng.uniform(size=n) < 0.2] = 0.0
    if p.sum() == 0.0:
        p[0] = 1.0
    return list(p / p.sum())


# -- information theory -----------------------------------------------------


def check_entropy_bounds(rng, samples, cfg) -> PropertyResult:
    chk = _Check("entropy within [0, log2 n]")
    for _ in range(samples):
        p = _random_distribution(rng)
        d = info_theory.ProbabilityDistribution(tuple(p), len(p))
        h = info_theory.entropy(d)
        chk(0.0 <= h <= info_theory.max_entropy(d.n), masses=p, entropy=h)
    for n in range(2, 9):
        h = info_theory.entropy(info_theory.ProbabilityDistribution.uniform(n))
        chk(abs(h - math.log2(n)) <= ABS_TOL, uniform_n=n, entropy=h)
    return chk.result()


def check_redundancy_complement(rng, samples, cfg) -> PropertyResult:
    chk = _Check("redundancy in [0, 1] and E + R = 1")
    for _ in range(samples):
        p = _random_distribution(rng)
        d = info_theory.ProbabilityDistribution(tuple(p), len(p))
        r = info_theory.redundancy(d)
        e = info_theory.normalized_entropy(d)
        chk(0.0 <= r <= 1.0 and abs(e + r - 1.0) <= 1e-15, masses=p, R=r, E=e)
    return chk.result()


def check_entropy_permutation(rng, samples, cfg) -> PropertyResult:
    chk = _Check("entropy permutation invariance")
    for _ in range(samples):
        p = _random_distribution(rng)
        q = list(rng.permutation(p))
        h1 = info_theory.entropy(info_theory.ProbabilityDistribution(tuple(p), len(p)))
        h2 = info_theory.entropy(info_theory.ProbabilityDistribution(tuple(q), len(q)))
        chk(abs(h1 - h2) <= ABS_TOL, masses=p, permuted=q, diff=h1 - h2)
    return chk.result()


def check_entropy_zero_padding(rng, samples, cfg) -> PropertyResult:
    chk = _Check("explicit zero-mass outcomes leave entropy unchanged")
    for _ in range(samples):
        p = _random_distribution(rng)
        n = len(p) + int(rng.integers(0, 4))
        short = [m for m in p if m > 0]
        h1 = info_theory.entropy(info_theory.ProbabilityDistribution(tuple(short), n))
        h2 = info_theory.entropy(info_theory.ProbabilityDistribution(tuple(p), n))
        chk(abs(h1 - h2) <= ABS_TOL, masses=p, n=n)
    return chk.result()


def grid_distributions(max_n: int = 4, denominator: int = 8):
    """Every distribution over n <= max_n outcomes with masses in multiples of 1/denominator."""
    for n in range(2, max_n + 1):
        for counts in itertools.product(range(denominator + 1), repeat=n):
            if sum(counts) == denominator:
                yield n, tuple(Fraction(c, denominator) for c in counts)


def check_entropy_grid(rng, samples, cfg) -> PropertyResult:
    """Direct summation over exact dyadic masses; independent of the operation's clamping."""
    chk = _Check("entropy / redundancy grid oracle (n <= 4, step 1/8)")
    for n, masses in grid_distributions():
        oracle_h = 0.0
        for m in masses:
            if m:
                oracle_h -= float(m) * math.log2(float(m))
        oracle_r = 1.0 - oracle_h / math.log2(n)
        d = info_theory.ProbabilityDistribution(tuple(float(m) for m in masses), n)
        h = info_theory.entropy(d)
        r = info_theory.redundancy(d)
        e = info_theory.normalized_entropy(d)
        ok = abs(h - oracle_h) <= ABS_TOL and abs(r - oracle_r) <= ABS_TOL and abs(e - (1 - oracle_r)) <= ABS_TOL
        if all(m == Fraction(1, n) for m in masses):
            ok = ok and r == 0.0
        if max(masses) == 1:
            ok = ok and r == 1.0
        chk(ok, masses=[str(m) for m in masses], n=n, H=h, oracle=oracle_h)
    return chk.result()


# -- kernel -----------------------------------------------------------------


def check_kernel_monotonicity(rng, samples, cfg) -> PropertyResult:
    chk = _Check("kernel strictly decreasing")
    pairs = np.sort(rng.uniform(0.0, 1.0, (samples, 2)), axis=1)
    pairs[: samples // 20, 0] = 0.0
    pairs[samples // 20 : samples // 10, 1] = 1.0
    for x1, x2 in pairs:
        x1, x2 = float(x1), float(x2)
        if x1 + cfg.epsilon == x2 + cfg.epsilon:
            continue
        p1, p2 = kernel.phi(x1, cfg), kernel.phi(x2, cfg)
        chk(p1 > p2, x1=x1, x2=x2, phi1=p1, phi2=p2)
    return chk.result()


def check_kernel_bounds(rng, samples, cfg) -> PropertyResult:
    chk = _Check("kernel within [0, M(eps)] with phi(1) = 0, phi(0) = M")
    cap = kernel.phi_sup(cfg)
    chk(kernel.phi(1.0, cfg) == 0.0, x=1.0, phi=kernel.phi(1.0, cfg))
    chk(kernel.phi(0.0, cfg) == cap, x=0.0, phi=kernel.phi(0.0, cfg), cap=cap)
    for x in rng.uniform(0.0, 1.0, samples):
        p = kernel.phi(float(x), cfg)
        chk(0.0 <= p <= cap, x=float(x), phi=p, cap=cap)
    return chk.result()


def check_derivative_bounds(rng, samples, cfg) -> PropertyResult:
    chk = _Check("derivative within uniform bounds")
    lo, hi = kernel.derivative_bounds(cfg)
    xs = list(rng.uniform(0.0, 1.0, samples)) + [1.0, 1e-12]
    for x in xs:
        x = float(x)
        if x == 0.0:
            continue
        d = kernel.phi_derivative(x, cfg)
        chk(lo < d <= hi, x=x, derivative=d, bounds=(lo, hi))
    return chk.result()


def check_derivative_finite_difference(rng, samples, cfg) -> PropertyResult:
    chk = _Check("derivative matches central finite difference")
    h = FD_STEP
    for x in rng.uniform(FD_MIN_X, 1.0 - h, samples):
        x = float(x)
        fd = (kernel.phi(x + h, cfg) - kernel.phi(x - h, cfg)) / (2 * h)
        d = kernel.phi_derivative(x, cfg)
        chk(abs(d - fd) <= FD_TOL, x=x, derivative=d, finite_difference=fd)
    return chk.result()


def check_cap_epsilon_monotone(rng, samples, cfg) -> PropertyResult:
    chk = _Check("M(eps) strictly decreasing in eps")
    for e1, e2 in np.sort(10.0 ** rng.uniform(-12, 2, (samples, 2)), axis=1):
        if e1 == e2:
            continue
        m1 = kernel.phi_sup(KernelConfig(float(e1)))
        m2 = kernel.phi_sup(KernelConfig(float(e2)))
        chk(m1 > m2, eps1=float(e1), eps2=float(e2), M1=m1, M2=m2)
    return chk.result()


# -- session score ----------------------------------------------------------


def check_aas_bounds(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(a) 0 <= AAS <= M * sum w(1-R) <= M")
    cap = kernel.phi_sup(cfg)
    for _ in range(samples):
        obs = random_session(rng)
        total = score.aas(obs, cfg).total
        b = score.bounds(cfg, obs)
        ok = b.lower <= total <= b.conditional_upper * (1 + 1e-15) and b.conditional_upper <= b.global_upper * (1 + 1e-15)
        # Strictly below the cap once some channel with effective mass has x > 0.
        gap = math.fsum(o.weight * (1 - o.redundancy) * (cap - kernel.phi(o.recall, cfg)) for o in obs if o.recall > 0)
        if _resolvable(gap, cap):
            ok = ok and total < cap
        chk(ok, total=total, bounds=tuple(b), **_describe(obs))
    return chk.result()


def check_recall_monotonicity(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(b) recall monotonicity")
    for _ in range(samples):
        obs = random_session(rng)
        i = int(rng.integers(len(obs)))
        new_x = float(rng.uniform(obs[i].recall, 1.0))
        moved = list(obs)
        moved[i] = ChannelObservation(new_x, obs[i].weight, obs[i].redundancy, obs[i].label)
        before, after = score.aas(obs, cfg).total, score.aas(moved, cfg).total
        ok = after <= before
        drop = obs[i].weight * (1 - obs[i].redundancy) * (kernel.phi(obs[i].recall, cfg) - kernel.phi(new_x, cfg))
        if _resolvable(drop, before):
            ok = ok and after < before
        chk(ok, channel=i, new_x=new_x, before=before, after=after, **_describe(obs))
    return chk.result()


def check_redundancy_monotonicity(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(c) redundancy monotonicity")
    for _ in range(samples):
        obs = random_session(rng)
        i = int(rng.integers(len(obs)))
        new_r = float(rng.uniform(obs[i].redundancy, 1.0))
        moved = list(obs)
        moved[i] = ChannelObservation(obs[i].recall, obs[i].weight, new_r, obs[i].label)
        before, after = score.aas(obs, cfg).total, score.aas(moved, cfg).total
        ok = after <= before
        if obs[i].weight == 0 or obs[i].recall == 1.0:
            ok = ok and after == before
        elif _resolvable(obs[i].weight * (new_r - obs[i].redundancy) * kernel.phi(obs[i].recall, cfg), before):
            ok = ok and after < before
        chk(ok, channel=i, new_R=new_r, before=before, after=after, **_describe(obs))
    return chk.result()


def check_weight_monotonicity(rng, samples, cfg) -> PropertyResult:
    """Unconstrained weights: raising any w_i never lowers sum w_i a_i."""
    chk = _Check("(d) componentwise weight monotonicity (unconstrained)")
    for _ in range(samples):
        obs = random_session(rng)
        bumped = [
            ChannelObservation(o.recall, o.weight + float(rng.uniform(0, 1)) * (rng.uniform() < 0.5), o.redundancy, o.label)
            for o in obs
        ]
        before = score.aas(obs, cfg, simplex=False)
        after = score.aas(bumped, cfg, simplex=False)
        ok = after.total >= before.total
        gain = math.fsum((b.weight - o.weight) * t.a for o, b, t in zip(obs, bumped, before.terms))
        if _resolvable(gain, before.total, after.total):
            ok = ok and after.total > before.total
        if all(b.weight == o.weight or t.a == 0 for o, b, t in zip(obs, bumped, before.terms)):
            ok = ok and after.total == before.total
        chk(ok, before=before.total, after=after.total, new_w=[b.weight for b in bumped], **_describe(obs))
    return chk.result()


def _random_partition(rng, m: int) -> list[list[int]]:
    labels = rng.integers(0, m, m)
    groups: dict[int, list[int]] = {}
    for idx in rng.permutation(m):
        groups.setdefault(int(labels[idx]), []).append(int(idx))
    return list(groups.values())


def check_permutation_partition(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(e) permutation / partition invariance")
    for _ in range(samples):
        obs = random_session(rng)
        total = score.aas(obs, cfg).total
        perm = [obs[int(i)] for i in rng.permutation(len(obs))]
        permuted = score.aas(perm, cfg).total
        grouping = _random_partition(rng, len(obs))
        grouped = math.fsum(score.partition_score(obs, grouping, cfg).subtotals)
        chk(
            abs(permuted - total) <= ABS_TOL and abs(grouped - total) <= ABS_TOL,
            total=total, permuted=permuted, grouped=grouped, grouping=grouping, **_describe(obs),
        )
    return chk.result()


def check_recursion_batch(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(f) recursion S_m = S_{m-1} + a_m equals batch total")
    for _ in range(samples):
        obs = random_session(rng)
        s = 0.0
        try:
            for o in obs:
                s = score.aas_incremental(s, o, cfg)
        except AASError as exc:
            chk(False, error=str(exc), **_describe(obs))
            continue
        batch = score.aas(obs, cfg)
        chk(abs(s - batch.total) <= ABS_TOL and batch.partials[-1] == batch.total,
            recursive=s, batch=batch.total, **_describe(obs))
    return chk.result()


def check_weight_transfer(rng, samples, cfg) -> PropertyResult:
    chk = _Check("(g) weight transfer changes AAS by delta (a_i - a_k)")
    for _ in range(samples):
        obs = random_session(rng, MAX_CHANNELS)
        if len(obs) < 2:
            obs = obs + [ChannelObservation(float(rng.uniform()), 0.0, 0.0, "pad")]
        i, k = (int(v) for v in rng.choice(len(obs), 2, replace=False))
        delta = float(rng.uniform(0.0, obs[k].weight))
        base = score.aas(obs, cfg)
        predicted = score.weight_transfer_effect(base.a, base.weights, i, k, delta)
        moved = score.aas(score.transfer_weights(obs, i, k, delta), cfg).total
        chk(abs((moved - base.total) - predicted) <= ABS_TOL,
            i=i, k=k, delta=delta, predicted=predicted, actual=moved - base.total, **_describe(obs))
    return chk.result()


def zero_grid(max_channels: int = 3, step: Fraction = Fraction(1, 4)):
    """Every session over x, R in {0, 1/2, 1} with simplex weights on a grid of ``step``."""
    levels = (0.0, 0.5, 1.0)
    units = int(1 / step)
    for m in range(1, max_channels + 1):
        weight_vectors = [c for c in itertools.product(range(units + 1), repeat=m) if sum(c) == units]
        for wc in weight_vectors:
            w = [float(Fraction(c, units)) for c in wc]
            for xs in itertools.product(levels, repeat=m):
                for rs in itertools.product(levels, repeat=m):
                    yield [ChannelObservation(xs[i], w[i], rs[i], f"c{i}") for i in range(m)]


def check_zero_characterization(rng, samples, cfg) -> PropertyResult:
    chk = _Check("AAS = 0 iff every weighted channel has x = 1 or R = 1")
    for obs in zero_grid():
        total = score.aas(obs, cfg).total
        expected_zero = all(o.weight == 0 or o.recall == 1.0 or o.redundancy == 1.0 for o in obs)
        chk((total == 0.0) == expected_zero, total=total, **_describe(obs))
    return chk.result()


def check_k_linearity(rng, samples, cfg) -> PropertyResult:
    chk = _Check("single-channel reduction is linear in k")
    for x, k in zip(rng.uniform(0, 1, samples), rng.uniform(0, 1, samples)):
        x, k = float(x), float(k)
        unit = score.aas([ChannelObservation(x, 1.0)], cfg).total
        scaled = score.aas([ChannelObservation(x, k)], cfg, simplex=False).total
        chk(scaled == k * unit, x=x, k=k, unit=unit, scaled=scaled)
    return chk.result()


PROPERTIES: dict[str, Callable[..., PropertyResult]] = {
    "entropy_bounds": check_entropy_bounds,
    "redundancy_complement": check_redundancy_complement,
    "entropy_permutation": check_entropy_permutation,
    "entropy_zero_padding": check_entropy_zero_padding,
    "entropy_grid": check_entropy_grid,
    "kernel_monotonicity": check_kernel_monotonicity,
    "kernel_bounds": check_kernel_bounds,
    "derivative_bounds": check_derivative_bounds,
    "derivative_finite_difference": check_derivative_finite_difference,
    "cap_epsilon_monotone": check_cap_epsilon_monotone,
    "aas_bounds": check_aas_bounds,
    "recall_monotonicity": check_recall_monotonicity,
    "redundancy_monotonicity": check_redundancy_monotonicity,
    "weight_monotonicity": check_weight_monotonicity,
    "permutation_partition": check_permutation_partition,
    "recursion_batch": check_recursion_batch,
    "weight_transfer": check_weight_transfer,
    "zero_characterization": check_zero_characterization,
    "k_linearity": check_k_linearity,
}


def run_suite(
    samples: int = 10_000,
    seed: int = 0,
    cfg: KernelConfig | None = None,
    names: list[str] | None = None,
) -> list[PropertyResult]:
    cfg = cfg or KernelConfig()
    rng = np.random.default_rng(seed)
    results = []
    for name in names or list(PROPERTIES):
        start = time.perf_counter()
        try:
            result = PROPERTIES[name](rng, samples, cfg)
        except (AASError, ArithmeticError) as exc:
            # an invariant broken badly enough to trip validation is still a failure
            result = PropertyResult(name, False, 0, {"error": f"{type(exc).__name__}: {exc}"})
        result.seconds = time.perf_counter() - start
        results.append(result)
    return results
