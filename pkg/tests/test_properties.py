import numpy as np
import pytest

from aas import kernel, properties, score
from aas.exceptions import ValidationError
from aas.kernel import KernelConfig
from aas.properties import PROPERTIES, grid_distributions, random_session, run_suite, zero_grid


def test_suite_passes():
    results = run_suite(samples=500, seed=1)
    assert {r.name for r in results if not r.passed} == set()
    assert len(results) == len(PROPERTIES)


@pytest.mark.parametrize("eps", [1e-12, 1e-3, 1.0])
def test_suite_other_epsilons(eps):
    results = run_suite(samples=200, seed=2, cfg=KernelConfig(eps))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_random_sessions_on_simplex():
    rng = np.random.default_rng(0)
    for _ in range(200):
        o = random_session(rng)
        assert 1 <= len(o) <= properties.MAX_CHANNELS
        assert abs(sum(c.weight for c in o) - 1.0) <= 1e-12


def test_grid_sizes():
    # compositions of 8 into n nonnegative parts: C(8+n-1, n-1)
    assert sum(1 for _ in grid_distributions()) == 9 + 45 + 165
    # simplex weights at step 1/4: 1, 5, 15 vectors; times 9**m recall/redundancy levels
    assert sum(1 for _ in zero_grid()) == 1 * 9 + 5 * 81 + 15 * 729


def test_sign_flip_detected(monkeypatch):
    original = kernel.phi
    monkeypatch.setattr(score, "phi", lambda x, cfg=kernel.DEFAULT_KERNEL: -original(x, cfg))
    result = properties.check_recall_monotonicity(np.random.default_rng(0), 200, KernelConfig())
    assert not result.passed
    assert set(result.counterexample) >= {"x", "R", "w", "before", "after"}


def test_constant_kernel_breaks_strictness(monkeypatch):
    monkeypatch.setattr(kernel, "phi", lambda x, cfg=kernel.DEFAULT_KERNEL: 1.0)
    result = properties.check_kernel_monotonicity(np.random.default_rng(0), 100, KernelConfig())
    assert not result.passed


def test_result_line_format():
    r = properties.PropertyResult("demo", False, 3, {"x": [0.5]})
    assert r.line().startswith("[FAIL] demo (3 cases")
    assert "counterexample" in r.line()


def test_crashing_check_reported_as_failure(monkeypatch):
    def boom(rng, samples, cfg):
        raise ValidationError("invariant tripped validation")

    monkeypatch.setitem(PROPERTIES, "kernel_bounds", boom)
    (result,) = run_suite(samples=10, names=["kernel_bounds"])
    assert not result.passed
    assert "invariant tripped validation" in result.counterexample["error"]
