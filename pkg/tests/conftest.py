import mpmath
import pytest

from aas.kernel import KernelConfig

mpmath.mp.dps = 50

# name -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def mp_phi(x, eps):
    """High-precision kernel, independent of the float implementation."""
    x, eps = mpmath.mpf(x), mpmath.mpf(eps)
    return -mpmath.log((x + eps) / (1 + eps), 2)


def mp_cap(eps):
    eps = mpmath.mpf(eps)
    return mpmath.log((1 + eps) / eps, 2)


@pytest.fixture
def cfg():
    return KernelConfig(1e-6)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
