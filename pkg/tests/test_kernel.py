import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from aas.exceptions import DomainError, ValidationError
from aas.kernel import KernelConfig, derivative_bounds, phi, phi_derivative, phi_sup
from conftest import mp_cap, mp_phi

# Frozen from the 50-digit mpmath oracle in conftest.
CAP_1E6 = 19.931570012018494  # log2(1_000_001)
CAP_1E3 = 9.9672262588359935  # log2(1001)
PHI_HALF = 0.99999855730712315
DPHI_ONE = -1.4426935981953652
DPHI_HALF = -2.8853843110093048

unit = st.floats(0.0, 1.0, allow_nan=False)


def test_oracle_constants_match_mpmath():
    assert CAP_1E6 == pytest.approx(float(mp_cap("1e-6")), abs=1e-14)
    assert CAP_1E3 == pytest.approx(float(mp_cap("1e-3")), abs=1e-14)
    assert PHI_HALF == pytest.approx(float(mp_phi("0.5", "1e-6")), abs=1e-15)


class TestConfig:
    def test_default_cap(self):
        assert KernelConfig().sup_penalty == pytest.approx(CAP_1E6, abs=1e-13)

    @pytest.mark.parametrize("eps", [0.0, -1e-6, float("nan"), float("inf")])
    def test_invalid_epsilon(self, eps):
        with pytest.raises(ValidationError):
            KernelConfig(eps)


class TestPhi:
    def test_perfect_recall(self, cfg):
        assert phi(1.0, cfg) == 0.0

    def test_zero_sentinel(self, cfg):
        assert phi(0.0, cfg) == pytest.approx(CAP_1E6, abs=1e-13)
        # the value quoted to five decimals for log2(1,000,001)
        assert round(phi(0.0, cfg), 5) == 19.93157

    def test_half(self, cfg):
        assert phi(0.5, cfg) == pytest.approx(PHI_HALF, abs=1e-14)
        assert phi(0.5, cfg) == pytest.approx(0.9999986, abs=1e-6)

    @pytest.mark.parametrize("x", [-0.1, 1.0000001, float("nan"), float("inf")])
    def test_domain(self, cfg, x):
        with pytest.raises(DomainError):
            phi(x, cfg)

    def test_array_input(self, cfg):
        xs = np.array([0.0, 0.5, 1.0])
        out = phi(xs, cfg)
        assert isinstance(out, np.ndarray)
        np.testing.assert_allclose(out, [CAP_1E6, PHI_HALF, 0.0], atol=1e-13)
        assert out[2] == 0.0

    def test_array_domain(self, cfg):
        with pytest.raises(DomainError):
            phi(np.array([0.5, 1.5]), cfg)


class TestDerivative:
    def test_at_one(self, cfg):
        assert phi_derivative(1.0, cfg) == pytest.approx(DPHI_ONE, abs=1e-14)

    def test_at_half(self, cfg):
        assert phi_derivative(0.5, cfg) == pytest.approx(DPHI_HALF, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -0.5, 1.5])
    def test_domain(self, cfg, x):
        with pytest.raises(DomainError):
            phi_derivative(x, cfg)

    @given(st.floats(0.01, 1.0 - 1e-6))
    def test_finite_difference(self, x):
        cfg = KernelConfig(1e-6)
        h = 1e-6
        fd = (phi(x + h, cfg) - phi(x - h, cfg)) / (2 * h)
        assert abs(phi_derivative(x, cfg) - fd) <= 1e-4

    @given(st.floats(0.0, 1.0, exclude_min=True))
    def test_uniform_bounds(self, x):
        cfg = KernelConfig(1e-6)
        # below float resolution x + eps == eps and the limit value itself is returned
        assume(x + cfg.epsilon != cfg.epsilon)
        lo, hi = derivative_bounds(cfg)
        assert lo < phi_derivative(x, cfg) <= hi

    def test_upper_bound_attained_at_one(self, cfg):
        assert phi_derivative(1.0, cfg) == derivative_bounds(cfg)[1]


class TestSup:
    def test_default(self, cfg):
        assert phi_sup(cfg) == pytest.approx(CAP_1E6, abs=1e-13)

    def test_eps_one(self):
        assert phi_sup(KernelConfig(1.0)) == 1.0

    def test_eps_milli(self):
        assert phi_sup(KernelConfig(1e-3)) == pytest.approx(CAP_1E3, abs=1e-13)

    @pytest.mark.parametrize("eps", [1e-12, 1e-6, 1e-3, 0.5, 1.0, 10.0])
    def test_equals_phi_at_zero(self, eps):
        c = KernelConfig(eps)
        assert phi_sup(c) == phi(0.0, c)

    @pytest.mark.parametrize("eps", [1e-12, 1e-6, 1e-3, 0.5, 1.0, 10.0])
    def test_matches_high_precision(self, eps):
        c = KernelConfig(eps)
        assert phi_sup(c) == pytest.approx(float(mp_cap(eps)), rel=1e-14)


@given(unit, unit)
def test_strictly_decreasing(x1, x2):
    eps = 1e-6
    assume(x1 + eps != x2 + eps)
    cfg = KernelConfig(eps)
    lo, hi = min(x1, x2), max(x1, x2)
    assert phi(lo, cfg) > phi(hi, cfg)


@given(unit)
def test_bounded(x):
    cfg = KernelConfig(1e-6)
    assert 0.0 <= phi(x, cfg) <= phi_sup(cfg)


@given(st.floats(1e-12, 100.0), st.floats(1e-12, 100.0))
def test_cap_decreases_with_epsilon(e1, e2):
    assume(e1 != e2)
    lo, hi = min(e1, e2), max(e1, e2)
    assert phi_sup(KernelConfig(lo)) > phi_sup(KernelConfig(hi))


def test_stable_form_accuracy():
    # Direct -log2((x+eps)/(1+eps)) loses digits for tiny eps; the implemented form should not.
    cfg = KernelConfig(1e-15)
    for x in (0.0, 1e-10, 0.3, 0.999999):
        assert phi(x, cfg) == pytest.approx(float(mp_phi(x, "1e-15")), rel=1e-13, abs=1e-15)
    assert math.isfinite(phi(0.0, cfg))
