import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from aas import AgeScoreTransformer
from aas.exceptions import DomainError, ValidationError
from aas.kernel import KernelConfig
from aas.protocol import canonical_phase1
from aas.score import ChannelObservation, aas
from aas.session import ScoreConfig, aggregate, grade, score_phase

CAP = 19.931570012018494


def phase1_matrix():
    return np.array([[grade(r)["day"], grade(r)["experiment"]] for r in canonical_phase1()])


def test_get_params_and_clone():
    est = AgeScoreTransformer(epsilon=1e-3, weights=[0.2, 0.8])
    params = est.get_params()
    assert params == {"epsilon": 1e-3, "weights": [0.2, 0.8], "redundancy": 0.0, "simplex": True}
    copy = clone(est)
    assert copy.get_params() == params
    assert copy is not est


def test_transform_shape_and_values():
    X = np.array([[1.0, 0.0], [1.0, 1.0], [0.5, 0.0]])
    est = AgeScoreTransformer().fit(X)
    out = est.transform(X)
    assert out.shape == X.shape
    np.testing.assert_allclose(out[0], [0.0, CAP / 2], atol=1e-13)
    assert np.all(out[1] == 0.0)


def test_score_samples_match_functional_path():
    rng = np.random.default_rng(0)
    X = rng.uniform(size=(50, 4))
    w = rng.dirichlet(np.ones(4))
    r = rng.uniform(size=4)
    est = AgeScoreTransformer(weights=w, redundancy=r).fit(X)
    cfg = KernelConfig()
    expected = [
        aas([ChannelObservation(x[i], w[i], r[i]) for i in range(4)], cfg).total for x in X
    ]
    np.testing.assert_allclose(est.score_samples(X), expected, rtol=0, atol=1e-12)


def test_phase1_through_estimator():
    X = phase1_matrix()
    est = AgeScoreTransformer(weights=[0.0, 1.0]).fit(X)
    totals = est.score_samples(X)
    summary = aggregate(score_phase(canonical_phase1(), ScoreConfig(k=1.0)))
    assert totals.sum() == pytest.approx(summary.total, abs=1e-12)
    assert totals.max() == pytest.approx(CAP, abs=1e-13)


def test_bounds_and_coef():
    est = AgeScoreTransformer(weights=[0.5, 0.5], redundancy=[0.5, 0.5]).fit(np.ones((1, 2)))
    lo, cond, glob = est.bounds()
    assert lo == 0.0
    assert cond == pytest.approx(CAP / 2, abs=1e-13)
    assert glob == pytest.approx(CAP, abs=1e-13)
    np.testing.assert_array_equal(est.coef_, [0.25, 0.25])


def test_uniform_default_weights():
    est = AgeScoreTransformer().fit(np.zeros((2, 4)))
    np.testing.assert_array_equal(est.weights_, [0.25] * 4)
    assert est.score_samples(np.zeros((1, 4)))[0] == pytest.approx(CAP, abs=1e-12)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        AgeScoreTransformer().transform(np.ones((1, 2)))


def test_validation():
    with pytest.raises(DomainError):
        AgeScoreTransformer().fit(np.array([[1.2, 0.0]]))
    with pytest.raises(ValidationError):
        AgeScoreTransformer(weights=[0.3, 0.3]).fit(np.ones((1, 2)))
    with pytest.raises(ValidationError):
        AgeScoreTransformer(weights=[1.0]).fit(np.ones((1, 2)))
    with pytest.raises(ValidationError):
        AgeScoreTransformer(redundancy=[0.0, 2.0]).fit(np.ones((1, 2)))
    with pytest.raises(ValueError):
        AgeScoreTransformer().fit(np.array([[np.nan, 1.0]]))
    est = AgeScoreTransformer().fit(np.ones((1, 2)))
    with pytest.raises(ValueError, match="channels"):
        est.transform(np.ones((1, 3)))


def test_unconstrained_weights():
    est = AgeScoreTransformer(weights=[2.0, 1.0], simplex=False).fit(np.zeros((1, 2)))
    assert est.score_samples(np.zeros((1, 2)))[0] == pytest.approx(3 * CAP, abs=1e-12)


def test_pipeline_and_feature_names():
    pipe = make_pipeline(FunctionTransformer(lambda X: np.clip(X, 0, 1)), AgeScoreTransformer())
    out = pipe.fit_transform(np.array([[1.5, -0.5]]))
    np.testing.assert_allclose(out, [[0.0, CAP / 2]], atol=1e-13)
    est = AgeScoreTransformer().fit(np.ones((1, 2)))
    assert list(est.get_feature_names_out(["day", "experiment"])) == ["aas_day", "aas_experiment"]
