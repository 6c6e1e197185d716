import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from markov_spectra.cantor import preset
from markov_spectra.estimators import (DimensionEstimator, SpectrumValueTransformer, check_biword,
                                       check_positive, check_spec)
from markov_spectra.exceptions import InvalidWordError, ValidationError

WORDS = ["(1)* | (1)*", "(2)* | (2)*", "(2,2,1,1)* | (2,2,1,1)*"]


def test_transformer_values():
    t = SpectrumValueTransformer(kind="markov").fit(WORDS)
    out = t.transform(WORDS)
    assert out.shape == (3, 1)
    np.testing.assert_allclose(out[:, 0], [5 ** 0.5, 8 ** 0.5, 221 ** 0.5 / 5])


def test_transformer_params_and_clone():
    t = SpectrumValueTransformer(kind="lagrange")
    assert t.get_params() == {"kind": "lagrange"}
    c = clone(t).set_params(kind="f")
    assert c.kind == "f" and t.kind == "lagrange"


def test_transformer_errors():
    with pytest.raises(NotFittedError):
        SpectrumValueTransformer().transform(WORDS)
    with pytest.raises(ValidationError):
        SpectrumValueTransformer(kind="other").fit(WORDS)
    with pytest.raises(InvalidWordError):
        SpectrumValueTransformer().fit(["(1,2"])


def test_pipeline():
    pipe = Pipeline([("values", SpectrumValueTransformer())])
    assert pipe.fit_transform(WORDS).shape == (3, 1)


def test_dimension_estimator():
    est = DimensionEstimator(depth=6, word_len=6).fit(["K122", "E2"])
    pred = est.predict(["K122", "E2"])
    assert 0.353 < pred[0] < 0.35792
    assert 0.53 < pred[1] < 0.532
    assert est.estimates_[0].lower <= pred[0] <= est.estimates_[0].upper
    with pytest.raises(NotFittedError):
        DimensionEstimator().predict(["E2"])


def test_dimension_estimator_cover_only_uses_midpoint():
    est = DimensionEstimator(depth=5, method="cover").fit(["E2"])
    e = est.estimates_[0]
    assert est.predict(["E2"])[0] == pytest.approx((e.lower + e.upper) / 2)


def test_check_helpers():
    assert check_spec("E2") == preset("E2")
    assert check_spec(preset("X")) == preset("X")
    assert check_biword("(1)* | (1)*").right_period == (1,)
    assert check_positive("1/3") > 0
    for bad in (0, -1, "x"):
        with pytest.raises(ValidationError):
            check_positive(bad)
