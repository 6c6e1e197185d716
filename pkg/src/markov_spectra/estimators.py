"""scikit-learn style wrappers and input checks.

Only two operations have a natural estimator shape: turning words into
spectrum values (a stateless transformer) and estimating the dimension of a
batch of subshifts.  Everything else stays a plain function.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .cantor import SubshiftSpec, load_spec, validate
from .cf import check_digits
from .exceptions import ValidationError
from .values import f_value, lagrange_value, markov_value
from .words import BiWord, as_biword


def check_biword(w) -> BiWord:
    """Accept a BiWord or its text form."""
    return as_biword(w)


def check_spec(spec) -> SubshiftSpec:
    """Accept a spec, spec text, preset name or spec file path."""
    if isinstance(spec, SubshiftSpec):
        return validate(spec)
    return load_spec(spec)


def check_positive(x, name: str = "value") -> Fraction:
    try:
        x = Fraction(x)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number") from None
    if x <= 0:
        raise ValidationError(f"{name} must be positive")
    return x


__all__ = ["check_biword", "check_spec", "check_positive", "check_digits",
           "SpectrumValueTransformer", "DimensionEstimator"]

_KINDS = {"f": f_value, "markov": markov_value, "lagrange": lagrange_value}


class SpectrumValueTransformer(TransformerMixin, BaseEstimator):
    """Map words to ``f``, Markov or Lagrange values (one float column)."""

    def __init__(self, kind: str = "markov"):
        self.kind = kind

    def fit(self, X, y=None):
        if self.kind not in _KINDS:
            raise ValidationError(f"kind must be one of {sorted(_KINDS)}")
        [check_biword(w) for w in X]
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        if not hasattr(self, "n_features_in_"):
            raise NotFittedError("call fit first")
        fn = _KINDS[self.kind]
        return np.array([[float(fn(check_biword(w)))] for w in X])


class DimensionEstimator(BaseEstimator):
    """Dimension bounds and point estimates for a batch of subshifts."""

    def __init__(self, depth: int = 8, word_len: int = 8, method: str = "all", tol: float = 1e-8):
        self.depth = depth
        self.word_len = word_len
        self.method = method
        self.tol = tol

    def _estimate(self, spec):
        from .dimension import estimate_dimension
        return estimate_dimension(check_spec(spec), self.depth, self.word_len, self.method, self.tol)

    def fit(self, X, y=None):
        self.estimates_ = [self._estimate(s) for s in X]
        return self

    def predict(self, X):
        """Point estimates (falling back to the bound midpoint without one)."""
        if not hasattr(self, "estimates_"):
            raise NotFittedError("call fit first")
        out = []
        for e in (self._estimate(s) for s in X):
            out.append(e.point if e.point is not None else (e.lower + e.upper) / 2)
        return np.array(out)
