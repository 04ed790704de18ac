"""scikit-learn style wrapper: group equations by formal class."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .classify import classify, formal_equivalence, formal_invariants
from .errors import LodeError
from .lde import Lde


def _as_equations(X) -> list:
    from .cli import parse_equation

    out = []
    for item in X:
        if isinstance(item, Lde):
            out.append(item)
        elif isinstance(item, str):
            out.append(parse_equation(item).equation)
        else:
            raise TypeError(f"expected Lde or JSON text, got {type(item).__name__}")
    if not out:
        raise ValueError("empty input")
    return out


class FormalClassifier(ClassifierMixin, BaseEstimator):
    """Learns the distinct formal classes of the training equations.

    ``predict`` returns the index of the formally equivalent training class,
    or -1; ``transform`` returns the singularity kind of each equation.
    """

    def __init__(self, order: int | None = None, meromorphic: bool = False):
        self.order = order
        self.meromorphic = meromorphic

    def fit(self, X, y=None):
        eqs = _as_equations(X)
        reps, invs = [], []
        for e in eqs:
            if self._match(e, reps) < 0:
                reps.append(e)
                invs.append(formal_invariants(e))
        self.representatives_ = reps
        self.invariants_ = invs
        self.classes_ = np.arange(len(reps))
        return self

    def _match(self, e: Lde, reps: list) -> int:
        for i, r in enumerate(reps):
            try:
                T = formal_equivalence(e, r, self.order, meromorphic=self.meromorphic)
            except LodeError:
                T = None
            if T is not None:
                return i
        return -1

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "representatives_")
        return np.array([self._match(e, self.representatives_) for e in _as_equations(X)])

    def transform(self, X) -> np.ndarray:
        return np.array([classify(e).kind.value for e in _as_equations(X)], dtype=object)

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
