"""Scikit-learn style estimator wrappers around the functional core.

These give the pipeline the usual fit/transform/predict surface: a dimension
estimator that learns the optimum/tail split of a signal or measurement, an
OMP recovery estimator with the linear-model fit(X, y) signature, and a
PCA-shaped Karhunen-Loeve basis transformer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .frechet import kothe_from_measurement
from .measure import transition_point
from .operators import Dictionary
from .rearrangement import rearrange, weak_l1_quasinorm
from .recovery import cskle_basis, cskle_recover, omp_recover
from .validation import check_samples, check_signal

__all__ = ["OptimumDimension", "MatchingPursuitRecovery", "KarhunenLoeveBasis"]


def _as_dictionary(X) -> Dictionary:
    if isinstance(X, Dictionary):
        return X
    return Dictionary(atoms=np.asarray(X), kind="custom")


class OptimumDimension(BaseEstimator):
    """Estimate the dimension n that splits a signal into optimum and tail parts.

    With a ``dictionary``, fit expects a measurement vector and works on its
    normalized atom correlations; without one, fit rearranges the signal
    directly.

    Parameters
    ----------
    criterion : {"frechet-increment", "tail-mean"}
    epsilon : float or None
        Transition tolerance; None uses 1e-6 times the top magnitude.
    window : int
        Consecutive increments that must stay below epsilon.
    metric_terms : int or None
        Seminorm terms for the metric increments; None uses min(N, 64).
    dictionary : Dictionary or None

    Attributes
    ----------
    n_ : int
    optimum_set_, null_set_ : ndarray of indices
    tail_mean_, weak_l1_ : float
    decomposition_ : Decomposition
    rearranged_ : RearrangedSequence
    """

    def __init__(
        self,
        criterion: str = "frechet-increment",
        epsilon: float | None = None,
        window: int = 3,
        metric_terms: int | None = None,
        dictionary: Dictionary | None = None,
    ):
        self.criterion = criterion
        self.epsilon = epsilon
        self.window = window
        self.metric_terms = metric_terms
        self.dictionary = dictionary

    def fit(self, X, y=None):
        if self.dictionary is not None:
            kothe = kothe_from_measurement(X, self.dictionary)
            self.rearranged_ = kothe.sequence
        else:
            self.rearranged_ = rearrange(X)
        self.decomposition_ = transition_point(
            self.rearranged_,
            criterion=self.criterion,
            epsilon=self.epsilon,
            window=self.window,
            K=self.metric_terms,
        )
        self.n_ = self.decomposition_.n
        self.optimum_set_ = self.decomposition_.optimum_set
        self.null_set_ = self.decomposition_.null_set
        self.tail_mean_ = self.decomposition_.tail_mean
        self.weak_l1_ = weak_l1_quasinorm(self.rearranged_)
        return self

    def transform(self, X):
        """Zero out the tail coordinates, keeping only the optimum set."""
        check_is_fitted(self, "n_")
        x = check_signal(X)
        if x.size != len(self.rearranged_):
            raise ValueError("dimension mismatch")
        out = np.zeros_like(x)
        out[self.optimum_set_] = x[self.optimum_set_]
        return out

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)


class MatchingPursuitRecovery(BaseEstimator):
    """OMP sparse recovery with the linear-model fit(X, y) signature.

    X is the dictionary matrix (columns are atoms) or a Dictionary; y is the
    measurement vector.

    Parameters
    ----------
    n_atoms : int or None
        Target support size (takes precedence over the other stops).
    epsilon : float or None
        Residual l2 stopping level.
    max_iter : int or None

    Attributes
    ----------
    support_ : ndarray, selection order
    coef_ : ndarray, length n_atoms of X, zeros off the support
    residual_norms_ : ndarray
    result_ : RecoveryResult
    """

    def __init__(
        self,
        n_atoms: int | None = None,
        epsilon: float | None = None,
        max_iter: int | None = None,
    ):
        self.n_atoms = n_atoms
        self.epsilon = epsilon
        self.max_iter = max_iter

    def fit(self, X, y):
        D = _as_dictionary(X)
        result = omp_recover(
            y, D, n=self.n_atoms, epsilon=self.epsilon, max_iter=self.max_iter
        )
        self.result_ = result
        self.support_ = result.support
        self.coef_ = result.reconstruction
        self.residual_norms_ = result.residual_norms
        self.n_iter_ = result.iterations
        return self

    def predict(self, X):
        """Synthesize measurements for a dictionary matrix: X @ coef_."""
        check_is_fitted(self, "coef_")
        return np.asarray(X) @ self.coef_


class KarhunenLoeveBasis(BaseEstimator, TransformerMixin):
    """Eigenbasis of the empirical covariance of a sample ensemble.

    fit expects samples as rows. transform returns the KL coefficients
    <phi_i, x>; inverse_transform synthesizes signals back.

    Parameters
    ----------
    n_components : int or None
        Basis columns kept; None keeps all.
    center : bool
        Subtract the ensemble mean before forming the covariance.
    rank_rtol : float
        Eigenvalues above rank_rtol * largest count toward ``rank_``.

    Attributes
    ----------
    eigenvalues_ : ndarray, non-increasing (full spectrum)
    components_ : ndarray, orthonormal columns (kept ones)
    rank_ : int
    """

    def __init__(
        self,
        n_components: int | None = None,
        center: bool = False,
        rank_rtol: float = 1e-6,
    ):
        self.n_components = n_components
        self.center = center
        self.rank_rtol = rank_rtol

    def fit(self, X, y=None):
        eigvals, eigvecs = cskle_basis(X, center=self.center)
        keep = eigvecs.shape[1] if self.n_components is None else int(self.n_components)
        if keep < 1 or keep > eigvecs.shape[1]:
            raise ValueError(f"n_components must be in [1, {eigvecs.shape[1]}]")
        self.eigenvalues_ = eigvals
        self.components_ = eigvecs[:, :keep]
        top = eigvals[0] if eigvals.size else 0.0
        self.rank_ = int(np.sum(eigvals > self.rank_rtol * top)) if top > 0 else 0
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_samples(X)
        return X @ self.components_.conj()

    def inverse_transform(self, C):
        check_is_fitted(self, "components_")
        return np.asarray(C) @ self.components_.T

    def recover(self, y, dictionary: Dictionary, n: int | None = None):
        """Least-squares recovery of a measurement in the top-n eigen coordinates."""
        if not hasattr(self, "components_"):
            raise NotFittedError("fit the basis before recovering")
        if n is None:
            n = max(self.rank_, 1)
        return cskle_recover(y, dictionary, self.components_, n)
