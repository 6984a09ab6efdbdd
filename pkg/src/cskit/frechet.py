"""Seminorm family, bounded metric, and the correlation sequence of a measurement.

The metric layer: a countable monotone family of seminorms (k-term partial sums of
the non-increasing rearrangement) combined into the canonical bounded
translation-invariant metric sum_k 2^-k p_k/(1+p_k). The same truncation weights,
applied to normalized atom correlations of a measurement, give the weighted
sequence the dimension estimator works on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operators import Dictionary, as_measurement_values
from .rearrangement import RearrangedSequence, as_rearranged, rearrange
from .validation import check_signal

__all__ = [
    "SeminormFamily",
    "KotheSequence",
    "truncation_seminorm",
    "truncation_family",
    "frechet_metric",
    "frechet_increments",
    "kothe_from_measurement",
]

# 2.0**-k underflows to exactly 0.0 beyond this, so longer sums are bit-identical
_MAX_METRIC_TERMS = 1074

# terms beyond 2**-64 are below double-precision resolution relative to the
# leading term; default evaluation order is capped there
DEFAULT_MAX_ORDER = 64


@dataclass(frozen=True)
class SeminormFamily:
    """A monotone countable seminorm family p_1 <= p_2 <= ... <= p_max_order."""

    max_order: int
    evaluate: Callable[[np.ndarray, int], float]

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("order must be >= 1")

    def profile(self, x) -> np.ndarray:
        """[p_1(x), ..., p_max_order(x)]."""
        x = check_signal(x)
        return np.array([self.evaluate(x, k) for k in range(1, self.max_order + 1)])


def truncation_seminorm(x, k: int) -> float:
    """k-term partial sum of the non-increasing rearrangement of ``|x|``.

    Equals the l1 norm once ``k >= len(x)``. The family is monotone in k,
    rearrangement-invariant, and separating at k = len(x).
    """
    if k < 1:
        raise ValueError("order must be >= 1")
    r = as_rearranged(x)
    k = min(int(k), r.source_length)
    return float(np.sum(r.magnitudes[:k]))


def truncation_family(max_order: int) -> SeminormFamily:
    return SeminormFamily(max_order=max_order, evaluate=truncation_seminorm)


def _seminorm_profile(r: RearrangedSequence, K: int) -> np.ndarray:
    """Partial-sum profile [p_1, ..., p_K] of an already rearranged sequence."""
    csum = np.cumsum(r.magnitudes)
    idx = np.minimum(np.arange(1, K + 1), r.source_length) - 1
    return csum[idx]


def default_order(n: int) -> int:
    return min(n, DEFAULT_MAX_ORDER)


def frechet_metric(x, y, K: int | None = None) -> float:
    """Bounded translation-invariant metric generated by the truncation seminorms.

    d(x, y) = sum_{k=1..K} 2^-k * p_k(x-y) / (1 + p_k(x-y)), with p_k the k-term
    partial sums of the rearranged difference. Always < 1 - 2^-K.

    Parameters
    ----------
    x, y : array-like
        Signals of equal length.
    K : int, optional
        Number of seminorm terms; defaults to min(len(x), 64).
    """
    x = check_signal(x, name="x")
    y = check_signal(y, name="y")
    if x.size != y.size:
        raise ValueError("dimension mismatch")
    if K is None:
        K = default_order(x.size)
    if K < 1:
        raise ValueError("order must be >= 1")
    K_eff = min(int(K), _MAX_METRIC_TERMS)
    p = _seminorm_profile(rearrange(x - y), K_eff)
    weights = 2.0 ** -np.arange(1, K_eff + 1)
    return float(np.sum(weights * p / (1.0 + p)))


def frechet_increments(r, K: int | None = None) -> np.ndarray:
    """Metric increments delta_n between consecutive partial objects.

    The n-term and (n-1)-term partial objects differ by a single atom of
    magnitude ``magnitudes[n-1]``, whose truncation seminorms are all equal to
    that magnitude, so delta_n = (1 - 2^-K) * m_n / (1 + m_n). Non-increasing
    because the magnitudes are.
    """
    r = as_rearranged(r)
    if K is None:
        K = default_order(r.source_length)
    if K < 1:
        raise ValueError("order must be >= 1")
    scale = 1.0 - 2.0 ** -min(int(K), _MAX_METRIC_TERMS)
    m = r.magnitudes
    return scale * m / (1.0 + m)


@dataclass(frozen=True)
class KotheSequence:
    """Weighted sequence built from a measurement's normalized atom correlations.

    ``sequence`` holds the non-increasing rearrangement of
    g_j = |<atom_j, y>| / ||atom_j||; ``weights`` is the non-negative
    row-monotone weight matrix (rows k = 1..K) defining the seminorms
    p_k(g) = sum_j weights[k-1, j] * g*_j. The default truncation rows
    (1 for j <= k) make these coincide with the partial-sum seminorms.
    """

    weights: np.ndarray
    sequence: RearrangedSequence

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2:
            raise ValueError("weights must be 2-D")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if np.any(np.diff(w, axis=0) < 0):
            raise ValueError("weights must be non-decreasing in k")
        if not np.all(w.max(axis=0) > 0):
            raise ValueError("every column needs a positive weight in some row")
        object.__setattr__(self, "weights", w)

    @property
    def max_order(self) -> int:
        return self.weights.shape[0]

    def seminorm(self, k: int) -> float:
        """p_k of the rearranged correlation sequence."""
        if k < 1 or k > self.max_order:
            raise ValueError(f"order must be in [1, {self.max_order}]")
        return float(np.dot(self.weights[k - 1], self.sequence.magnitudes))


def _truncation_weights(K: int, n: int) -> np.ndarray:
    return (np.arange(1, K + 1)[:, None] >= np.arange(1, n + 1)[None, :]).astype(float)


def kothe_from_measurement(
    y, D: Dictionary, K: int | None = None, weights: np.ndarray | None = None
) -> KotheSequence:
    """Correlation sequence of a measurement against a dictionary.

    Computes g_j = |<atom_j, y>| / ||atom_j|| for every atom, rearranges
    non-increasingly, and attaches truncation weights (or a caller-supplied
    non-negative row-monotone matrix).

    Parameters
    ----------
    y : Measurement or array-like
        Measurement vector of length D.m.
    D : Dictionary
    K : int, optional
        Number of weight rows; defaults to the atom count so the weight matrix
        covers every column.
    weights : ndarray, optional
        Override weight matrix, shape (K, D.n_atoms).
    """
    values = as_measurement_values(y)
    if values.size != D.m:
        raise ValueError("dimension mismatch")
    norms = D.column_norms
    bad = np.flatnonzero(norms == 0.0)
    if bad.size:
        raise ValueError(f"degenerate atom {int(bad[0])}")
    g = np.abs(D.atoms.conj().T @ values) / norms
    seq = rearrange(g)
    if weights is None:
        if K is None:
            K = D.n_atoms
        if K < 1:
            raise ValueError("order must be >= 1")
        weights = _truncation_weights(int(K), D.n_atoms)
    return KotheSequence(weights=weights, sequence=seq)
