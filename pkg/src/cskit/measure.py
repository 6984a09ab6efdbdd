"""Discrete measure machinery: inner regularity, optimum index sets, transition
points, Cesaro limits, and the absorbing tail gauge.

Everything here answers one question: where does the magnitude sequence stop
carrying measure? The transition point splits the coordinates into an optimum
set (top of the rearrangement) and a tail whose gauge treats it as negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frechet import frechet_increments
from .rearrangement import RearrangedSequence, as_rearranged
from .validation import check_index_set, check_positive, check_signal

__all__ = [
    "DiscreteMeasure",
    "Decomposition",
    "AbsorbingNullSpace",
    "inner_regularity",
    "optimum_borel_set",
    "transition_point",
    "cesaro_banach_limit",
    "absorbing_null_space",
]

CRITERIA = ("frechet-increment", "tail-mean")


@dataclass(frozen=True)
class DiscreteMeasure:
    """Non-negative masses on the index set {0..N-1}."""

    masses: np.ndarray
    total: float

    @classmethod
    def from_masses(cls, masses) -> "DiscreteMeasure":
        arr = np.asarray(masses, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("masses must be a non-empty 1-D array")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("masses must be finite and non-negative")
        return cls(masses=arr, total=math.fsum(arr))

    def __len__(self) -> int:
        return self.masses.size


@dataclass(frozen=True)
class Decomposition:
    """Split of {0..N-1} into the optimum set (top-n rearranged indices) and its tail.

    ``no_transition`` marks flat spectra where no index qualified: n == N and the
    tail is empty, recorded rather than raised so harness aggregation stays total.
    """

    n: int
    optimum_set: np.ndarray
    null_set: np.ndarray
    tail_mean: float
    criterion: str
    epsilon: float
    window: int
    no_transition: bool = False


def inner_regularity(mu: DiscreteMeasure, B, tol: float = 1e-12) -> float:
    """Measure of B approximated from inside by finite subsets.

    Accumulates the masses in B in descending order and stops once the
    remaining tail is below ``tol``; for finite B with small tol this equals
    mu(B) exactly.
    """
    tol = check_positive(tol, "tol")
    idx = check_index_set(B, len(mu))
    if idx.size == 0:
        return 0.0
    selected = np.sort(mu.masses[idx])[::-1]
    remaining = math.fsum(selected)
    acc = 0.0
    for mass in selected:
        if remaining < tol:
            break
        acc += mass
        remaining -= mass
    return acc


def optimum_borel_set(mu: DiscreteMeasure, n: int) -> np.ndarray:
    """The n indices of largest mass (ties broken by ascending index).

    Additivity makes the greedy choice optimal over all size-n subsets.
    Returned ascending as the canonical set order.
    """
    n = int(n)
    if n < 0 or n > len(mu):
        raise ValueError(f"n must be in [0, {len(mu)}]")
    top = np.argsort(-mu.masses, kind="stable")[:n]
    return np.sort(top)


def set_mass(mu: DiscreteMeasure, indices) -> float:
    """Exact mass of an index set (fsum, order-independent)."""
    idx = check_index_set(indices, len(mu))
    return math.fsum(mu.masses[idx])


def _tail_mean(magnitudes: np.ndarray, n: int) -> float:
    if n >= magnitudes.size:
        return 0.0
    return float(np.mean(magnitudes[n:]))


def transition_point(
    r,
    criterion: str = "frechet-increment",
    epsilon: float | None = None,
    window: int = 3,
    K: int | None = None,
) -> Decomposition:
    """Smallest dimension n past which the sequence stops moving.

    criterion "frechet-increment": smallest n >= 0 with delta_m < epsilon for
    every m in (n, min(n + window, N)], delta from :func:`frechet_increments`.
    criterion "tail-mean": smallest n with mean(magnitudes[n:]) < epsilon.
    Flat spectra that never qualify below N come back flagged ``no_transition``
    with an empty tail.

    ``epsilon`` defaults to 1e-6 times the top magnitude.
    """
    r = as_rearranged(r)
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    if epsilon is None:
        top = float(r.magnitudes[0])
        epsilon = 1e-6 * top if top > 0 else 1e-6
    epsilon = check_positive(epsilon, "epsilon")
    window = int(window)
    if window < 1:
        raise ValueError("window must be >= 1")

    N = r.source_length
    n_opt = None
    if criterion == "frechet-increment":
        delta = frechet_increments(r, K=K)
        below = delta < epsilon
        for n in range(N):
            hi = min(n + window, N)
            if np.all(below[n:hi]):
                n_opt = n
                break
    else:
        for n in range(N):
            if _tail_mean(r.magnitudes, n) < epsilon:
                n_opt = n
                break

    no_transition = n_opt is None
    if no_transition:
        n_opt = N
    optimum = np.sort(r.permutation[:n_opt])
    null = np.sort(r.permutation[n_opt:])
    return Decomposition(
        n=n_opt,
        optimum_set=optimum,
        null_set=null,
        tail_mean=_tail_mean(r.magnitudes, n_opt),
        criterion=criterion,
        epsilon=epsilon,
        window=window,
        no_transition=no_transition,
    )


def cesaro_banach_limit(
    s, tol: float = 1e-8, max_terms: int = 100_000
) -> tuple[float, int]:
    """Stabilized Cesaro mean of a bounded sequence.

    Returns (C_M, M) at the first M where |C_M - C_{M-1}| < tol has held for 10
    consecutive steps. On Cesaro-summable sequences this agrees with the
    shift-invariant limit; raises ValueError if the mean never stabilizes
    within ``max_terms``.
    """
    tol = check_positive(tol, "tol")
    max_terms = int(max_terms)
    if max_terms < 2:
        raise ValueError("max_terms must be >= 2")
    arr = np.asarray(s, dtype=float).ravel()[:max_terms]
    if arr.size < 2:
        raise ValueError("need at least two terms")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence must be bounded (finite entries)")

    means = np.cumsum(arr) / np.arange(1, arr.size + 1)
    ok = np.abs(np.diff(means)) < tol  # ok[i] is the step to M = i + 2
    run = 0
    for i, good in enumerate(ok):
        run = run + 1 if good else 0
        if run == 10:
            M = i + 2
            return float(means[M - 1]), M
    raise ValueError(f"did not stabilize within {max_terms} terms")


@dataclass(frozen=True)
class AbsorbingNullSpace:
    """Tail index set with its Minkowski gauge.

    The gauge of the set {u supported on the tail : l1-tail(u) <= epsilon}:
    finite for every vector (absorbing), positively homogeneous, and balanced.
    """

    null_set: np.ndarray
    tail_mean: float
    epsilon: float

    def gauge(self, u) -> float:
        """l1 mass of u on the tail coordinates, in units of epsilon."""
        u = check_signal(u, name="u")
        if self.null_set.size == 0:
            return 0.0
        if self.null_set[-1] >= u.size:
            raise ValueError("dimension mismatch")
        return float(np.sum(np.abs(u[self.null_set]))) / self.epsilon

    __call__ = gauge


def absorbing_null_space(r, n: int, epsilon: float) -> AbsorbingNullSpace:
    """Tail of the rearrangement beyond n, as an absorbing gauged set."""
    r = as_rearranged(r)
    n = int(n)
    if n < 0 or n > r.source_length:
        raise ValueError(f"n must be in [0, {r.source_length}]")
    epsilon = check_positive(epsilon, "epsilon")
    return AbsorbingNullSpace(
        null_set=np.sort(r.permutation[n:]),
        tail_mean=_tail_mean(r.magnitudes, n),
        epsilon=epsilon,
    )
