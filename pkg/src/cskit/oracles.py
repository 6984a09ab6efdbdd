"""Independent brute-force verifiers for the greedy/closed-form code paths.

Each oracle recomputes a result by exhaustive enumeration or from first
principles, deliberately avoiding the code path it checks, and reports
MATCH/MISMATCH per case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .frechet import frechet_metric
from .measure import (
    DiscreteMeasure,
    optimum_borel_set,
    set_mass,
    transition_point,
)
from .rearrangement import as_rearranged
from .recovery import omp_recover
from .signals import gen_powerlaw, gen_sparse, make_dictionary

__all__ = [
    "OracleCase",
    "exhaustive_borel_mass",
    "borel_case",
    "best_term_error",
    "besterm_case",
    "scan_transition",
    "transition_case",
    "run_default_grid",
]

EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class OracleCase:
    name: str
    matched: bool
    detail: str

    @property
    def verdict(self) -> str:
        return "MATCH" if self.matched else "MISMATCH"


def exhaustive_borel_mass(masses, n: int) -> float:
    """Max measure over all size-n subsets, by full enumeration (N <= 12)."""
    masses = np.asarray(masses, dtype=float)
    if masses.size > EXHAUSTIVE_LIMIT:
        raise ValueError("exhaustive search too large")
    if n < 0 or n > masses.size:
        raise ValueError(f"n must be in [0, {masses.size}]")
    return max(
        (math.fsum(masses[list(combo)]) for combo in combinations(range(masses.size), n)),
        default=0.0,
    )


def borel_case(masses, n: int) -> OracleCase:
    mu = DiscreteMeasure.from_masses(masses)
    best = exhaustive_borel_mass(masses, n)
    greedy = set_mass(mu, optimum_borel_set(mu, n))
    return OracleCase(
        name=f"borel N={len(mu)} n={n}",
        matched=greedy == best,
        detail=f"greedy mass {greedy:.17g}, exhaustive max {best:.17g}",
    )


def best_term_error(x, n: int) -> float:
    """Best n-term l2 approximation error: the norm of the sorted tail."""
    mags = np.sort(np.abs(np.asarray(x, dtype=complex)))[::-1]
    return float(np.sqrt(np.sum(mags[n:] ** 2)))


def besterm_case(x, n: int) -> OracleCase:
    x = np.asarray(x, dtype=complex)
    closed = best_term_error(x, n)
    D = make_dictionary("identity", x.size, x.size)
    residual = float(omp_recover(x, D, n=n).residual_norms[-1])
    scale = float(np.linalg.norm(x)) or 1.0
    matched = abs(residual - closed) <= 1e-10 * scale
    return OracleCase(
        name=f"besterm N={x.size} n={n}",
        matched=matched,
        detail=f"omp residual {residual:.17g}, closed form {closed:.17g}",
    )


def scan_transition(
    r, criterion: str, epsilon: float, window: int = 3, K: int | None = None
) -> int:
    """Exhaustive scan for the smallest qualifying n, from first principles.

    The frechet-increment route evaluates the metric on explicit partial
    objects (top-m magnitudes, zero-padded) instead of the closed-form
    increments the library uses.
    """
    r = as_rearranged(r)
    N = r.source_length
    if criterion == "tail-mean":
        for n in range(N + 1):
            tail = r.magnitudes[n:]
            if (float(np.mean(tail)) if tail.size else 0.0) < epsilon:
                return n
        return N
    if criterion != "frechet-increment":
        raise ValueError(f"unknown criterion {criterion!r}")

    def partial(m: int) -> np.ndarray:
        out = np.zeros(N)
        out[:m] = r.magnitudes[:m]
        return out

    delta = np.array(
        [frechet_metric(partial(m), partial(m - 1), K=K) for m in range(1, N + 1)]
    )
    for n in range(N):
        hi = min(n + window, N)
        if np.all(delta[n:hi] < epsilon):
            return n
    return N


def transition_case(x, criterion: str, epsilon: float, window: int = 3) -> OracleCase:
    r = as_rearranged(x)
    scanned = scan_transition(r, criterion, epsilon, window)
    computed = transition_point(r, criterion=criterion, epsilon=epsilon, window=window).n
    return OracleCase(
        name=f"transition {criterion} eps={epsilon:.3g}",
        matched=scanned == computed,
        detail=f"library n={computed}, scan n={scanned}",
    )


def _default_borel_grid() -> list[OracleCase]:
    cases = [borel_case([0.5, 0.3, 0.2], 2)]
    rng = np.random.default_rng(1234)
    for N in range(2, EXHAUSTIVE_LIMIT + 1):
        masses = rng.uniform(0.0, 1.0, N)
        masses[rng.integers(0, N)] = masses.max()  # force a tie
        for n in range(N + 1):
            cases.append(borel_case(masses, n))
    return cases


def _default_besterm_grid() -> list[OracleCase]:
    cases = []
    rng = np.random.default_rng(5678)
    signals = [
        rng.normal(size=32) + 1j * rng.normal(size=32),
        gen_sparse(32, 5, seed=9)[0],
        gen_powerlaw(32, 2.0, seed=9)[0],
    ]
    for x in signals:
        for n in range(x.size + 1):
            cases.append(besterm_case(x, n))
    return cases


def _default_transition_grid() -> list[OracleCase]:
    cases = []
    rng = np.random.default_rng(91011)
    signals = [
        gen_powerlaw(64, 2.0, seed=3)[0],
        gen_sparse(64, 5, seed=3)[0],
        rng.normal(size=64) + 1j * rng.normal(size=64),
    ]
    epsilons = np.logspace(-9, -1, 20)
    for x in signals:
        for criterion in ("frechet-increment", "tail-mean"):
            for eps in epsilons:
                cases.append(transition_case(x, criterion, float(eps)))
    return cases


def run_default_grid(task: str) -> list[OracleCase]:
    """Full default verification grid for one oracle task."""
    if task == "borel":
        return _default_borel_grid()
    if task == "besterm":
        return _default_besterm_grid()
    if task == "transition":
        return _default_transition_grid()
    raise ValueError(f"unknown task {task!r}")
