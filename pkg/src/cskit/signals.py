"""Seeded generators for the three experiment regimes and the dictionary builders.

Sparse signals for the finite regime, power-law tails standing in for the
semi-infinite one (with their analytic truncation bound), and multicomponent
analytic chirps for the sampled infinite-dimensional regime.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .operators import Dictionary

__all__ = [
    "ChirpComponent",
    "gen_sparse",
    "gen_powerlaw",
    "gen_chirp",
    "ensemble_chirp",
    "make_dictionary",
]


class ChirpComponent(NamedTuple):
    """One linear chirp: amplitude, start frequency, and sweep rate.

    Frequencies are in cycles/sample once divided by the sample rate; the
    instantaneous frequency at sample t is start_freq + chirp_rate * t.
    """

    amplitude: float
    start_freq: float
    chirp_rate: float = 0.0


def gen_sparse(N: int, k: int, seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Exactly k-sparse complex signal with planted support.

    Nonzero entries have magnitudes uniform in [1, 2] and uniform phases; all
    other entries are exactly zero. Returns (values, support) with the support
    sorted ascending.
    """
    N, k = int(N), int(k)
    if N < 1:
        raise ValueError("empty input")
    if k < 1 or k > N:
        raise ValueError(f"k must be in [1, {N}]")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(N, size=k, replace=False))
    mags = rng.uniform(1.0, 2.0, k)
    phases = rng.uniform(0.0, 2.0 * np.pi, k)
    values = np.zeros(N, dtype=np.complex128)
    values[support] = mags * np.exp(1j * phases)
    return values, support


def gen_powerlaw(N: int, alpha: float, seed: int | None = None) -> tuple[np.ndarray, float]:
    """Truncated power-law signal: magnitudes j^-alpha in a random arrangement.

    alpha > 1 keeps the infinite tail summable; the analytic bound on the
    discarded tail, sum_{j>N} j^-alpha <= N^(1-alpha)/(alpha-1), is returned
    alongside so experiments can report truncation error.
    """
    N = int(N)
    if N < 1:
        raise ValueError("empty input")
    alpha = float(alpha)
    if alpha <= 1.0:
        raise ValueError("non-compressible tail")
    rng = np.random.default_rng(seed)
    mags = np.arange(1, N + 1, dtype=float) ** -alpha
    phases = rng.uniform(0.0, 2.0 * np.pi, N)
    values = mags * np.exp(1j * phases)
    rng.shuffle(values)
    tail_bound = N ** (1.0 - alpha) / (alpha - 1.0)
    return values, tail_bound


def _check_aliasing(components: Sequence[ChirpComponent], N: int, sample_rate: float):
    for comp in components:
        f0 = comp.start_freq / sample_rate
        rate = comp.chirp_rate / sample_rate**2
        f_end = f0 + rate * (N - 1)
        lo, hi = min(f0, f_end), max(f0, f_end)
        if lo < 0.0 or hi >= 0.5:
            raise ValueError(
                f"aliasing: instantaneous frequency sweeps [{lo:.4g}, {hi:.4g}] "
                "cycles/sample, must stay in [0, 0.5)"
            )


def gen_chirp(
    components: Sequence[ChirpComponent], N: int, sample_rate: float = 1.0
) -> np.ndarray:
    """Sum of analytic linear chirps x[t] = sum_i a_i exp(2*pi*i*(f_i t + c_i t^2 / 2)).

    Analytic (single-sided) so instantaneous frequency is well defined; errors
    out if any component sweeps outside [0, 0.5) cycles/sample.
    """
    N = int(N)
    if N < 1:
        raise ValueError("empty input")
    components = [ChirpComponent(*c) for c in components]
    _check_aliasing(components, N, sample_rate)
    t = np.arange(N, dtype=float)
    x = np.zeros(N, dtype=np.complex128)
    for amp, f0, rate in components:
        phase = (f0 / sample_rate) * t + 0.5 * (rate / sample_rate**2) * t**2
        x += amp * np.exp(2j * np.pi * phase)
    return x


def ensemble_chirp(
    components: Sequence[ChirpComponent],
    N: int,
    trials: int,
    jitter_seed: int | None = None,
    sample_rate: float = 1.0,
) -> np.ndarray:
    """Phase-jittered chirp ensemble for covariance estimation, shape (trials, N).

    Each trial redraws one uniform phase per component, leaving magnitudes and
    sweeps untouched.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    components = [ChirpComponent(*c) for c in components]
    base = [gen_chirp([c], N, sample_rate) for c in components] or [
        np.zeros(int(N), dtype=np.complex128)
    ]
    rng = np.random.default_rng(jitter_seed)
    out = np.zeros((trials, int(N)), dtype=np.complex128)
    for trial in range(trials):
        for comp_idx in range(len(components)):
            theta = rng.uniform(0.0, 2.0 * np.pi)
            out[trial] += base[comp_idx] * np.exp(1j * theta)
    return out


def _gaussian_atoms(m: int, n_atoms: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 1.0 / np.sqrt(m), (m, n_atoms)).astype(np.complex128)


def _dft_atoms(m: int, n_atoms: int, convention: str) -> np.ndarray:
    t = np.arange(m)[:, None]
    k = np.arange(n_atoms)[None, :]
    sign = 1.0 if convention == "synthesis" else -1.0
    return np.exp(sign * 2j * np.pi * t * k / n_atoms) / np.sqrt(m)


def _gabor_atoms(m: int, n_atoms: int, width: float) -> np.ndarray:
    n_freq = int(np.ceil(np.sqrt(n_atoms)))
    n_time = int(np.ceil(n_atoms / n_freq))
    times = np.linspace(0.0, m, n_time, endpoint=False)
    freqs = np.linspace(0.0, 0.5, n_freq, endpoint=False)
    t = np.arange(m, dtype=float)
    atoms = np.empty((m, n_atoms), dtype=np.complex128)
    j = 0
    for tau in times:
        window = np.exp(-((t - tau) ** 2) / (2.0 * width**2))
        for nu in freqs:
            if j == n_atoms:
                break
            atom = window * np.exp(2j * np.pi * nu * (t - tau))
            atoms[:, j] = atom / np.linalg.norm(atom)
            j += 1
    return atoms


def make_dictionary(
    kind: str,
    m: int,
    n_atoms: int,
    params: dict | None = None,
    seed: int | None = None,
) -> Dictionary:
    """Build a sampling operator of the given kind, shape (m, n_atoms).

    gaussian: i.i.d. real N(0, 1/m) entries (unit expected column norm).
    dft: harmonic atoms exp(2*pi*i*t*k/n_atoms)/sqrt(m); unitary when
        m == n_atoms; params convention in {"synthesis", "analysis"}.
    gabor: unit-norm Gaussian-windowed tones on a time-frequency lattice;
        params width (default m/8).
    identity: requires m == n_atoms.
    """
    m, n_atoms = int(m), int(n_atoms)
    if m < 1 or n_atoms < 1:
        raise ValueError("m and n_atoms must be >= 1")
    params = dict(params or {})
    if kind == "gaussian":
        atoms = _gaussian_atoms(m, n_atoms, seed)
    elif kind == "dft":
        convention = params.setdefault("convention", "synthesis")
        if convention not in ("synthesis", "analysis"):
            raise ValueError(f"unknown convention {convention!r}")
        atoms = _dft_atoms(m, n_atoms, convention)
    elif kind == "gabor":
        width = float(params.setdefault("width", m / 8.0))
        if width <= 0:
            raise ValueError("width must be positive")
        atoms = _gabor_atoms(m, n_atoms, width)
    elif kind == "identity":
        if m != n_atoms:
            raise ValueError("identity dictionary requires m == n_atoms")
        atoms = np.eye(m, dtype=np.complex128)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return Dictionary(atoms=atoms, kind=kind, seed=seed, params=params)
