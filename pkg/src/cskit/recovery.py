"""Sensing and recovery: the compressed representation, its greedy inverse (OMP),
the empirical Karhunen-Loeve eigenbasis route, and the round-trip check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frechet import frechet_metric
from .operators import Dictionary, Measurement, as_measurement_values
from .validation import check_samples, check_signal

__all__ = [
    "RecoveryResult",
    "forward",
    "omp_recover",
    "cskle_basis",
    "cskle_recover",
    "reflexive_check",
]

# cond(Gram) = cond(R)^2 for the QR factor of the selected atoms
_GRAM_COND_LIMIT = 1e12
# residuals at numerical zero: no atom carries information anymore
_ZERO_RESIDUAL_RTOL = 1e-13


@dataclass
class RecoveryResult:
    """Support, coefficients, and reconstruction of one recovery run."""

    support: np.ndarray
    coefficients: np.ndarray
    reconstruction: np.ndarray
    residual_norms: np.ndarray
    method: str
    iterations: int

    def support_set(self) -> frozenset:
        return frozenset(int(j) for j in self.support)


def forward(x, D: Dictionary, noise_sigma: float = 0.0, seed: int | None = None) -> Measurement:
    """Sense a coefficient vector: y = D x + w.

    ``w`` is i.i.d. circular complex Gaussian with standard deviation
    ``noise_sigma`` per component (exactly zero noise when sigma == 0, so the
    noiseless path is bit-reproducible).
    """
    x = check_signal(x, name="x")
    if x.size != D.n_atoms:
        raise ValueError("dimension mismatch")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    y = D.atoms @ x
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        scale = noise_sigma / np.sqrt(2.0)
        y = y + rng.normal(0.0, scale, D.m) + 1j * rng.normal(0.0, scale, D.m)
    return Measurement(values=y, dictionary_ref=D.ref, noise_sigma=float(noise_sigma))


def omp_recover(
    y,
    D: Dictionary,
    n: int | None = None,
    epsilon: float | None = None,
    max_iter: int | None = None,
) -> RecoveryResult:
    """Orthogonal matching pursuit against the dictionary atoms.

    Each iteration selects the atom with the largest normalized correlation
    against the residual, then orthogonally projects y onto the selected span
    (incremental QR, numerically stabler than normal equations on coherent
    dictionaries). Stopping precedence: target dimension ``n``, then residual
    ``epsilon``, then ``max_iter``; a numerically zero residual always stops.

    Raises ValueError("degenerate support") if the selected Gram matrix
    becomes numerically singular (condition estimate above 1e12).
    """
    values = as_measurement_values(y)
    if values.size != D.m:
        raise ValueError("dimension mismatch")
    if n is not None:
        n = int(n)
        if n < 0 or n > D.n_atoms:
            raise ValueError(f"n must be in [0, {D.n_atoms}]")
    if epsilon is not None and epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    # precedence when several stops are given: dimension > residual > max_iter
    if n is not None:
        limit = n
    elif max_iter is not None:
        limit = min(int(max_iter), D.n_atoms)
    else:
        limit = min(D.m, D.n_atoms)

    norms = D.column_norms
    ynorm = float(np.linalg.norm(values))
    zero_level = _ZERO_RESIDUAL_RTOL * ynorm

    selected: list[int] = []
    Q = np.empty((D.m, 0), dtype=np.complex128)
    R = np.empty((0, 0), dtype=np.complex128)
    z = np.empty(0, dtype=np.complex128)
    residual = values.copy()
    res_norms = [ynorm]

    while len(selected) < limit:
        res = res_norms[-1]
        if res <= zero_level:
            break
        if n is None and epsilon is not None and res < epsilon:
            break
        corr = np.abs(D.atoms.conj().T @ residual) / norms
        if selected:
            corr[selected] = -1.0
        j = int(np.argmax(corr))

        atom = D.atoms[:, j]
        w = Q.conj().T @ atom
        perp = atom - Q @ w
        rho = float(np.linalg.norm(perp))
        t = len(selected)
        R_new = np.zeros((t + 1, t + 1), dtype=np.complex128)
        R_new[:t, :t] = R
        R_new[:t, t] = w
        R_new[t, t] = rho
        if rho == 0.0 or np.linalg.cond(R_new) ** 2 > _GRAM_COND_LIMIT:
            raise ValueError("degenerate support")
        q = perp / rho
        Q = np.hstack([Q, q[:, None]])
        R = R_new
        z = np.append(z, np.vdot(q, values))
        selected.append(j)

        residual = values - Q @ z
        res_norms.append(float(np.linalg.norm(residual)))

    if selected:
        coeffs = np.linalg.solve(R, z)
    else:
        coeffs = np.empty(0, dtype=np.complex128)
    recon = np.zeros(D.n_atoms, dtype=np.complex128)
    recon[selected] = coeffs
    return RecoveryResult(
        support=np.array(selected, dtype=np.intp),
        coefficients=coeffs,
        reconstruction=recon,
        residual_norms=np.array(res_norms),
        method="omp",
        iterations=len(selected),
    )


def cskle_basis(samples, center: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Eigenbasis of the empirical covariance of a sample ensemble.

    Forms C = (1/T) sum_t x_t x_t^H (the raw second moment; ``center=True``
    subtracts the ensemble mean first) and returns (eigenvalues, eigenvectors)
    with eigenvalues sorted non-increasingly and orthonormal eigenvector
    columns.
    """
    X = check_samples(samples)
    if center:
        X = X - X.mean(axis=0, keepdims=True)
    T = X.shape[0]
    C = X.T @ X.conj() / T
    C = (C + C.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(C)
    order = np.argsort(-eigvals, kind="stable")
    return eigvals[order], eigvecs[:, order]


def cskle_recover(y, D: Dictionary, basis: np.ndarray, n: int) -> RecoveryResult:
    """Least-squares recovery in the top-n eigenbasis coordinates.

    Solves y ~= (D Phi_n) c for the KL coefficients c and synthesizes
    x_hat = Phi_n c. The support reports the eigen-indices used.
    """
    values = as_measurement_values(y)
    basis = np.asarray(basis, dtype=np.complex128)
    if basis.ndim != 2 or basis.shape[0] != D.n_atoms:
        raise ValueError("dimension mismatch")
    n = int(n)
    if n < 1 or n > basis.shape[1]:
        raise ValueError(f"n must be in [1, {basis.shape[1]}]")
    if values.size != D.m:
        raise ValueError("dimension mismatch")

    phi = basis[:, :n]
    A = D.atoms @ phi
    coeffs, _, rank, _ = np.linalg.lstsq(A, values, rcond=None)
    if rank < n:
        raise ValueError("unidentifiable subspace")
    recon = phi @ coeffs
    res = float(np.linalg.norm(values - A @ coeffs))
    return RecoveryResult(
        support=np.arange(n, dtype=np.intp),
        coefficients=coeffs,
        reconstruction=recon,
        residual_norms=np.array([float(np.linalg.norm(values)), res]),
        method="cskle",
        iterations=1,
    )


def reflexive_check(
    x,
    D: Dictionary,
    pipeline: str = "omp",
    n: int | None = None,
    epsilon: float | None = None,
    basis: np.ndarray | None = None,
    K: int | None = None,
) -> tuple[float, float]:
    """Noiseless round trip x -> measurement -> recovery -> x_hat.

    Returns (relative l2 error, metric distance d(x_hat, x)). Both are exactly
    0 by convention for the zero signal. When x lies in the recovered subspace
    and the restricted operator has full column rank, both vanish to rounding.
    """
    x = check_signal(x, name="x")
    y = forward(x, D, noise_sigma=0.0)
    if pipeline == "omp":
        result = omp_recover(y, D, n=n, epsilon=epsilon)
    elif pipeline == "cskle":
        if basis is None:
            raise ValueError("cskle pipeline needs a basis")
        if n is None:
            raise ValueError("cskle pipeline needs n")
        result = cskle_recover(y, D, basis, n)
    else:
        raise ValueError(f"unknown pipeline {pipeline!r}")

    xnorm = float(np.linalg.norm(x))
    if xnorm == 0.0:
        return 0.0, 0.0
    rel_l2 = float(np.linalg.norm(result.reconstruction - x)) / xnorm
    return rel_l2, frechet_metric(result.reconstruction, x, K=K)
