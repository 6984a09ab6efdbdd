"""Non-increasing rearrangement and the sequence-space norms built on it.

The rearrangement is the permutation-invariant backbone: every compressibility
measurement downstream works on the sorted magnitude sequence, never on raw
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_signal

__all__ = ["RearrangedSequence", "rearrange", "weak_l1_quasinorm", "lp_norm"]


@dataclass(frozen=True)
class RearrangedSequence:
    """Magnitudes sorted non-increasingly plus the stable permutation realizing the sort.

    ``magnitudes[k] == abs(values[permutation[k]])`` for the source signal; ties in
    magnitude are broken by ascending original index.
    """

    magnitudes: np.ndarray
    permutation: np.ndarray
    source_length: int

    def __len__(self) -> int:
        return self.source_length


def rearrange(x) -> RearrangedSequence:
    """Sort ``|x|`` non-increasingly with a stable (ascending-index) tie-break.

    Parameters
    ----------
    x : array-like
        Signal samples, real or complex.

    Returns
    -------
    RearrangedSequence
    """
    x = check_signal(x)
    mags = np.abs(x)
    # stable sort on -|x|: equal magnitudes keep ascending original order
    perm = np.argsort(-mags, kind="stable")
    return RearrangedSequence(
        magnitudes=mags[perm], permutation=perm, source_length=x.size
    )


def as_rearranged(x) -> RearrangedSequence:
    """Pass a RearrangedSequence through, rearrange anything else."""
    if isinstance(x, RearrangedSequence):
        return x
    return rearrange(x)


def weak_l1_quasinorm(r) -> float:
    """Weak-l1 quasinorm ``max_k k * magnitudes[k-1]`` of a rearranged sequence.

    Accepts a RearrangedSequence or a raw signal (rearranged first). Controls the
    decay rate of the magnitude sequence without requiring summability.
    """
    r = as_rearranged(r)
    ranks = np.arange(1, r.source_length + 1, dtype=float)
    return float(np.max(ranks * r.magnitudes))


def lp_norm(x, p) -> float:
    """Standard lp norm of ``|x|``; ``p=inf`` returns the max magnitude.

    Small p emphasizes tail decay, large p the worst single coordinate; both ends
    are used by the experiment harness to contrast local and global control.
    """
    x = check_signal(x)
    if p != np.inf and p < 1:
        raise ValueError("not a norm")
    mags = np.abs(x)
    if p == np.inf:
        return float(np.max(mags))
    if p == 1:
        return float(np.sum(mags))
    if p == 2:
        return float(np.sqrt(np.sum(mags**2)))
    return float(np.sum(mags**p) ** (1.0 / p))
