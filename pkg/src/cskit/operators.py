"""Sampling-operator and measurement containers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import check_signal

__all__ = ["Dictionary", "Measurement"]

DICTIONARY_KINDS = ("gaussian", "dft", "gabor", "identity", "custom")


@dataclass(eq=False)
class Dictionary:
    """An m x A sampling operator whose columns are the atoms.

    ``atoms[:, j]`` is atom j; the operator maps coefficient space C^A to
    measurement space C^m. Column norms are cached on first use.
    """

    atoms: np.ndarray
    kind: str = "custom"
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        atoms = np.asarray(self.atoms)
        if atoms.ndim != 2 or atoms.shape[0] == 0 or atoms.shape[1] == 0:
            raise ValueError(f"atoms must be a non-empty 2-D array, got shape {atoms.shape}")
        if self.kind not in DICTIONARY_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        self.atoms = atoms.astype(np.complex128, copy=False)
        self._column_norms = None
        norms = self.column_norms
        bad = np.flatnonzero(norms == 0.0)
        if bad.size:
            raise ValueError(f"degenerate atom {int(bad[0])}")

    @property
    def m(self) -> int:
        return self.atoms.shape[0]

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]

    @property
    def column_norms(self) -> np.ndarray:
        if self._column_norms is None:
            self._column_norms = np.linalg.norm(self.atoms, axis=0)
        return self._column_norms

    @property
    def ref(self) -> str:
        """Stable identifier used to tag measurements with their producer."""
        seed = "none" if self.seed is None else str(self.seed)
        return f"{self.kind}:{self.m}x{self.n_atoms}:seed={seed}"


@dataclass
class Measurement:
    """A measurement vector plus the identity of the operator that produced it."""

    values: np.ndarray
    dictionary_ref: str = ""
    noise_sigma: float = 0.0

    def __post_init__(self):
        self.values = check_signal(self.values, name="measurement")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")

    def __len__(self) -> int:
        return self.values.size


def as_measurement_values(y) -> np.ndarray:
    """Accept a Measurement or raw vector; return the validated value array."""
    if isinstance(y, Measurement):
        return y.values
    return check_signal(y, name="measurement")
