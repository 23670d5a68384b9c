"""Truncated emitter-cavity Hilbert space and elementary operators.

Basis index of |j, n> is ``n * n_levels + level_index(j)`` with g=0, e=1, f=2,
so every Fock block is contiguous and cavity operators are block-banded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEVELS = ("g", "e", "f")


@dataclass(frozen=True)
class HilbertSpace:
    """Emitter levels (``g, e[, f]``) tensored with Fock states ``0..n_max``."""

    n_max: int
    levels: tuple[str, ...] = LEVELS

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_fock(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.n_levels * self.n_fock

    def index(self, level: str, n: int) -> int:
        if level not in self.levels:
            raise ValueError(f"level {level!r} not in {self.levels}")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside [0, {self.n_max}]")
        return n * self.n_levels + self.levels.index(level)

    def label(self, index: int) -> tuple[str, int]:
        n, j = divmod(index, self.n_levels)
        return self.levels[j], n

    def has(self, level: str) -> bool:
        return level in self.levels


def build_space(n_max: int, levels: tuple[str, ...] = LEVELS) -> HilbertSpace:
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max must be a non-negative integer, got {n_max!r}")
    levels = tuple(levels)
    if levels not in (("g", "e", "f"), ("g", "e")):
        raise ValueError(f"unsupported emitter levels {levels!r}")
    return HilbertSpace(int(n_max), levels)


def _fock_annihilation(n_fock: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1)


def annihilation(space: HilbertSpace) -> np.ndarray:
    """Cavity lowering operator ``a`` (identity on the emitter)."""
    a = _fock_annihilation(space.n_fock)
    return np.kron(a, np.eye(space.n_levels)).astype(complex)


def creation(space: HilbertSpace) -> np.ndarray:
    return annihilation(space).conj().T


def number(space: HilbertSpace) -> np.ndarray:
    n = np.repeat(np.arange(space.n_fock, dtype=float), space.n_levels)
    return np.diag(n).astype(complex)


def identity(space: HilbertSpace) -> np.ndarray:
    return np.eye(space.dim, dtype=complex)


def emitter_transfer(space: HilbertSpace, j: str, k: str) -> np.ndarray:
    """``|j><k|`` on the emitter, identity on the cavity."""
    for level in (j, k):
        if level not in space.levels:
            raise ValueError(f"invalid emitter level {level!r}; expected one of {space.levels}")
    dyad = np.zeros((space.n_levels, space.n_levels))
    dyad[space.levels.index(j), space.levels.index(k)] = 1.0
    return np.kron(np.eye(space.n_fock), dyad).astype(complex)


def basis_state(space: HilbertSpace, level: str, n: int) -> np.ndarray:
    psi = np.zeros(space.dim, dtype=complex)
    psi[space.index(level, n)] = 1.0
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())
