"""Ladder emitter + cavity Hamiltonians and the dressed-level structure.

Units: hbar = 1, frequencies in units of the cavity frequency. The energy zero
is the e level, so at resonance the rotating-frame g level also sits at zero
and f sits at ``omega_cav``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .hilbert import (
    HilbertSpace,
    annihilation,
    creation,
    emitter_transfer,
    number,
)


@dataclass(frozen=True)
class ModelParams:
    omega_cav: float = 1.0
    omega_g: float = -10.0
    omega_e: float = 0.0
    omega_f: float = 1.0
    omega_L: float = 10.0
    Omega_eg: float = 0.0
    Omega_cav: float = 0.1
    rwa_coupling: bool = False

    def __post_init__(self):
        if self.Omega_eg < 0 or self.Omega_cav < 0:
            raise ValueError("Rabi frequencies must be real and non-negative")

    @classmethod
    def resonant(
        cls,
        Omega_eg: float,
        Omega_cav: float = 0.1,
        *,
        omega_cav: float = 1.0,
        omega_L: float = 10.0,
        rwa_coupling: bool = False,
    ) -> "ModelParams":
        """Drive resonant with g-e, cavity resonant with e-f, e at zero energy."""
        return cls(
            omega_cav=omega_cav,
            omega_g=-omega_L,
            omega_e=0.0,
            omega_f=omega_cav,
            omega_L=omega_L,
            Omega_eg=Omega_eg,
            Omega_cav=Omega_cav,
            rwa_coupling=rwa_coupling,
        )

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def _static_part(params: ModelParams, space: HilbertSpace, g_energy: float) -> np.ndarray:
    H = params.omega_cav * number(space)
    H += g_energy * emitter_transfer(space, "g", "g")
    H += params.omega_e * emitter_transfer(space, "e", "e")
    if space.has("f"):
        H += params.omega_f * emitter_transfer(space, "f", "f")
        H += cavity_coupling(params, space)
    return H


def cavity_coupling(params: ModelParams, space: HilbertSpace) -> np.ndarray:
    """Emitter-cavity term on the e-f transition (zero if f is absent)."""
    if not space.has("f"):
        return np.zeros((space.dim, space.dim), dtype=complex)
    fe = emitter_transfer(space, "f", "e")
    ef = emitter_transfer(space, "e", "f")
    a, ad = annihilation(space), creation(space)
    if params.rwa_coupling:
        term = fe @ a + ef @ ad
    else:
        term = (fe + ef) @ (a + ad)
    return params.Omega_cav * term


def hamiltonian_rotating(params: ModelParams, space: HilbertSpace) -> np.ndarray:
    """Time-independent Hamiltonian in the frame co-rotating with the drive."""
    H = _static_part(params, space, params.omega_g + params.omega_L)
    drive = emitter_transfer(space, "e", "g")
    H += params.Omega_eg * (drive + drive.conj().T)
    return H


def hamiltonian_lab(params: ModelParams, space: HilbertSpace, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian with explicit drive phases at time ``t``."""
    H = _static_part(params, space, params.omega_g)
    drive = params.Omega_eg * np.exp(-1j * params.omega_L * t) * emitter_transfer(space, "e", "g")
    H += drive + drive.conj().T
    return H


def frame_rotation(params: ModelParams, space: HilbertSpace, t: float) -> np.ndarray:
    """``R(t) = exp(-i omega_L t |g><g|)``, mapping lab-frame kets to the rotating frame."""
    pg = np.real(np.diag(emitter_transfer(space, "g", "g")))
    return np.diag(np.exp(-1j * params.omega_L * t * pg))


@dataclass(frozen=True)
class DressedLevel:
    energy: float
    state: np.ndarray
    label: str
    kind: str  # "+", "-" or "f"
    n: int
    overlap: float
    runner_up: float

    @property
    def mixed(self) -> bool:
        """True when a second bare component carries more than a quarter of the weight."""
        return self.runner_up > 0.25


def label_basis(space: HilbertSpace) -> list[tuple[str, int, np.ndarray]]:
    """Candidate label states, ordered so that argmax ties favour lower n, then '+'."""
    candidates = []
    for n in range(space.n_fock):
        g = np.zeros(space.dim, dtype=complex)
        e = np.zeros(space.dim, dtype=complex)
        g[space.index("g", n)] = 1.0
        e[space.index("e", n)] = 1.0
        candidates.append(("+", n, (g + e) / np.sqrt(2)))
        candidates.append(("-", n, (g - e) / np.sqrt(2)))
        if space.has("f"):
            f = np.zeros(space.dim, dtype=complex)
            f[space.index("f", n)] = 1.0
            candidates.append(("f", n, f))
    return candidates


def _label_text(kind: str, n: int) -> str:
    if kind == "f":
        return f"|f{n}>"
    return f"|g{n}>{kind}|e{n}>"


def dressed_levels(H: np.ndarray, space: HilbertSpace) -> list[DressedLevel]:
    """Eigenstates of ``H`` sorted by energy, each tagged by its dominant bare component."""
    if not np.allclose(H, H.conj().T, atol=1e-12, rtol=0):
        raise ValueError("Hamiltonian is not Hermitian")
    energies, vectors = np.linalg.eigh(H)
    candidates = label_basis(space)
    basis = np.column_stack([c[2] for c in candidates])
    weights = np.abs(basis.conj().T @ vectors) ** 2

    levels = []
    for k in range(len(energies)):
        w = weights[:, k]
        best = int(np.argmax(w))
        ordered = np.sort(w)
        if ordered[-1] - ordered[-2] < 1e-6:
            warnings.warn(
                f"dressed level {k} at E={energies[k]:.6f} has a degenerate label "
                f"(top overlaps {ordered[-1]:.6f}, {ordered[-2]:.6f})",
                stacklevel=2,
            )
        kind, n, _ = candidates[best]
        levels.append(
            DressedLevel(
                energy=float(energies[k]),
                state=vectors[:, k],
                label=_label_text(kind, n),
                kind=kind,
                n=n,
                overlap=float(w[best]),
                runner_up=float(ordered[-2]),
            )
        )
    return levels
