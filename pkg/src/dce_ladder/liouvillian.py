"""Master-equation generator on column-stacked density matrices.

``vec(A rho B) = (B^T kron A) vec(rho)`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse

from .baths import DissipatorSet, annihilation, lowering_fe


class SteadyStateError(RuntimeError):
    pass


class KernelDimensionError(SteadyStateError):
    """The generator has more than one (numerically) zero singular value."""


class NoConvergence(SteadyStateError):
    pass


class PositivityError(SteadyStateError):
    """Steady state has an eigenvalue below the positivity tolerance."""


POSITIVITY_TOL = 1e-7


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    dim = dim or int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(dim, dim, order="F")


def spre(A):
    return np.kron(np.eye(A.shape[0]), A)


def spost(B):
    return np.kron(B.T, np.eye(B.shape[0]))


def sandwich(A, B):
    """Superoperator of rho -> A rho B."""
    return np.kron(B.T, A)


def commutator_super(H: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i [H, rho]."""
    return -1j * (spre(H) - spost(H))


def lindblad_super(c: np.ndarray, gamma: float) -> np.ndarray:
    cd = c.conj().T
    cdc = cd @ c
    return gamma * (sandwich(c, cd) - 0.5 * (spre(cdc) + spost(cdc)))


def nonrwa_super(S: np.ndarray, U: np.ndarray, gamma: float) -> np.ndarray:
    Ud = U.conj().T
    return gamma * (sandwich(U, S) + sandwich(S, Ud) - spre(S @ U) - spost(Ud @ S))


def assemble(H: np.ndarray, dissipators: DissipatorSet) -> np.ndarray:
    """Dense generator ``L`` with ``L vec(rho) = vec(-i[H, rho] + sum_j L_j[rho])``."""
    dim = dissipators.space.dim
    if H.shape != (dim, dim):
        raise ValueError(f"Hamiltonian shape {H.shape} does not match space dim {dim}")
    L = commutator_super(H)
    L += lindblad_super(dissipators.sigma_minus_eg, dissipators.gamma_eg)
    space = dissipators.space
    if dissipators.rwa:
        if dissipators.S_fe is not None:
            L += lindblad_super(lowering_fe(space), dissipators.gamma_fe)
        L += lindblad_super(annihilation(space), dissipators.gamma_cav)
    else:
        if dissipators.S_fe is not None:
            L += nonrwa_super(dissipators.S_fe, dissipators.U_fe, dissipators.gamma_fe)
        L += nonrwa_super(dissipators.S_cav, dissipators.U_cav, dissipators.gamma_cav)
    return L


def apply(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(L @ vec(rho), rho.shape[0])


def steady_state(L: np.ndarray, *, check_positivity: bool = True, return_norm: bool = False):
    """Unique stationary state from the smallest right-singular vector of ``L``.

    With ``return_norm`` also returns ``||L||_2``, which the SVD gives for free
    (the Hermitian basis is unitary, so the real generator has the same norm).
    """
    dim = int(round(np.sqrt(L.shape[0])))
    T = hermitian_basis(dim)
    try:
        _, s, Vh = linalg.svd(to_real(L, T))
    except linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    norm = s[0]
    if s[-2] < 1e-8 * norm:
        raise KernelDimensionError(
            f"non-unique steady state: smallest singular values {s[-1]:.3e}, {s[-2]:.3e} "
            f"(norm {norm:.3e})"
        )
    rho = unvec(T @ Vh[-1], dim)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    if check_positivity:
        lowest = np.linalg.eigvalsh(rho)[0]
        if lowest < -POSITIVITY_TOL:
            raise PositivityError(f"steady state has eigenvalue {lowest:.3e} < -{POSITIVITY_TOL}")
    return (rho, float(norm)) if return_norm else rho


def residual(L: np.ndarray, rho: np.ndarray, norm: float | None = None) -> float:
    """``||L vec(rho)|| / ||L||`` (spectral norm of L, computed unless given)."""
    norm = np.linalg.norm(L, 2) if norm is None else norm
    return float(np.linalg.norm(L @ vec(rho)) / norm)


def hermitian_basis(dim: int) -> sparse.csr_matrix:
    """Columns are vec(B_k) for an orthonormal Hermitian operator basis.

    Order: diagonal units, then ``(E_ij + E_ji)/sqrt2`` and ``i(E_ij - E_ji)/sqrt2``
    for i < j. The matrix is unitary, and Hermitian operators have real coordinates.
    """
    rows, cols, vals = [], [], []
    k = 0
    for i in range(dim):
        rows.append(i + i * dim)
        cols.append(k)
        vals.append(1.0)
        k += 1
    r2 = 1 / np.sqrt(2)
    for i in range(dim):
        for j in range(i + 1, dim):
            rows += [i + j * dim, j + i * dim]
            cols += [k, k]
            vals += [r2, r2]
            rows += [i + j * dim, j + i * dim]
            cols += [k + 1, k + 1]
            vals += [1j * r2, -1j * r2]
            k += 2
    return sparse.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(dim * dim, dim * dim))


def to_real(L: np.ndarray, T: sparse.csr_matrix) -> np.ndarray:
    """``T^+ L T``; real because L maps Hermitian operators to Hermitian operators."""
    Lr = (T.conj().T @ (T.T @ L.T).T)
    imag = np.abs(Lr.imag).max(initial=0.0)
    if imag > 1e-9 * max(np.abs(Lr.real).max(initial=0.0), 1.0):
        raise ValueError(f"generator does not preserve Hermiticity (imaginary part {imag:.2e})")
    return np.ascontiguousarray(Lr.real)


@dataclass(frozen=True)
class Modes:
    """Eigendecomposition of ``L`` in the Hermitian basis ``T``.

    ``L = T V diag(lam) V^-1 T^+``; ``left`` holds the rows of ``V^-1``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    basis: sparse.csr_matrix
    condition: float

    def coefficients(self, v: np.ndarray) -> np.ndarray:
        """Mode amplitudes of a column-stacked operator."""
        return self.left @ (self.basis.conj().T @ v)

    def functional(self, A: np.ndarray) -> np.ndarray:
        """``Tr[A X_k]`` for every right mode ``X_k``."""
        return (self.basis.T @ vec(A.T)) @ self.right

    def evolve(self, coeffs: np.ndarray, tau: float) -> np.ndarray:
        return self.basis @ (self.right @ (np.exp(self.eigenvalues * tau) * coeffs))


def decompose(L: np.ndarray) -> Modes:
    dim = int(round(np.sqrt(L.shape[0])))
    T = hermitian_basis(dim)
    lam, V = linalg.eig(to_real(L, T))
    Vinv = linalg.inv(V)
    cond = float(np.linalg.norm(V, 1) * np.linalg.norm(Vinv, 1))
    return Modes(lam, V, Vinv, T, cond)


MAX_CONDITION = 1e8


def propagate(L: np.ndarray, rho0: np.ndarray, taus, modes: Modes | None = None) -> list[np.ndarray]:
    """``exp(L tau) rho0`` on a non-decreasing grid of ``tau >= 0``.

    Uses the eigendecomposition when well conditioned, otherwise stepwise
    scaled-and-squared exponentials.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.size and (taus[0] < 0 or np.any(np.diff(taus) < 0)):
        raise ValueError("tau grid must be non-negative and non-decreasing")
    dim = rho0.shape[0]
    v0 = vec(rho0).astype(complex)
    if modes is None:
        modes = decompose(L)
    out = []
    if modes.condition <= MAX_CONDITION:
        coeffs = modes.coefficients(v0)
        for tau in taus:
            if tau == 0:
                out.append(rho0.astype(complex).copy())
                continue
            out.append(unvec(modes.evolve(coeffs, tau), dim))
        return out
    v, t_prev = v0, 0.0
    cache: dict[float, np.ndarray] = {}
    for tau in taus:
        dt = tau - t_prev
        if dt > 0:
            key = round(dt, 14)
            if key not in cache:
                cache[key] = linalg.expm(L * dt)
            v = cache[key] @ v
        out.append(unvec(v, dim) if tau > 0 else rho0.astype(complex).copy())
        t_prev = tau
    return out


def secularize(L: np.ndarray, H: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Drop every element of ``L`` that couples eigenbasis coherences with different Bohr frequencies.

    Diagnostic only: the model itself is deliberately non-secular. The result is
    the secular (Davies-type) limit of the same generator.
    """
    energies, V = np.linalg.eigh(H)
    W = np.kron(V.conj(), V)  # vec(V X V^+) = W vec(X)
    in_eig = W.conj().T @ L @ W
    bohr = (energies[:, None] - energies[None, :]).reshape(-1, order="F")
    keep = np.abs(bohr[:, None] - bohr[None, :]) < tol
    return W @ np.where(keep, in_eig, 0.0) @ W.conj().T
