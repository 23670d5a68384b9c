"""Zero-temperature baths and the dissipators of the master equation.

The f-e and cavity channels keep the counter-rotating parts of the system-bath
coupling. Their generator has the time-local form

    L_j[rho] = gamma_j (U rho S + S rho U^+ - S U rho - rho U^+ S),

with ``U = int_0^inf dtau v(tau) exp(-iH tau) S exp(iH tau)``. In the eigenbasis
of H the tau integral is analytic, so ``v(tau)`` is never materialised.
The e-g channel is an ordinary Lindblad decay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .hilbert import HilbertSpace, annihilation, creation, emitter_transfer

BATH_KINDS = ("eg_lindblad", "fe", "cav")


@dataclass(frozen=True)
class BathSpec:
    """Flat bath density of states with Gaussian-smoothed edges.

    ``flat=True`` gives the test-only bath with ``v = 1`` at every frequency.
    """

    gamma: float
    kind: str = "cav"
    omega_edge: float = 0.1
    omega_max: float = 21.0
    delta_omega: float = 0.025
    flat: bool = False

    def __post_init__(self):
        if self.kind not in BATH_KINDS:
            raise ValueError(f"unknown bath kind {self.kind!r}")
        if self.gamma < 0:
            raise ValueError("bath rate must be non-negative")
        if not 0 < self.omega_edge < self.omega_max:
            raise ValueError("need 0 < omega_edge < omega_max")
        if self.delta_omega <= 0:
            raise ValueError("delta_omega must be positive")

    @property
    def support_top(self) -> float:
        """Frequency beyond which v is below ~1e-31."""
        return self.omega_max + 12 * self.delta_omega


def bath_density(spec: BathSpec, omega):
    """v(omega): zero below 0, one on [edge, max], Gaussian tails in between and above."""
    w = np.asarray(omega, dtype=float)
    if spec.flat:
        out = np.ones_like(w)
        return out if out.ndim else float(out)
    lo = np.exp(-((w - spec.omega_edge) ** 2) / (2 * spec.delta_omega**2))
    hi = np.exp(-((w - spec.omega_max) ** 2) / (2 * spec.delta_omega**2))
    out = np.where(w < spec.omega_edge, lo, np.where(w > spec.omega_max, hi, 1.0))
    out = np.where(w < 0, 0.0, out)
    return out if out.ndim else float(out)


def _principal_value(spec: BathSpec, shift: float) -> float:
    """PV integral of v(w) / (w + shift) over the real line.

    Plateau in closed form, Gaussian shoulders by quadrature. v is continuous
    at the plateau edges, so a pole sitting exactly on one is nudged off it.
    v jumps from 0 to v(0) at w = 0, which makes the integral log-divergent
    for a pole there; that pole is moved to -1e-9 (a finite cutoff).
    """
    if spec.flat:
        return 0.0
    a, b = spec.omega_edge, spec.omega_max
    pole = -shift
    for edge in (a, b):
        if abs(pole - edge) < 1e-9:
            pole = edge + 1e-9
    if abs(pole) < 1e-9:
        pole = -1e-9
    total = np.log(abs(b - pole)) - np.log(abs(a - pole))
    # lower shoulder: subtract the jump at 0 so the remainder is smooth there
    v0 = bath_density(spec, 0.0)
    total += v0 * (np.log(abs(a - pole)) - np.log(abs(pole)))
    for lo, hi, base in ((0.0, a, v0), (b, spec.support_top, 0.0)):
        if lo < pole < hi:
            val, _ = integrate.quad(
                lambda w: bath_density(spec, w) - base, lo, hi, weight="cauchy", wvar=pole, limit=200
            )
        else:
            val, _ = integrate.quad(
                lambda w: (bath_density(spec, w) - base) / (w - pole), lo, hi, limit=200
            )
        total += val
    return float(total)


def build_U(
    H: np.ndarray,
    S: np.ndarray,
    spec: BathSpec,
    *,
    lamb_shift: bool = False,
    eig: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Integral operator ``U`` for coupling operator ``S`` under Hamiltonian ``H``.

    In the eigenbasis ``U_mn = S_mn v(w_n - w_m) / 2``; with ``lamb_shift`` the
    principal-value part ``-(i/2pi) S_mn PV int v(w) / (w_m - w_n + w)`` is added.
    """
    if not np.allclose(H, H.conj().T, atol=1e-12, rtol=0):
        raise ValueError("Hamiltonian is not Hermitian")
    energies, V = eig if eig is not None else np.linalg.eigh(H)
    S_eig = V.conj().T @ S @ V
    bohr = energies[None, :] - energies[:, None]  # w_n - w_m
    kernel = 0.5 * bath_density(spec, bohr).astype(complex)
    if lamb_shift:
        rounded = np.round(bohr, 12)
        shifts = {}
        for value in np.unique(rounded):
            shifts[value] = _principal_value(spec, -value)
        pv = np.vectorize(shifts.__getitem__)(rounded)
        kernel -= 1j / (2 * np.pi) * pv
    U_eig = S_eig * kernel
    return V @ U_eig @ V.conj().T


def dissipator_nonrwa(rho, S, U, gamma):
    """gamma (U rho S + S rho U^+ - S U rho - rho U^+ S)."""
    Ud = U.conj().T
    return gamma * (U @ rho @ S + S @ rho @ Ud - S @ U @ rho - rho @ Ud @ S)


def dissipator_lindblad(rho, c, gamma):
    """gamma (c rho c^+ - {c^+ c, rho} / 2)."""
    cd = c.conj().T
    cdc = cd @ c
    return gamma * (c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc))


def sigma_minus_eg(space: HilbertSpace) -> np.ndarray:
    return emitter_transfer(space, "g", "e")


def dissipator_lindblad_eg(rho, gamma_eg, space: HilbertSpace):
    """Spontaneous e -> g decay, identical in the lab and rotating frames."""
    return dissipator_lindblad(rho, sigma_minus_eg(space), gamma_eg)


def coupling_fe(space: HilbertSpace) -> np.ndarray:
    return emitter_transfer(space, "e", "f") + emitter_transfer(space, "f", "e")


def coupling_cav(space: HilbertSpace) -> np.ndarray:
    return annihilation(space) + creation(space)


def lowering_fe(space: HilbertSpace) -> np.ndarray:
    return emitter_transfer(space, "e", "f")


@dataclass(frozen=True)
class BathSet:
    eg: BathSpec = field(default_factory=lambda: BathSpec(0.01, "eg_lindblad"))
    fe: BathSpec = field(default_factory=lambda: BathSpec(1e-3, "fe"))
    cav: BathSpec = field(default_factory=lambda: BathSpec(1e-3, "cav"))

    @classmethod
    def default(
        cls,
        gamma_eg: float = 0.01,
        gamma_fe: float = 1e-3,
        gamma_cav: float = 1e-3,
        **shape,
    ) -> "BathSet":
        """Three baths sharing one edge/cutoff/smoothing shape."""
        return cls(
            BathSpec(gamma_eg, "eg_lindblad", **shape),
            BathSpec(gamma_fe, "fe", **shape),
            BathSpec(gamma_cav, "cav", **shape),
        )


@dataclass(frozen=True)
class DissipatorSet:
    """All dissipative channels for one Hamiltonian.

    With ``rwa=True`` the f-e and cavity channels become Lindblad decays through
    the lowering parts ``|e><f|`` and ``a`` only; ``U_fe``/``U_cav`` then hold
    ``c / 2`` so the bookkeeping still reads ``U = c v / 2``.
    """

    space: HilbertSpace
    baths: BathSet
    sigma_minus_eg: np.ndarray
    S_fe: np.ndarray | None
    S_cav: np.ndarray
    U_fe: np.ndarray | None
    U_cav: np.ndarray
    rwa: bool = False

    @property
    def gamma_eg(self) -> float:
        return self.baths.eg.gamma

    @property
    def gamma_fe(self) -> float:
        return self.baths.fe.gamma

    @property
    def gamma_cav(self) -> float:
        return self.baths.cav.gamma

    def channels(self):
        """(name, emission operator, bath) for the f-e and cavity channels present."""
        out = []
        if self.S_fe is not None:
            op = lowering_fe(self.space) if self.rwa else self.S_fe
            out.append(("fe", op, self.baths.fe))
        op = annihilation(self.space) if self.rwa else self.S_cav
        out.append(("cav", op, self.baths.cav))
        return out

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = dissipator_lindblad(rho, self.sigma_minus_eg, self.gamma_eg)
        if self.rwa:
            if self.S_fe is not None:
                out += dissipator_lindblad(rho, lowering_fe(self.space), self.gamma_fe)
            out += dissipator_lindblad(rho, annihilation(self.space), self.gamma_cav)
            return out
        if self.S_fe is not None:
            out += dissipator_nonrwa(rho, self.S_fe, self.U_fe, self.gamma_fe)
        out += dissipator_nonrwa(rho, self.S_cav, self.U_cav, self.gamma_cav)
        return out


def build_dissipators(
    H: np.ndarray,
    space: HilbertSpace,
    baths: BathSet | None = None,
    *,
    rwa: bool = False,
    lamb_shift: bool = False,
) -> DissipatorSet:
    baths = baths or BathSet.default()
    has_f = space.has("f")
    S_fe = coupling_fe(space) if has_f else None
    S_cav = coupling_cav(space)
    if rwa:
        U_fe = 0.5 * lowering_fe(space) if has_f else None
        U_cav = 0.5 * annihilation(space)
    else:
        eig = np.linalg.eigh(H)
        U_fe = build_U(H, S_fe, baths.fe, lamb_shift=lamb_shift, eig=eig) if has_f else None
        U_cav = build_U(H, S_cav, baths.cav, lamb_shift=lamb_shift, eig=eig)
    return DissipatorSet(
        space=space,
        baths=baths,
        sigma_minus_eg=sigma_minus_eg(space),
        S_fe=S_fe,
        S_cav=S_cav,
        U_fe=U_fe,
        U_cav=U_cav,
        rwa=rwa,
    )
