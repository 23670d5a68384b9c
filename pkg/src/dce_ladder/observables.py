"""Steady-state observables: two-time correlations, emission spectra, intensities.

Emission spectra use the ordering <S(t) S(t+tau)> = <S(t+tau) S(t)>^*, i.e.

    G(w) = gamma v(w) int dtau e^{i w tau} <S^+(t) S(t+tau)>,

so that a system sitting in its ground state does not radiate and the total
intensity ``I = (1/2pi) int G dw`` equals the sum of bath-induced transition
rates ``gamma |<fin|S|in>|^2 v(w_in - w_fin)`` weighted by populations.
For Hermitian S the half-range transform suffices:
``G(w) = gamma v(w) 2 Re Tr[S x(w)]`` with ``(L + i w) x = -(rho S^+ - <S^+> rho)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .baths import BathSpec, bath_density
from .hilbert import HilbertSpace, emitter_transfer
from .liouvillian import Modes, decompose, propagate, unvec, vec


@dataclass(frozen=True)
class SpectrumResult:
    omega_grid: np.ndarray
    g_values: np.ndarray
    coherent_weight: float
    intensity: float
    channel: str = ""


def expect(op: np.ndarray, rho: np.ndarray) -> complex:
    return complex(np.trace(op @ rho))


def two_time_correlation(L, rho_ss, A, taus, B=None, modes: Modes | None = None):
    """``<A(t+tau) B(t)> = Tr[A exp(L tau)(B rho_ss)]`` for ``tau >= 0`` (B defaults to A)."""
    B = A if B is None else B
    states = propagate(L, B @ rho_ss, taus, modes=modes)
    return np.array([np.trace(A @ r) for r in states])


def emission_correlation(L, rho_ss, A, taus, modes: Modes | None = None):
    """``<A^+(t) A(t+tau)> = Tr[A exp(L tau)(rho_ss A^+)]``, fluctuation part only."""
    src = rho_ss @ A.conj().T
    src = src - np.trace(src) * rho_ss
    states = propagate(L, src, taus, modes=modes)
    return np.array([np.trace(A @ r) for r in states])


def _source(rho_ss, A):
    src = rho_ss @ A.conj().T
    return src - np.trace(src) * rho_ss


def coherent_weight(rho_ss, A, bath: BathSpec) -> float:
    """Intensity carried by the stationary part <A^+><A>, which sits at w = 0."""
    return float(bath.gamma * bath_density(bath, 0.0) * abs(expect(A, rho_ss)) ** 2)


def resolvent_spectrum(L, rho_ss, A, bath: BathSpec, omega_grid) -> np.ndarray:
    """G(w) by one deflated linear solve per frequency.

    The rank-one term ``vec(rho_ss) vec(1)^T`` removes the kernel so w = 0 is
    regular; it does not change the solution because the source is traceless.
    """
    dim = rho_ss.shape[0]
    omega_grid = np.asarray(omega_grid, dtype=float)
    b = -vec(_source(rho_ss, A))
    deflated = L + np.outer(vec(rho_ss), vec(np.eye(dim)))
    a_row = vec(A.T)
    out = np.empty(omega_grid.size)
    eye = np.eye(L.shape[0])
    for k, w in enumerate(omega_grid):
        x = linalg.solve(deflated + 1j * w * eye, b)
        out[k] = 2.0 * np.real(a_row @ x)
    return bath.gamma * bath_density(bath, omega_grid) * out


@dataclass(frozen=True)
class ModalSpectrum:
    """Pole expansion ``Tr[A x(w)] = sum_k amp_k / (-lam_k - i w)``."""

    eigenvalues: np.ndarray
    amplitudes: np.ndarray
    bath: BathSpec
    coherent: float

    def __call__(self, omega):
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        out = np.empty(w.size)
        lam, amp = self.eigenvalues, self.amplitudes
        for start in range(0, w.size, 512):
            chunk = w[start : start + 512]
            terms = amp[None, :] / (-lam[None, :] - 1j * chunk[:, None])
            out[start : start + 512] = 2.0 * np.real(terms.sum(axis=1))
        g = self.bath.gamma * bath_density(self.bath, w) * out
        return g if np.ndim(omega) else float(g[0])

    def poles(self, weight_floor: float = 1e-12):
        """(centre, half-width) of the poles that carry non-negligible weight."""
        scale = np.abs(self.amplitudes / self.eigenvalues.real).max(initial=0.0)
        keep = np.abs(self.amplitudes / self.eigenvalues.real) > weight_floor * max(scale, 1e-300)
        return -self.eigenvalues.imag[keep], -self.eigenvalues.real[keep]

    def intensity(self, tail_nodes: int = 64, tail_panels: int = 40) -> float:
        """``(1/2pi) int G dw + coherent`` with the plateau done in closed form.

        On [edge, max] each pole integrates to ``i [log(-lam - i max) - log(-lam - i edge)]``;
        the Gaussian shoulders go through composite Gauss-Legendre.
        """
        bath, lam, amp = self.bath, self.eigenvalues, self.amplitudes
        if bath.flat:
            raise ValueError("flat test bath has unbounded support; integrate on a grid")
        a, b = bath.omega_edge, bath.omega_max
        J = 1j * (np.log(-lam - 1j * b) - np.log(-lam - 1j * a))
        x, wts = np.polynomial.legendre.leggauss(tail_nodes)
        for lo, hi in ((0.0, a), (b, bath.support_top)):
            edges = np.linspace(lo, hi, tail_panels + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[1:] + edges[:-1])
            nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
            weights = (half[:, None] * wts[None, :]).ravel() * bath_density(bath, nodes)
            J += (weights[:, None] / (-lam[None, :] - 1j * nodes[:, None])).sum(axis=0)
        return float(bath.gamma / np.pi * np.real(np.sum(amp * J)) + self.coherent)


def modal_spectrum(L, rho_ss, A, bath: BathSpec, modes: Modes | None = None) -> ModalSpectrum:
    modes = modes if modes is not None else decompose(L)
    lam = modes.eigenvalues
    src = vec(_source(rho_ss, A))
    amp = modes.functional(A) * modes.coefficients(src)
    kernel = np.argmin(np.abs(lam))
    keep = np.ones(lam.size, dtype=bool)
    keep[kernel] = False
    return ModalSpectrum(lam[keep], amp[keep], bath, coherent_weight(rho_ss, A, bath))


def emission_correlation_series(rho_ss, A, taus_step: float, count: int, modes: Modes) -> np.ndarray:
    """``<A^+(t) A(t+tau)>`` (fluctuation part) on ``tau = k * taus_step``, k < count.

    Sums the mode expansion directly, advancing blocks of 1024 samples by
    ``exp(lam * block_length)`` instead of evaluating an exponential per sample.
    """
    lam = modes.eigenvalues
    amp = modes.functional(A) * modes.coefficients(vec(_source(rho_ss, A)))
    block = 1024
    local = np.exp(np.outer(np.arange(block) * taus_step, lam))
    step = np.exp(lam * block * taus_step)
    out = np.empty(count, dtype=complex)
    weights = amp.astype(complex)
    for start in range(0, count, block):
        n = min(block, count - start)
        out[start : start + n] = local[:n] @ weights
        weights = weights * step
    return out


def fft_spectrum(rho_ss, A, bath: BathSpec, *, dt: float, t_max: float, modes: Modes):
    """G(w) from an FFT of the sampled emission correlation (trapezoidal half-range transform).

    Returns ``(omega, G)`` on the FFT frequencies ``2 pi k / (N dt)`` in ``[0, pi/dt)``.
    Independent of the resolvent route; meant as a cross-check.
    """
    n = int(np.ceil(t_max / dt))
    c = emission_correlation_series(rho_ss, A, dt, n, modes)
    transform = dt * (n * np.fft.ifft(c) - 0.5 * c[0])
    omega = 2 * np.pi * np.fft.fftfreq(n, d=dt)
    keep = omega >= 0
    omega, transform = omega[keep], transform[keep]
    return omega, bath.gamma * bath_density(bath, omega) * 2.0 * transform.real


def default_omega_grid(start: float = 0.0, stop: float = 4.0, step: float = 2e-3) -> np.ndarray:
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


def refine_grid(base, centres, widths, points_per_pole: int = 81, span: float = 1.55):
    """Add points ``c + w tan(theta)`` around each pole so Lorentzians integrate accurately."""
    base = np.asarray(base, dtype=float)
    lo, hi = base.min(), base.max()
    theta = np.linspace(-span, span, points_per_pole)
    extra = [base]
    for c, w in zip(centres, widths):
        if lo - 20 * w <= c <= hi + 20 * w:
            pts = c + w * np.tan(theta)
            extra.append(pts[(pts >= lo) & (pts <= hi)])
    return np.unique(np.concatenate(extra))


def emission_spectrum(
    L,
    rho_ss,
    A,
    bath: BathSpec,
    omega_grid=None,
    *,
    method: str = "modes",
    refine: bool = True,
    modes: Modes | None = None,
    channel: str = "",
) -> SpectrumResult:
    """Incoherent emission spectrum on a grid plus the coherent weight.

    ``method="resolvent"`` solves the linear system at every grid point;
    ``method="modes"`` evaluates the pole expansion of ``L`` (much faster, used
    for pole-refined grids).
    """
    grid = default_omega_grid() if omega_grid is None else np.asarray(omega_grid, dtype=float)
    if method == "resolvent":
        g = resolvent_spectrum(L, rho_ss, A, bath, grid)
        coh = coherent_weight(rho_ss, A, bath)
    elif method == "modes":
        spec = modal_spectrum(L, rho_ss, A, bath, modes=modes)
        if refine:
            grid = refine_grid(grid, *spec.poles())
        g = spec(grid)
        coh = spec.coherent
    else:
        raise ValueError(f"unknown method {method!r}")
    intensity = _trapezoid_intensity(grid, g, coh)
    return SpectrumResult(grid, g, coh, intensity, channel)


def _trapezoid_intensity(grid, g, coherent) -> float:
    return float(np.trapezoid(g, grid) / (2 * np.pi) + coherent)


def total_intensity(spectrum: SpectrumResult) -> float:
    """``(1/2pi) int G dw + coherent weight`` by the trapezoidal rule."""
    g = spectrum.g_values
    peak = np.abs(g).max(initial=0.0)
    if peak > 0 and max(abs(g[0]), abs(g[-1])) > 1e-4 * peak:
        warnings.warn("spectrum does not decay at the grid boundary; widen the frequency grid", stacklevel=2)
    return _trapezoid_intensity(spectrum.omega_grid, g, spectrum.coherent_weight)


def find_peaks(omega, g, rel_floor: float = 1e-3) -> np.ndarray:
    """Frequencies of interior local maxima above ``rel_floor * max(g)``."""
    g = np.asarray(g)
    if g.size < 3:
        return np.array([])
    inner = (g[1:-1] > g[:-2]) & (g[1:-1] >= g[2:]) & (g[1:-1] > rel_floor * g.max())
    return np.asarray(omega)[1:-1][inner]


def absorption_rate(rho_ss, Omega_eg: float, space: HilbertSpace) -> float:
    """Photons absorbed from the drive per unit time, ``2 Omega Im Tr[|e><g| rho]``."""
    sigma_plus = emitter_transfer(space, "e", "g")
    return float(2.0 * Omega_eg * np.imag(np.trace(sigma_plus @ rho_ss)))


def photon_distribution(rho_ss, space: HilbertSpace) -> np.ndarray:
    diag = np.real(np.diag(rho_ss)).reshape(space.n_fock, space.n_levels)
    return diag.sum(axis=1)
