"""One parameter point: Hamiltonian, dissipators, generator and cached solves."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import liouvillian as lv
from . import observables as obs
from .baths import BathSet, DissipatorSet, build_dissipators
from .hilbert import HilbertSpace, build_space
from .model import ModelParams, hamiltonian_rotating


@dataclass
class OpenSystem:
    params: ModelParams
    space: HilbertSpace
    baths: BathSet
    H: np.ndarray
    dissipators: DissipatorSet
    L: np.ndarray = field(repr=False)

    @cached_property
    def _steady(self) -> tuple[np.ndarray, float]:
        return lv.steady_state(self.L, return_norm=True)

    @property
    def rho_ss(self) -> np.ndarray:
        return self._steady[0]

    @cached_property
    def modes(self) -> lv.Modes:
        return lv.decompose(self.L)

    @property
    def residual(self) -> float:
        return lv.residual(self.L, *self._steady)

    def channel(self, name: str):
        for ch in self.dissipators.channels():
            if ch[0] == name:
                return ch
        raise KeyError(f"no emission channel {name!r} in this system")

    def modal_spectrum(self, name: str) -> obs.ModalSpectrum:
        _, op, bath = self.channel(name)
        return obs.modal_spectrum(self.L, self.rho_ss, op, bath, modes=self.modes)

    def intensities(self) -> dict[str, float]:
        return {name: self.modal_spectrum(name).intensity() for name, _, _ in self.dissipators.channels()}

    def spectrum(self, name: str, omega_grid=None, **kwargs) -> obs.SpectrumResult:
        _, op, bath = self.channel(name)
        return obs.emission_spectrum(
            self.L, self.rho_ss, op, bath, omega_grid, modes=self.modes, channel=name, **kwargs
        )

    def absorption_rate(self) -> float:
        return obs.absorption_rate(self.rho_ss, self.params.Omega_eg, self.space)

    def photon_distribution(self) -> np.ndarray:
        return obs.photon_distribution(self.rho_ss, self.space)


def build_system(
    params: ModelParams,
    space: HilbertSpace | int = 8,
    baths: BathSet | None = None,
    *,
    lamb_shift: bool = False,
    rwa_dissipators: bool | None = None,
) -> OpenSystem:
    """Assemble the generator for one parameter point.

    RWA coupling implies RWA dissipators unless ``rwa_dissipators`` says otherwise.
    """
    if not isinstance(space, HilbertSpace):
        space = build_space(space)
    baths = baths or BathSet.default()
    rwa = params.rwa_coupling if rwa_dissipators is None else rwa_dissipators
    H = hamiltonian_rotating(params, space)
    D = build_dissipators(H, space, baths, rwa=rwa, lamb_shift=lamb_shift)
    return OpenSystem(params, space, baths, H, D, lv.assemble(H, D))
