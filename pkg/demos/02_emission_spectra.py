"""
Emission spectra of the cavity and f-e channels
===============================================

Spectra follow from the regression theorem, evaluated through the pole
expansion of the generator. Peaks sit at dressed transition frequencies.
"""

# %%
from dce_ladder import ModelParams, build_system, find_peaks

# %% Omega_eg = 0.7: lines near 0.3, 0.4, 1 and 1.7
system = build_system(ModelParams.resonant(0.7), 8)
for channel in ("cav", "fe"):
    spec = system.spectrum(channel)
    peaks = find_peaks(spec.omega_grid, spec.g_values)
    print(channel, "peaks:", peaks.round(4), "intensity:", f"{spec.intensity:.3e}")

# %% Omega_eg = 2: the resonant mixing shows up as a doublet at 1 +- 0.1/sqrt2
system = build_system(ModelParams.resonant(2.0), 8)
spec = system.spectrum("fe")
print("fe doublet:", find_peaks(spec.omega_grid, spec.g_values).round(4))

# %% Within the rotating-wave approximation nothing is emitted
system = build_system(ModelParams.resonant(0.7, rwa_coupling=True), 8)
print("RWA max G:", abs(system.spectrum("cav").g_values).max())
