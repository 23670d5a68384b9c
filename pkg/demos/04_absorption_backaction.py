"""
Back-action on the drive: absorption dips
=========================================

Photon generation near the resonances pulls population out of the driven
g-e pair, which shows up as dips in the absorbed photon rate R_eg.
Without the cavity coupling R_eg follows the two-level Bloch result.
"""

# %%
import numpy as np

from dce_ladder import ModelParams, build_system

gamma = 0.01


def bloch(omega):
    return gamma * omega**2 / (gamma**2 / 4 + 2 * omega**2)


# %%
for omega in (0.3, 0.6, 0.9, 0.975, 1.0, 1.1, 1.9, 2.0, 2.1):
    coupled = build_system(ModelParams.resonant(omega), 8).absorption_rate()
    bare = build_system(ModelParams.resonant(omega, 0.0), 8).absorption_rate()
    print(f"Omega_eg={omega:5.3f}  R_eg={coupled:.5e}  Omega_cav=0: {bare:.5e}  Bloch: {bloch(omega):.5e}")

# %% The photon distribution at the first resonance reaches far up the ladder
p = build_system(ModelParams.resonant(0.99), 12).photon_distribution()
print("p(n):", np.array2string(p, precision=2))
