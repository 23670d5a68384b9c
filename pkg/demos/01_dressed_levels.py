"""
Dressed levels of the driven three-level emitter in a cavity
=============================================================

The drive dresses |g> and |e> into (|g>+-|e>)/sqrt2 pairs split by 2 Omega_eg.
When one of those pairs lines up with an |f n+1> level the counter-rotating
cavity coupling mixes them. Run with ``python3 demos/01_dressed_levels.py``.
"""

# %%
import numpy as np

from dce_ladder import ModelParams, build_space, dressed_levels, hamiltonian_rotating

space = build_space(4)

# %% Weak drive, Omega_eg = 0.7: the ladder is still well labelled
H = hamiltonian_rotating(ModelParams.resonant(0.7), space)
for lvl in dressed_levels(H, space):
    if lvl.energy < 2.5:
        print(f"{lvl.energy:+.4f}  {lvl.label:12s} weight {lvl.overlap:.3f}")

# %% The |g1>-|e1> -> |g0>+|e0> line sits near 2 Omega_eg - 1
levels = {lvl.label: lvl.energy for lvl in dressed_levels(H, space)}
print("2 Omega - 1 line:", abs(levels["|g1>-|e1>"] - levels["|g0>+|e0>"]))

# %% Omega_eg = 2: |g0>+|e0> and |f1> are degenerate without the cavity coupling
H = hamiltonian_rotating(ModelParams.resonant(2.0), space)
mixed = [lvl for lvl in dressed_levels(H, space) if lvl.mixed and lvl.energy < 2.5]
for lvl in mixed:
    print(f"mixed: {lvl.energy:+.4f} {lvl.label} ({lvl.overlap:.2f} / {lvl.runner_up:.2f})")
print("splitting:", mixed[1].energy - mixed[0].energy, "vs sqrt2 * 0.1 =", np.sqrt(2) * 0.1)
