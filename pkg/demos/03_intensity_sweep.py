"""
Total intensities versus drive strength
=======================================

A coarse version of the default sweep: thresholds near Omega_eg = 0.5 and 1,
resonances near 1 and 2. The full 101-point sweep is ``dce-ladder sweep``.
"""

# %%
import numpy as np

from dce_ladder.runs import RunConfig, run_intensity_sweep

config = RunConfig(n_max=8, max_n_max=12)
values = np.round(np.arange(0.2, 2.51, 0.1), 3)
ds = run_intensity_sweep(config, values)

# %%
print(f"{'Omega_eg':>8} {'I_cav':>11} {'I_fe':>11} {'n_max':>5}")
for row in ds.rows:
    omega, i_cav, i_fe, *_ = row
    n_used = row[ds.columns.index("n_max_used")]
    print(f"{omega:8.2f} {i_cav:11.3e} {i_fe:11.3e} {n_used:5d}")

# %% Decoupling the cavity removes the resonances but keeps the f-e threshold
decoupled = run_intensity_sweep(config.with_(omega_cav_zero=True), [0.9, 1.1])
i_fe = decoupled.column("I_fe")
print("Omega_cav = 0: I_fe(1.1)/I_fe(0.9) =", i_fe[1] / i_fe[0])
