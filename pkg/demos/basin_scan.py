"""Every amount of two-qubit entanglement flows into the same attractor.

Sample the basin disc |a| <= 1/sqrt(2): the initial tangle covers [0, 1]
while the probability of reaching the attractor at t_r/4 stays close to 1.
"""

import numpy as np

from cavrevive.scenario import run_basin_scan
from _common import pyplot, save

tab = run_basin_scan(n_qubits=2, nbar=50.0, samples=200)
tau, p = tab.column("tau"), tab.column("p_attractor_plus")
print(f"tangle range [{tau.min():.3f}, {tau.max():.3f}], worst P_att+ {p.min():.4f}")

plt = pyplot()
if plt:
    fig, ax = plt.subplots(figsize=(5, 4))
    sc = ax.scatter(tab.column("a_re"), tab.column("a_im"), c=tau, s=18)
    ax.set_aspect("equal")
    ax.set_xlabel("Re a")
    ax.set_ylabel("Im a")
    fig.colorbar(sc, label="initial tangle")
    save(fig, "basin_scan.png")
