"""Forty qubits swap a cat state with the field.

With a = 0 the register starts as a superposition of two spin coherent
states on opposite sides of the Bloch sphere while the field is a single
coherent state.  At t* = t_r/(2 N_q) the roles swap: the register is one
spin coherent state and the field is a two-lobed cat near +-i sqrt(nbar).
By 2 t* the field lobes have merged again.
"""

import math

import numpy as np

from cavrevive import (
    BasinParameter,
    ModelParams,
    basin_state,
    build_propagator,
    characteristic_times,
    coherent_field_amps,
    evolve,
    field_q_function,
    reduce_qubits,
    spin_q_function,
    symmetric_product,
)
from cavrevive.observables import field_grid, lobe_peaks, sphere_grid, superlevel_components
from _common import pyplot, save

params = ModelParams(n_qubits=40, nbar=50.0)
prop = build_propagator(params)
t_star = characteristic_times(params).t_attractor
psi0 = symmetric_product(basin_state(BasinParameter(0, 40)), coherent_field_amps(50.0, 0.0, params.fock_cutoff))

fgrid, sgrid = field_grid(50.0, 201), sphere_grid(181, 361)
panels = []
for label, t in (("0", 0.0), ("t*", t_star), ("2t*", 2 * t_star)):
    psi = evolve(prop, psi0, t)
    fq = field_q_function(psi, fgrid, math.sqrt(50))
    sq = spin_q_function(reduce_qubits(psi), sgrid)
    peaks = ", ".join(f"{w:.2f}" for w, _ in lobe_peaks(fq))
    print(f"t = {label:>3}: field lobes {superlevel_components(fq)[0]} at [{peaks}], "
          f"spin lobes {superlevel_components(sq)[0]}")
    panels.append((label, fq, sq))

plt = pyplot()
if plt:
    fig, ax = plt.subplots(2, 3, figsize=(10, 6))
    r = math.sqrt(50)
    for col, (label, fq, sq) in enumerate(panels):
        # axes scaled so the coherent amplitude sits on the unit circle
        x = fgrid[0].real / r
        ax[0, col].contourf(x, x, fq.values, np.linspace(0, fq.values.max(), 31), extend="min")
        ax[0, col].set_aspect("equal")
        ax[0, col].set_title(f"field Q, t = {label}")
        pol, az = sgrid
        ax[1, col].contourf(az, pol, sq.values, np.linspace(0, sq.values.max(), 31), extend="min")
        ax[1, col].invert_yaxis()
        ax[1, col].set_title(f"spin Q, t = {label}")
    fig.tight_layout()
    save(fig, "forty_qubit_cat.png")
