"""One qubit meets a coherent field.

The qubit starts in |g> and the field in a coherent state with nbar = 50.
Rabi oscillations wash out after t_c = sqrt(2)/lambda, come back near
t_r = 2 pi sqrt(nbar)/lambda, and halfway between the two the qubit sits
almost exactly in a pure state (the attractor) even though the oscillations
have vanished.
"""

import numpy as np

from cavrevive import (
    ModelParams,
    attractor_state,
    build_propagator,
    characteristic_times,
    coherent_field_amps,
    dicke_state,
    entropy,
    evolve_series,
    reduce_qubits,
    state_probability,
    symmetric_product,
)
from _common import pyplot, save

params = ModelParams(n_qubits=1, nbar=50.0)
times = characteristic_times(params)
print(f"t_c = {times.t_collapse:.3f}, t_r = {times.t_revival:.3f}, t_r/2 = {times.t_attractor:.3f}")

prop = build_propagator(params)
psi0 = symmetric_product(dicke_state(1, 0), coherent_field_amps(50.0, 0.0, params.fock_cutoff))

t = np.linspace(0, 50, 5001)
g = dicke_state(1, 0)
att = attractor_state(+1, 0.0, 1)
pg, patt, s = [], [], []
for psi in evolve_series(prop, psi0, t):
    pg.append(state_probability(psi, g))
    patt.append(state_probability(psi, att))
    s.append(entropy(reduce_qubits(psi)))
pg, patt, s = map(np.array, (pg, patt, s))

# the entropy dips back towards zero at t_r/2: the qubit has disentangled
i = np.argmin(np.abs(t - times.t_attractor))
print(f"at t_r/2: P_att+ = {patt[i]:.4f}, entropy = {s[i]:.4f} nats")

plt = pyplot()
if plt:
    fig, ax = plt.subplots(3, 1, sharex=True, figsize=(7, 6))
    for a, y, lab in zip(ax, (pg, patt, s), ("P_g", "P_att+", "S (nats)")):
        a.plot(t, y, lw=0.7)
        a.set_ylabel(lab)
        a.axvline(times.t_attractor, color="grey", ls=":")
    ax[-1].set_xlabel("lambda t")
    save(fig, "single_qubit_revival.png")
