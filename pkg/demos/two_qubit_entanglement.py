"""Two qubits: attractor at t_r/4 and the fate of their entanglement.

Starting from the Bell-like basin state a = 1/sqrt(2) the register falls into
the attractor near t_r/4, with the entropy nearly back at zero.  The two-qubit
tangle dies during the collapse and only partly returns: it peaks near
t_r/2 and again, lower, near t_r.
"""

import numpy as np

from cavrevive import (
    BasinParameter,
    ModelParams,
    attractor_state,
    basin_state,
    build_propagator,
    characteristic_times,
    coherent_field_amps,
    entropy,
    evolve_series,
    mixed_tangle,
    pure_tangle,
    reduce_qubits,
    state_probability,
    symmetric_product,
    symmetric_to_two_qubit,
)
from _common import pyplot, save

params = ModelParams(n_qubits=2, nbar=50.0)
tr = characteristic_times(params).t_revival
q0 = basin_state(BasinParameter(1 / np.sqrt(2), 2))
print(f"initial tangle {pure_tangle(q0):.6f}")

prop = build_propagator(params)
psi0 = symmetric_product(q0, coherent_field_amps(50.0, 0.0, params.fock_cutoff))
t = np.linspace(0, 50, 5001)
plus, minus = attractor_state(1, 0.0, 2), attractor_state(-1, 0.0, 2)
rows = []
for psi in evolve_series(prop, psi0, t):
    rho = reduce_qubits(psi)
    rows.append((state_probability(psi, plus), state_probability(psi, minus), entropy(rho),
                 mixed_tangle(symmetric_to_two_qubit(rho))))
p_plus, p_minus, s, tau = np.array(rows).T

i = np.argmax(p_plus)
print(f"P_att+ peaks at t = {t[i]:.2f} (t_r/4 = {tr / 4:.2f}) with {p_plus[i]:.4f}")
for centre in (tr / 2, tr):
    m = np.abs(t - centre) < 3
    j = np.flatnonzero(m)[np.argmax(tau[m])]
    print(f"tangle near t = {centre:.1f}: max {tau[j]:.3f} at {t[j]:.2f}")

plt = pyplot()
if plt:
    fig, ax = plt.subplots(3, 1, sharex=True, figsize=(7, 6))
    ax[0].plot(t, p_plus, lw=0.7, label="+")
    ax[0].plot(t, p_minus, lw=0.7, label="-")
    ax[0].legend()
    ax[0].set_ylabel("P_att")
    ax[1].plot(t, s, lw=0.7)
    ax[1].set_ylabel("S (nats)")
    ax[2].plot(t, tau, lw=0.7)
    ax[2].set_ylabel("tangle")
    ax[2].set_xlabel("lambda t")
    save(fig, "two_qubit_entanglement.png")
