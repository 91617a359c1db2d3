"""How close is the field at t* to the two-coherent-state prediction?

For two qubits with a = 0 the field at t_r/4 is close to a superposition of
|i alpha> and |-i alpha>.  The overlap with that prediction creeps up with
nbar but settles near 0.64: each evolved lobe carries a quadratic phase
in n from the curvature of sqrt(n), which does not shrink as nbar grows.
"""

from cavrevive import (
    BasinParameter,
    ModelParams,
    basin_state,
    build_propagator,
    characteristic_times,
    coherent_field_amps,
    evolve,
    predicted_field_state,
    symmetric_product,
)
from cavrevive.observables import field_fidelity

p = BasinParameter(0.0, 2)
for nbar in (25.0, 50.0, 100.0, 200.0, 400.0):
    params = ModelParams(2, nbar)
    psi0 = symmetric_product(basin_state(p), coherent_field_amps(nbar, 0.0, params.fock_cutoff))
    psi = evolve(build_propagator(params), psi0, characteristic_times(params).t_attractor)
    print(f"nbar = {nbar:5.0f}: overlap {field_fidelity(psi, predicted_field_state(p, params)):.5f}")
