import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavrevive import (
    InvalidDensity,
    ModelParams,
    QubitDensityMatrix,
    QubitPureState,
    SymmetricState,
    TwoQubitDensityMatrix,
    attractor_state,
    build_propagator,
    coherent_field_amps,
    dicke_state,
    entropy,
    evolve,
    field_entropy,
    field_q_function,
    mixed_tangle,
    pure_tangle,
    reduce_qubits,
    spin_q_function,
    state_probability,
    symmetric_product,
    symmetric_to_two_qubit,
)
from cavrevive.observables import (
    concurrence,
    field_grid,
    q_mass,
    sphere_grid,
    superlevel_components,
)
from cavrevive.oracle import full_product, reduce_full_qubits


def test_entropy_pure_is_zero():
    assert entropy(np.diag([1.0, 0.0])) == 0.0


def test_entropy_maximally_mixed():
    assert entropy(np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-15)
    assert entropy(np.eye(5) / 5) == pytest.approx(math.log(5), abs=1e-14)


def test_entropy_rejects_negative_spectrum():
    with pytest.raises(InvalidDensity):
        entropy(np.diag([1.1, -0.1]))


def test_density_validation():
    with pytest.raises(InvalidDensity):
        QubitDensityMatrix(1, np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(InvalidDensity):
        QubitDensityMatrix(1, np.eye(2))
    with pytest.raises(InvalidDensity):
        TwoQubitDensityMatrix(np.eye(3) / 3)


def test_product_state_entropies_vanish():
    q = QubitPureState(2, np.array([0.6, 0.0, 0.8]))
    psi = symmetric_product(q, coherent_field_amps(10.0, 0.0, 60))
    assert entropy(reduce_qubits(psi)) < 1e-12
    assert field_entropy(psi) < 1e-12


def test_subsystem_entropies_agree(rng):
    psi0 = symmetric_product(dicke_state(3, 1), coherent_field_amps(15.0, 0.0, 70))
    prop = build_propagator(ModelParams(3, 15.0, fock_cutoff=70))
    for t in rng.uniform(0, 40, 10):
        psi = evolve(prop, psi0, t)
        assert entropy(reduce_qubits(psi)) == pytest.approx(field_entropy(psi), abs=1e-10)


def test_state_probability_matches_density():
    psi = symmetric_product(attractor_state(1, 0.2, 3), coherent_field_amps(4.0, 0.0, 40))
    tgt = attractor_state(1, 0.2, 3)
    rho = reduce_qubits(psi).rho
    assert state_probability(psi, tgt) == pytest.approx(np.real(tgt.amps.conj() @ rho @ tgt.amps), abs=1e-14)
    assert state_probability(psi, tgt) == pytest.approx(1.0, abs=1e-12)
    assert state_probability(psi, attractor_state(-1, 0.2, 3)) == pytest.approx(0.0, abs=1e-12)


def test_attractors_orthogonal():
    for n in range(1, 8):
        assert abs(attractor_state(1, 0.4, n).overlap(attractor_state(-1, 0.4, n))) < 1e-14


# -- tangle -------------------------------------------------------------


def test_pure_tangle_reference_states():
    bell = QubitPureState(2, np.array([1, 0, 1]) / math.sqrt(2))
    assert pure_tangle(bell) == pytest.approx(1.0, abs=1e-14)
    assert pure_tangle(dicke_state(2, 1)) == pytest.approx(1.0, abs=1e-14)
    assert pure_tangle(dicke_state(2, 0)) == 0.0
    assert pure_tangle(attractor_state(1, 0.7, 2)) == pytest.approx(0.0, abs=1e-14)


def test_werner_state():
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho = 0.9 * np.outer(bell, bell) + 0.1 * np.eye(4) / 4
    # sqrt eigenvalues of rho rho~ are 0.925 and 3 x 0.025
    assert concurrence(rho) == pytest.approx(0.85, abs=1e-12)
    assert mixed_tangle(rho) == pytest.approx(0.7225, abs=1e-12)


def _random_two_qubit(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def test_mixed_matches_pure(rng):
    for _ in range(100):
        c = _random_two_qubit(rng)
        assert mixed_tangle(np.outer(c, c.conj())) == pytest.approx(pure_tangle(c), abs=1e-9)


def test_concurrence_non_hermitian_form(rng):
    """Cross-check against eigenvalues of rho rho~ without the Hermitian rewrite."""
    sysy = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        mu = np.linalg.eigvals(rho @ sysy @ rho.conj() @ sysy)
        lam = np.sort(np.sqrt(np.clip(mu.real, 0, None)))[::-1]
        assert concurrence(rho) == pytest.approx(max(0.0, lam[0] - lam[1:].sum()), abs=1e-8)


def test_local_unitary_invariance(rng):
    c = _random_two_qubit(rng)
    rho = 0.7 * np.outer(c, c.conj()) + 0.3 * np.eye(4) / 4
    u1, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    u2, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    u = np.kron(u1, u2)
    assert mixed_tangle(u @ rho @ u.conj().T) == pytest.approx(mixed_tangle(rho), abs=1e-10)


def test_embedding_matches_full_reduction(rng):
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    q = QubitPureState(2, v / np.linalg.norm(v))
    f = coherent_field_amps(5.0, 0.0, 40)
    psi = symmetric_product(q, f)
    sym = symmetric_to_two_qubit(reduce_qubits(psi)).rho
    full_q = np.array([q.amps[2], q.amps[1] / math.sqrt(2), q.amps[1] / math.sqrt(2), q.amps[0]])
    np.testing.assert_allclose(sym, reduce_full_qubits(full_product(full_q, f)), atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 1))
def test_tangle_bounds(phi, mix):
    c = np.array([math.cos(phi), 0.3j, 0.1, math.sin(phi)])
    c = c / np.linalg.norm(c)
    rho = (1 - mix) * np.outer(c, c.conj()) + mix * np.eye(4) / 4
    t = mixed_tangle(rho)
    assert 0.0 <= t <= 1.0


# -- Q functions ----------------------------------------------------------


def test_field_q_coherent_peak():
    psi = symmetric_product(dicke_state(1, 0), coherent_field_amps(9.0, 0.0, 60))
    grid = field_grid(9.0, 121, 2.0)
    qf = field_q_function(psi, grid, radial_scale=3.0)
    assert q_mass(qf) == pytest.approx(1.0, abs=1e-4)
    peak = grid.ravel()[np.argmax(qf.values)]
    assert abs(peak - 3.0) < 0.11
    assert qf.values.max() == pytest.approx(1 / math.pi, rel=1e-3)
    assert qf.metadata["radial_scale"] == 3.0
    assert superlevel_components(qf)[0] == 1


def test_field_q_rejects_leaking_state():
    amps = np.zeros((2, 11), dtype=complex)
    amps[0, 10] = 1.0
    with pytest.raises(Exception) as info:
        field_q_function(SymmetricState(1, 10, amps), field_grid(1.0, 11))
    assert type(info.value).__name__ == "CutoffTooSmall"


def test_field_q_cat_has_two_lobes():
    a = coherent_field_amps(16.0, 0.0, 80) + coherent_field_amps(16.0, math.pi, 80)
    psi = symmetric_product(dicke_state(1, 0), a / np.linalg.norm(a))
    qf = field_q_function(psi, field_grid(16.0, 101))
    assert superlevel_components(qf)[0] == 2


@pytest.mark.parametrize("nq", [1, 4, 40])
def test_spin_q_normalized(nq):
    psi = symmetric_product(attractor_state(1, 0.0, nq), coherent_field_amps(1.0, 0.0, 40))
    sq = spin_q_function(reduce_qubits(psi), sphere_grid(181, 361))
    assert q_mass(sq) == pytest.approx(1.0, abs=1e-3)
    assert superlevel_components(sq)[0] == 1


def test_spin_q_pole_is_one_lobe():
    # all-excited sits on the north pole; the pole row must not split
    psi = symmetric_product(dicke_state(10, 10), coherent_field_amps(1.0, 0.0, 40))
    sq = spin_q_function(reduce_qubits(psi), sphere_grid(91, 181))
    assert superlevel_components(sq)[0] == 1
    assert sq.values[0, 0] == pytest.approx(11 / (4 * math.pi), rel=1e-12)


def test_spin_q_seam_is_glued():
    # lobe centred on azimuth 0 straddles the 0 / 2 pi seam
    psi = symmetric_product(QubitPureState(1, np.array([1, 1]) / math.sqrt(2)), coherent_field_amps(1.0, 0.0, 40))
    sq = spin_q_function(reduce_qubits(psi), sphere_grid(91, 181))
    assert superlevel_components(sq, 0.9)[0] == 1
