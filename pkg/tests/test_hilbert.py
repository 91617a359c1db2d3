import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavrevive import (
    CutoffTooSmall,
    ModelParams,
    NotSymmetric,
    QubitPureState,
    SymmetricState,
    attractor_state,
    coherent_field_amps,
    dicke_state,
    embed_full_to_symmetric,
    spin_coherent,
    symmetric_product,
    symmetric_to_full,
)
from cavrevive.hilbert import coherent_probe_amps, default_cutoff, spin_coherent_overlap_sq

# e^-50 50^50 / 50!, evaluated with mpmath at 40 digits
POISSON_50_AT_50 = 0.05632500632519082


def test_vacuum():
    amps = coherent_field_amps(0.0, 0.0, 5)
    np.testing.assert_array_equal(amps, [1, 0, 0, 0, 0, 0])


def test_poisson_pmf_at_mean():
    amps = coherent_field_amps(50.0, 0.0, 120)
    assert abs(amps[50]) ** 2 == pytest.approx(POISSON_50_AT_50, rel=1e-10)


def test_coherent_phase_ratio():
    amps = coherent_field_amps(50.0, math.pi / 2, 120)
    assert amps[1] / amps[0] == pytest.approx(math.sqrt(50) * np.exp(-1j * math.pi / 2), rel=1e-12)


def test_coherent_cutoff_too_small():
    with pytest.raises(CutoffTooSmall) as info:
        coherent_field_amps(50.0, 0.0, 60)
    assert info.value.leakage > 1e-8


@pytest.mark.parametrize("nbar", [0.5, 10.0, 50.0, 400.0])
def test_coherent_mean_photon_number(nbar):
    amps = coherent_field_amps(nbar, 1.1, default_cutoff(nbar))
    n = np.arange(amps.size)
    assert np.sum(n * abs(amps) ** 2) == pytest.approx(nbar, rel=1e-6)
    assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-14)


def test_probe_matches_coherent_state():
    probe = coherent_probe_amps(np.array([math.sqrt(50) * np.exp(-0.4j)]), 141)[0]
    np.testing.assert_allclose(probe, coherent_field_amps(50.0, 0.4, 141), atol=1e-14)
    origin = coherent_probe_amps(np.array([0j]), 5)[0]
    np.testing.assert_array_equal(origin, [1, 0, 0, 0, 0, 0])


def test_cutoff_policy():
    assert ModelParams(1, 50.0).fock_cutoff == 141
    assert ModelParams(1, 50.0, fock_cutoff=200).fock_cutoff == 200
    # below nbar + 6 sqrt(nbar) -> raised to the default
    assert ModelParams(1, 50.0, fock_cutoff=60).fock_cutoff == 141


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(1, 1.0, coupling=0.0)
    with pytest.raises(ValueError):
        ModelParams(1, -1.0)


def test_spin_coherent_beta_zero_is_all_excited():
    np.testing.assert_allclose(spin_coherent(0, 3).amps, [0, 0, 0, 1])


def test_spin_coherent_single_qubit():
    np.testing.assert_allclose(spin_coherent(1, 1).amps, np.array([1, 1]) / math.sqrt(2))


def test_spin_coherent_is_attractor():
    theta = 0.3
    sc = spin_coherent(1j * np.exp(1j * theta), 2)
    assert abs(sc.overlap(attractor_state(+1, theta, 2))) == pytest.approx(1.0, abs=1e-12)


def test_spin_coherent_large_beta_is_all_ground():
    np.testing.assert_allclose(abs(spin_coherent(1e9, 4).amps), [1, 0, 0, 0, 0], atol=1e-8)


def test_spin_coherent_normalization_random(rng):
    for _ in range(1000):
        nq = int(rng.integers(1, 21))
        beta = complex(*rng.normal(scale=3, size=2))
        assert np.linalg.norm(spin_coherent(beta, nq).amps) == pytest.approx(1.0, abs=1e-12)


finite = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite, st.integers(1, 20))
def test_spin_coherent_overlap_formula(r1, i1, r2, i2, nq):
    b1, b2 = complex(r1, i1), complex(r2, i2)
    direct = spin_coherent(b1, nq).fidelity(spin_coherent(b2, nq))
    assert direct == pytest.approx(spin_coherent_overlap_sq(b1, b2, nq), abs=1e-10)


def test_qubit_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        QubitPureState(1, [1.0, 1.0])


def test_product_ground_vacuum():
    psi = symmetric_product(dicke_state(1, 0), coherent_field_amps(0.0, 0.0, 4))
    nz = np.argwhere(np.abs(psi.amps) > 0)
    assert nz.tolist() == [[0, 0]]  # N_e = 0 is m = -1/2


def test_product_norm(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    q = QubitPureState(3, v / np.linalg.norm(v))
    psi = symmetric_product(q, coherent_field_amps(7.0, 0.2, default_cutoff(7.0)))
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)


def test_product_mean_excitation():
    # attractor for two qubits has <N_e> = 1
    psi = symmetric_product(attractor_state(+1, 0.0, 2), coherent_field_amps(50.0, 0.0, 141))
    p = np.abs(psi.amps) ** 2
    direct = sum(p[ne, n] * (ne + n) for ne in range(3) for n in range(142))
    assert direct == pytest.approx(51.0, rel=1e-10)
    assert psi.mean_excitation() == pytest.approx(direct, rel=1e-12)


def test_states_are_immutable():
    psi = symmetric_product(dicke_state(1, 0), coherent_field_amps(1.0, 0.0, 20))
    with pytest.raises(ValueError):
        psi.amps[0, 0] = 0
    with pytest.raises(AttributeError):
        psi.n_qubits = 2


def test_embed_dicke_level():
    full = np.zeros((4, 6), dtype=complex)
    full[1, 3] = full[2, 3] = 1 / math.sqrt(2)  # (|eg> + |ge>)/sqrt2 (x) |3>
    sym = embed_full_to_symmetric(full.ravel(), 2, 5)
    expected = np.zeros((3, 6))
    expected[1, 3] = 1.0
    np.testing.assert_allclose(sym.amps, expected, atol=1e-15)


def test_embed_rejects_singlet():
    full = np.zeros((4, 6), dtype=complex)
    full[1, 0], full[2, 0] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    with pytest.raises(NotSymmetric):
        embed_full_to_symmetric(full.ravel(), 2, 5)


@pytest.mark.parametrize("nq", [1, 2, 3, 5])
def test_embed_round_trip(rng, nq):
    amps = rng.normal(size=(nq + 1, 9)) + 1j * rng.normal(size=(nq + 1, 9))
    psi = SymmetricState(nq, 8, amps / np.linalg.norm(amps))
    back = embed_full_to_symmetric(symmetric_to_full(psi), nq, 8)
    np.testing.assert_allclose(back.amps, psi.amps, atol=1e-14)
    assert np.linalg.norm(symmetric_to_full(psi)) == pytest.approx(1.0, abs=1e-13)
