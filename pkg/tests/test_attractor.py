import math

import numpy as np
import pytest

from cavrevive import (
    BasinOutOfRange,
    BasinParameter,
    ModelParams,
    attractor_probability_series,
    attractor_state,
    basin_state,
    build_propagator,
    cat_decomposition,
    characteristic_times,
    coherent_field_amps,
    evolve,
    predicted_field_state,
    pure_tangle,
    reconstruct_from_cat,
    spin_coherent,
    symmetric_product,
)
from cavrevive.verify import random_basin_parameter


def test_characteristic_times():
    t = characteristic_times(ModelParams(1, 50.0))
    assert t.t_collapse == pytest.approx(math.sqrt(2))
    assert t.t_revival == pytest.approx(2 * math.pi * math.sqrt(50))
    assert t.t_attractor == pytest.approx(t.t_revival / 2)
    assert t.t_attractor_minus == pytest.approx(1.5 * t.t_revival)
    t4 = characteristic_times(ModelParams(4, 50.0, coupling=2.0))
    assert t4.t_revival == pytest.approx(math.pi * math.sqrt(50))
    assert t4.t_attractor == pytest.approx(t4.t_revival / 8)
    assert t4.t_attractor_minus is None


def test_times_need_photons():
    with pytest.raises(ValueError):
        characteristic_times(ModelParams(1, 0.0, fock_cutoff=10))


def test_attractor_single_qubit_form():
    np.testing.assert_allclose(attractor_state(1, 0.0, 1).amps, np.array([1j, 1]) / math.sqrt(2))
    np.testing.assert_allclose(attractor_state(-1, 0.5, 1).amps, np.array([-1j, np.exp(-0.5j)]) / math.sqrt(2))


def test_attractor_is_spin_coherent():
    for n in (1, 2, 5, 20):
        for sign in (1, -1):
            sc = spin_coherent(sign * 1j * np.exp(0.3j), n)
            assert abs(sc.overlap(attractor_state(sign, 0.3, n))) == pytest.approx(1.0, abs=1e-12)


def test_basin_two_qubit_explicit():
    a = 0.3
    p = BasinParameter(a, 2, 0.9)
    s = math.sqrt(0.5 - a * a)
    ph = np.exp(-0.9j)
    # gg, (eg + ge)/sqrt2 with weight sqrt2 * s, ee
    np.testing.assert_allclose(basin_state(p).amps, [a, math.sqrt(2) * s * ph, a * ph * ph], atol=1e-14)


def test_basin_limits():
    assert BasinParameter(0.5, 3).s == 0.0
    with pytest.raises(BasinOutOfRange):
        BasinParameter(0.6, 3)
    assert BasinParameter(1 / math.sqrt(2), 2).s == 0.0


def test_basin_normalized_everywhere(rng):
    for _ in range(500):
        p = random_basin_parameter(rng, int(rng.integers(1, 21)))
        assert np.linalg.norm(basin_state(p).amps) == pytest.approx(1.0, abs=1e-12)


def test_cat_decomposition_identity(rng):
    worst = 0.0
    for nq in range(2, 21):
        for _ in range(20):
            p = random_basin_parameter(rng, nq)
            worst = max(worst, np.max(np.abs(reconstruct_from_cat(p) - basin_state(p).amps)))
    assert worst < 1e-12


def test_cat_weight_minus_vanishes_at_a_equal_s():
    for nq in range(2, 11):
        a = 2.0 ** (-nq / 2)
        p = BasinParameter(a, nq)
        assert p.s == pytest.approx(a, rel=1e-12)
        w_plus, w_minus, beta = cat_decomposition(p)
        assert abs(w_minus) < 1e-14
        assert abs(w_plus) == pytest.approx(1.0, abs=1e-12)
        # pure spin coherent state, no second component
        assert abs(spin_coherent(beta, nq).overlap(basin_state(p))) == pytest.approx(1.0, abs=1e-12)


def test_boundary_of_basin_has_s_zero():
    # |a| at the rim gives s = 0, so the two cat weights have equal size
    for nq in range(2, 8):
        w_plus, w_minus, _ = cat_decomposition(BasinParameter(2.0 ** ((1 - nq) / 2), nq))
        assert abs(w_plus) == pytest.approx(abs(w_minus), rel=1e-12)


def test_two_qubit_tangle_zeros():
    """Over real a in [-1/sqrt2, 1/sqrt2] the pure tangle vanishes only at a = +-1/2."""
    xs = np.linspace(-1 / math.sqrt(2), 1 / math.sqrt(2), 20001)
    tau = np.array([pure_tangle(basin_state(BasinParameter(x, 2))) for x in xs])
    local_min = [xs[i] for i in range(1, xs.size - 1) if tau[i] <= tau[i - 1] and tau[i] <= tau[i + 1]]
    assert len(local_min) == 2
    np.testing.assert_allclose(sorted(local_min), [-0.5, 0.5], atol=1e-4)
    assert pure_tangle(basin_state(BasinParameter(0.5, 2))) < 1e-12
    assert pure_tangle(basin_state(BasinParameter(1 / math.sqrt(2), 2))) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_predicted_field_single_lobe(sign):
    params = ModelParams(3, 50.0)
    a = sign * 2.0 ** (-1.5)
    vec = predicted_field_state(BasinParameter(a, 3), params)
    target_theta = params.theta + (math.pi / 2 if sign > 0 else -math.pi / 2)
    coh = coherent_field_amps(params.nbar, target_theta, params.fock_cutoff)
    assert abs(np.vdot(coh, vec)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.7])
def test_basin_reaches_attractor(theta):
    params = ModelParams(3, 50.0, theta=theta)
    prop = build_propagator(params)
    p = BasinParameter(0.2 + 0.1j, 3, theta)
    psi0 = symmetric_product(basin_state(p), coherent_field_amps(50.0, theta, params.fock_cutoff))
    t_star = characteristic_times(params).t_attractor
    probs = attractor_probability_series(prop, psi0, np.linspace(t_star - 1, t_star + 1, 81))
    assert probs.max() > 0.97
