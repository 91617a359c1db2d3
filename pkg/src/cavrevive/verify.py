"""Self-check suite behind ``cavrevive verify``.

Each check reports a measured residual against a fixed tolerance.  Set
``CAVREVIVE_VERIFY_CUTOFF`` to force the Fock cutoff used by the
cutoff-adequacy check (an undersized value must make that check fail).
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass

import numpy as np

from . import oracle
from .attractor import BasinParameter, basin_state, characteristic_times, reconstruct_from_cat
from .engine import build_propagator, evolve, evolve_series
from .errors import CutoffTooSmall
from .hilbert import (
    ModelParams,
    QubitPureState,
    coherent_field_amps,
    default_cutoff,
    dicke_state,
    symmetric_product,
    symmetric_to_full,
)

CUTOFF_ENV = "CAVREVIVE_VERIFY_CUTOFF"


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""


def _check(name, residual, tol, detail=""):
    residual = float(residual)
    return Check(name, residual, tol, bool(residual < tol), detail)


def random_qubit_state(rng, n_qubits):
    v = rng.normal(size=n_qubits + 1) + 1j * rng.normal(size=n_qubits + 1)
    return QubitPureState(n_qubits, v / np.linalg.norm(v))


def random_basin_parameter(rng, n_qubits, theta=None):
    r = 2.0 ** ((1 - n_qubits) / 2)
    rad = r * np.sqrt(rng.uniform())
    a = rad * np.exp(2j * np.pi * rng.uniform())
    theta = rng.uniform(0, 2 * np.pi) if theta is None else theta
    return BasinParameter(a, n_qubits, theta)


def phase_aligned_distance(u, v):
    """``min_phi || u - e^{i phi} v ||``."""
    ov = np.vdot(v, u)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def multiset_residual(full, sub):
    """Largest distance when matching each value in ``sub`` to a distinct value in ``full``.

    Greedy on sorted values; ``inf`` when ``sub`` has more values than ``full``.
    """
    full = np.sort(np.asarray(full))
    sub = np.sort(np.asarray(sub))
    if sub.size > full.size:
        return float("inf")
    used = np.zeros(full.size, dtype=bool)
    worst = 0.0
    for x in sub:
        order = np.argsort(np.abs(full - x), kind="stable")
        j = next(j for j in order if not used[j])
        used[j] = True
        worst = max(worst, abs(full[j] - x))
    return worst


def check_oracle_equivalence(rng, n_states=5, n_times=5):
    worst = 0.0
    for nq in (1, 2, 3):
        params = ModelParams(nq, 10.0)
        prop = build_propagator(params)
        field_amps = coherent_field_amps(10.0, rng.uniform(0, 2 * np.pi), params.fock_cutoff)
        for _ in range(n_states):
            psi0 = symmetric_product(random_qubit_state(rng, nq), field_amps)
            full0 = oracle.FullState(nq, params.fock_cutoff, symmetric_to_full(psi0))
            for t in rng.uniform(0, 30, n_times):
                a = symmetric_to_full(evolve(prop, psi0, t))
                b = oracle.full_evolve(params, full0, t).amps
                worst = max(worst, phase_aligned_distance(a, b))
    return _check("oracle_equivalence", worst, 1e-9, "N_q=1..3, nbar=10")


def check_spectrum(rng):
    worst = 0.0
    for nq in (2, 3):
        params = ModelParams(nq, 1.0, fock_cutoff=15)
        worst = max(worst, multiset_residual(oracle.full_spectrum(params), build_propagator(params).spectrum()))
    return _check("spectrum_subset", worst, 1e-10, "engine eigenvalues within full-space spectrum")


def check_chiral(rng):
    worst = 0.0
    prop = build_propagator(ModelParams(5, 20.0))
    for b in prop.blocks:
        if not b.clipped:
            w = np.sort(b.eigenvalues)
            worst = max(worst, np.max(np.abs(w + w[::-1])))
    return _check("block_chiral_symmetry", worst, 1e-11)


def check_unitarity_composition(rng):
    params = ModelParams(3, 20.0)
    prop = build_propagator(params)
    field_amps = coherent_field_amps(20.0, 0.3, params.fock_cutoff)
    norm_err = comp_err = 0.0
    for _ in range(10):
        psi = symmetric_product(random_qubit_state(rng, 3), field_amps)
        t1, t2 = rng.uniform(0, 20, 2)
        one = evolve(prop, evolve(prop, psi, t1), t2)
        both = evolve(prop, psi, t1 + t2)
        norm_err = max(norm_err, abs(both.norm() - 1))
        comp_err = max(comp_err, np.linalg.norm(one.amps - both.amps))
    return [_check("unitarity", norm_err, 1e-10), _check("composition", comp_err, 1e-10)]


def check_cat_identity(rng, per_n=50):
    worst = 0.0
    for nq in range(2, 21):
        for _ in range(per_n):
            p = random_basin_parameter(rng, nq)
            worst = max(worst, np.max(np.abs(reconstruct_from_cat(p) - basin_state(p).amps)))
    return _check("cat_decomposition_residual", worst, 1e-12, "N_q=2..20")


def check_coherent_moments(rng):
    worst = 0.0
    for nbar in (1.0, 10.0, 50.0, 200.0):
        amps = coherent_field_amps(nbar, 0.0, default_cutoff(nbar))
        mean = np.sum(np.arange(amps.size) * np.abs(amps) ** 2)
        worst = max(worst, abs(mean - nbar) / nbar)
    return _check("coherent_mean_photon", worst, 1e-6, "relative")


def check_conservation(rng):
    params = ModelParams(1, 50.0)
    prop = build_propagator(params)
    psi0 = symmetric_product(dicke_state(1, 0), coherent_field_amps(50.0, 0.0, params.fock_cutoff))
    t_r = characteristic_times(params).t_revival
    e0 = psi0.mean_excitation()
    norm_err = exc_err = 0.0
    for psi in evolve_series(prop, psi0, np.linspace(0, 3 * t_r, 200)):
        norm_err = max(norm_err, abs(psi.norm() - 1))
        exc_err = max(exc_err, abs(psi.mean_excitation() - e0) / e0)
    return [_check("norm_drift", norm_err, 1e-9), _check("excitation_drift", exc_err, 1e-9)]


def check_cutoff_adequacy(rng):
    nbar = 50.0
    raw = os.environ.get(CUTOFF_ENV)
    cutoff = int(raw) if raw else default_cutoff(nbar)
    try:
        amps = coherent_field_amps(nbar, 0.0, cutoff)
    except CutoffTooSmall as exc:
        return Check("cutoff_adequacy", exc.leakage, 1e-8, False, f"CutoffTooSmall at n_max={cutoff}: {exc}")
    leak = float(np.sum(np.abs(amps[max(0, cutoff - 2):]) ** 2))
    return _check("cutoff_adequacy", leak, 1e-8, f"n_max={cutoff}")


def run_verify(seed=20081):
    """Run every check; returns ``(all_passed, [Check, ...])``."""
    rng = np.random.default_rng(seed)
    checks = []
    for fn in (
        check_oracle_equivalence,
        check_spectrum,
        check_chiral,
        check_unitarity_composition,
        check_cat_identity,
        check_coherent_moments,
        check_conservation,
        check_cutoff_adequacy,
    ):
        res = fn(rng)
        checks.extend(res if isinstance(res, list) else [res])
    return all(c.passed for c in checks), checks


def report(checks):
    return {"passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]}
