"""Closed-form attractor states, basin states, cat decompositions and time scales.

Phase convention
----------------
With ``alpha = sqrt(nbar) exp(-i theta)`` the conserved excitation number
makes ``exp(-i theta E)`` map solutions onto solutions, so every qubit state
tied to the field phase carries ``exp(-i theta N_e)`` on the level with
``N_e`` excited qubits.  The attractors ``(e^{-i theta}|e> +/- i|g>)^N``
already obey this.  Basin states are built the same way: the Dicke level with
``k = N_q - N_e`` ground-state qubits gets

    A(k) * sqrt(binom(N_q, k)) * exp(-i theta N_e),
    A(k) = a                              (k even)
           sqrt(2**(1 - N_q) - |a|**2)    (k odd)

which for two qubits is ``a (e^{-i theta}|ee> + e^{i theta}|gg>) +
s (|eg> + |ge>)`` up to a global phase.  In spin coherent language the basin
is spanned by ``|+beta>`` and ``|-beta>`` with ``beta = exp(+i theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import evolve_series
from .errors import BasinOutOfRange
from .hilbert import QubitPureState, coherent_field_amps, spin_coherent, _log_binom
from .observables import state_probability


@dataclass(frozen=True)
class CharacteristicTimes:
    """Collapse, revival and attractor times (same time unit as ``1/coupling``)."""

    t_collapse: float
    t_revival: float
    t_attractor: float
    t_attractor_minus: float | None

    def as_dict(self):
        return {
            "t_collapse": self.t_collapse,
            "t_revival": self.t_revival,
            "t_attractor": self.t_attractor,
            "t_attractor_minus": self.t_attractor_minus,
        }


def characteristic_times(params):
    """``t_c = sqrt(2)/lambda``, ``t_r = 2 pi sqrt(nbar)/lambda``, ``t* = t_r/(2 N_q)``.

    ``t_attractor_minus = 3 t_r / 2`` is only defined for a single qubit.
    """
    if params.nbar <= 0:
        raise ValueError("revival time undefined for nbar = 0")
    lam = params.coupling
    t_r = 2 * math.pi * math.sqrt(params.nbar) / lam
    return CharacteristicTimes(
        t_collapse=math.sqrt(2) / lam,
        t_revival=t_r,
        t_attractor=t_r / (2 * params.n_qubits),
        t_attractor_minus=1.5 * t_r if params.n_qubits == 1 else None,
    )


def attractor_state(sign, theta, n_qubits):
    """``2**(-N/2) (e^{-i theta}|e> + sign * i|g>)^{(x) N}`` in the Dicke basis."""
    if sign not in (1, -1, "+", "-"):
        raise ValueError("sign must be +1 or -1")
    s = 1 if sign in (1, "+") else -1
    ne = np.arange(n_qubits + 1)
    k = n_qubits - ne
    amps = np.exp(0.5 * _log_binom(n_qubits, k)) * np.exp(-1j * theta * ne) * (s * 1j) ** k
    return QubitPureState(n_qubits, amps / 2 ** (n_qubits / 2))


@dataclass(frozen=True)
class BasinParameter:
    """Basin coordinate ``a`` with ``|a| <= 2**((1 - N_q)/2)``."""

    a: complex
    n_qubits: int
    theta: float = 0.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        object.__setattr__(self, "a", complex(self.a))
        limit = self.radius
        if abs(self.a) > limit * (1 + 1e-12):
            raise BasinOutOfRange(f"|a| = {abs(self.a):.6g} exceeds {limit:.6g} for N_q = {self.n_qubits}")

    @property
    def radius(self):
        return 2.0 ** ((1 - self.n_qubits) / 2)

    @property
    def s(self):
        """Odd-parity weight ``sqrt(2**(1 - N_q) - |a|**2)``."""
        r, x = self.radius, abs(self.a)
        if r - x <= 1e-12 * r:  # on the rim up to rounding
            return 0.0
        return math.sqrt((r - x) * (r + x))


def basin_state(p):
    """Basin-of-attraction qubit state for parameter ``p``."""
    nq = p.n_qubits
    ne = np.arange(nq + 1)
    k = nq - ne
    weight = np.where(k % 2 == 0, p.a, p.s)
    amps = weight * np.exp(0.5 * _log_binom(nq, k)) * np.exp(-1j * p.theta * ne)
    # exact analytically; the rescale only removes rounding
    return QubitPureState(nq, amps / np.linalg.norm(amps))


def cat_decomposition(p):
    """Weights and ``beta`` with ``basin = w_plus |beta> + w_minus |-beta>``.

    ``w_plus, w_minus = 2**((N_q - 2)/2) (a +/- s)`` and ``beta = e^{i theta}``
    (a global phase ``e^{-i theta N_q}`` is left off the weights; it is fixed
    by :func:`cat_phase`).
    """
    pref = 2.0 ** ((p.n_qubits - 2) / 2)
    return pref * (p.a + p.s), pref * (p.a - p.s), complex(np.exp(1j * p.theta))


def cat_phase(p):
    """Global phase relating :func:`cat_decomposition` to :func:`basin_state`."""
    return complex(np.exp(-1j * p.theta * p.n_qubits))


def reconstruct_from_cat(p):
    """Dicke amplitudes of ``phase * (w_plus |beta> + w_minus |-beta>)``."""
    w_plus, w_minus, beta = cat_decomposition(p)
    vec = w_plus * spin_coherent(beta, p.n_qubits).amps + w_minus * spin_coherent(-beta, p.n_qubits).amps
    return cat_phase(p) * vec


def predicted_field_state(p, params):
    """Large-``nbar`` prediction for the field at ``t_r/(2 N_q)``.

    ``2**((N-2)/2) [(a - s) e^{i pi nbar/2} |i alpha> - (a + s) e^{-i pi nbar/2} |-i alpha>]``,
    renormalized (the two branches are only nearly orthogonal).
    """
    n_max = params.fock_cutoff
    # i*alpha = sqrt(nbar) exp(-i (theta - pi/2))
    plus_i = coherent_field_amps(params.nbar, params.theta - math.pi / 2, n_max)
    minus_i = coherent_field_amps(params.nbar, params.theta + math.pi / 2, n_max)
    ph = np.exp(0.5j * math.pi * params.nbar)
    vec = (p.a - p.s) * ph * plus_i - (p.a + p.s) * np.conj(ph) * minus_i
    return vec / np.linalg.norm(vec)


def attractor_probability_series(prop, psi0, times, sign=1):
    """Probability of the ``sign`` attractor at each time."""
    target = attractor_state(sign, prop.params.theta, prop.params.n_qubits)
    return np.array([state_probability(psi, target) for psi in evolve_series(prop, psi0, times)])
