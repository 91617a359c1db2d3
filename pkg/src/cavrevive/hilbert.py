"""Symmetric (Dicke) qubit basis, truncated Fock basis and state constructors.

Conventions
-----------
* A Dicke level ``|N_q, m>`` is stored by its number of excited qubits
  ``N_e = m + N_q/2``, in ascending order ``N_e = 0 .. N_q``.  Index 0 is the
  all-ground state, index ``N_q`` the all-excited state.
* Joint qubit-field amplitudes are stored dicke-major: ``amps[N_e, n]`` with
  ``n`` the photon number, so each row is the field vector conditioned on one
  Dicke level (see :data:`LAYOUT`).
* Spin coherent states follow the Radcliffe form: the amplitude of the level
  with ``k = N_q - N_e`` ground-state qubits is proportional to
  ``sqrt(binom(N_q, k)) * beta**k``.  ``beta = 0`` is all-excited.  The sum
  runs over every ``m`` from ``-N_q/2`` to ``+N_q/2``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import CutoffTooSmall, NotSymmetric

logger = logging.getLogger(__name__)

#: Amplitude layout of :class:`SymmetricState`; rows are Dicke levels.
LAYOUT = "dicke-major"

#: Truncated probability mass tolerated when cutting a coherent state.
TRUNCATION_TOL = 1e-8

#: Largest register for which the full 2**N_q bridge is allowed.
MAX_FULL_QUBITS = 12


def default_cutoff(nbar):
    """Fock cutoff used when none is given: ``ceil(nbar + 10 sqrt(nbar) + 20)``."""
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 20.0))


def minimum_cutoff(nbar):
    """Smallest cutoff accepted without auto-raising: ``nbar + 6 sqrt(nbar)``."""
    return nbar + 6.0 * math.sqrt(nbar)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the resonant, uniformly coupled Tavis-Cummings model.

    Evolution happens in the interaction picture, so ``omega`` only documents
    the common cavity/qubit frequency and never enters a calculation.  A
    ``fock_cutoff`` below ``nbar + 6 sqrt(nbar)`` is raised to
    :func:`default_cutoff`; ``None`` selects the default directly.
    """

    n_qubits: int
    nbar: float
    coupling: float = 1.0
    theta: float = 0.0
    omega: float = 1.0
    fock_cutoff: Optional[int] = None

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        if not self.coupling > 0:
            raise ValueError(f"coupling must be positive, got {self.coupling!r}")
        if not self.nbar >= 0:
            raise ValueError(f"nbar must be non-negative, got {self.nbar!r}")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        cutoff = self.fock_cutoff
        if cutoff is None:
            cutoff = default_cutoff(self.nbar)
        elif cutoff < minimum_cutoff(self.nbar):
            raised = default_cutoff(self.nbar)
            logger.warning("fock_cutoff %s below nbar + 6 sqrt(nbar); raised to %s", cutoff, raised)
            cutoff = raised
        object.__setattr__(self, "fock_cutoff", int(cutoff))

    @property
    def alpha(self):
        """Coherent amplitude ``sqrt(nbar) * exp(-i theta)``."""
        return math.sqrt(self.nbar) * np.exp(-1j * self.theta)

    @property
    def dicke_dim(self):
        return self.n_qubits + 1

    @property
    def fock_dim(self):
        return self.fock_cutoff + 1


def _readonly(arr):
    arr = np.array(arr, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class QubitPureState:
    """Pure state of the symmetric qubit register in the Dicke basis."""

    n_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _readonly(self.amps)
        if amps.shape != (self.n_qubits + 1,):
            raise ValueError(f"expected {self.n_qubits + 1} Dicke amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"qubit state not normalized (norm={norm!r})")
        object.__setattr__(self, "amps", amps)

    def overlap(self, other):
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other):
        """Phase-insensitive overlap ``|<self|other>|**2``."""
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True)
class SymmetricState:
    """Joint state of the symmetric register and the truncated cavity mode.

    ``amps`` has shape ``(n_qubits + 1, fock_cutoff + 1)`` in the
    :data:`LAYOUT` convention.
    """

    n_qubits: int
    fock_cutoff: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _readonly(self.amps)
        shape = (self.n_qubits + 1, self.fock_cutoff + 1)
        if amps.shape != shape:
            if amps.ndim == 1 and amps.size == shape[0] * shape[1]:
                amps = _readonly(amps.reshape(shape))
            else:
                raise ValueError(f"amplitude shape {amps.shape} does not match {shape}")
        object.__setattr__(self, "amps", amps)

    @property
    def vector(self):
        """Flat amplitude vector (dicke-major)."""
        return self.amps.ravel()

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def photon_distribution(self):
        return np.sum(np.abs(self.amps) ** 2, axis=0)

    def leakage(self, margin=2):
        """Probability in photon numbers ``n >= fock_cutoff - margin``."""
        return float(np.sum(self.photon_distribution()[max(0, self.fock_cutoff - margin):]))

    def mean_excitation(self):
        """``<a^dag a + N_e>``."""
        p = np.abs(self.amps) ** 2
        ne = np.arange(self.n_qubits + 1)[:, None]
        n = np.arange(self.fock_cutoff + 1)[None, :]
        return float(np.sum(p * (ne + n)))


def coherent_field_amps(nbar, theta, n_max, tol=TRUNCATION_TOL):
    """Fock amplitudes of ``|alpha>`` with ``alpha = sqrt(nbar) exp(-i theta)``.

    Magnitudes are built in the log domain so large ``nbar`` cannot overflow.
    The truncated vector is renormalized when the discarded Poisson mass is
    below ``tol``; otherwise :class:`CutoffTooSmall` is raised.
    """
    if nbar < 0 or n_max < 0:
        raise ValueError("nbar and n_max must be non-negative")
    n = np.arange(n_max + 1)
    if nbar == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -0.5 * nbar + 0.5 * n * math.log(nbar) - 0.5 * gammaln(n + 1)
    amps = np.exp(logmag) * np.exp(-1j * theta * n)
    deficit = 1.0 - float(np.sum(np.exp(2 * logmag)))
    if deficit >= tol:
        raise CutoffTooSmall(
            f"coherent state nbar={nbar} truncated at n_max={n_max} loses {deficit:.3e}",
            leakage=deficit,
        )
    return amps / np.linalg.norm(amps)


def coherent_probe_amps(beta, n_max):
    """Truncated, unnormalized Fock amplitudes of ``|beta>`` for an array of ``beta``.

    Returns shape ``beta.shape + (n_max + 1,)``.  No renormalization: when the
    probe overlaps a state supported on ``n <= n_max`` the result is exact.
    """
    beta = np.asarray(beta, dtype=complex)
    n = np.arange(n_max + 1)
    r2 = np.abs(beta) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log(np.abs(beta))
        logmag = -0.5 * r2[..., None] + n * logr[..., None] - 0.5 * gammaln(n + 1)
    logmag = np.where(np.isneginf(logr)[..., None] & (n == 0), -0.5 * r2[..., None], logmag)
    return np.exp(logmag) * np.exp(1j * np.angle(beta)[..., None] * n)


def dicke_state(n_qubits, n_excited):
    """Dicke level with ``n_excited`` qubits excited."""
    if not 0 <= n_excited <= n_qubits:
        raise ValueError(f"n_excited must lie in [0, {n_qubits}]")
    amps = np.zeros(n_qubits + 1, dtype=complex)
    amps[n_excited] = 1.0
    return QubitPureState(n_qubits, amps)


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def spin_coherent(beta, n_qubits):
    """Radcliffe spin coherent state ``|beta, N_q>`` as Dicke amplitudes.

    ``(1 + |beta|**2)**(-N/2) sum_k sqrt(C(N, k)) beta**k |N - k excited>``,
    i.e. the sum over ``m = -N/2 .. N/2`` with ``k = N/2 - m`` qubits in
    ``|g>``.  ``beta = 0`` is all excited, ``beta -> inf`` all ground.  The
    sum runs over every Dicke level; a written lower limit of ``m = 0`` would
    drop half of them and is read here as ``-N/2``.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    beta = complex(beta)
    n_excited = np.arange(n_qubits + 1)
    k = n_qubits - n_excited
    # dividing by max(1, |beta|)**N keeps the powers bounded for large |beta|
    scale = max(1.0, abs(beta))
    mags = np.exp(0.5 * _log_binom(n_qubits, k)) * (abs(beta) / scale) ** k * (1.0 / scale) ** n_excited
    amps = mags * np.exp(1j * np.angle(beta) * k)
    return QubitPureState(n_qubits, amps / np.linalg.norm(amps))


def spin_coherent_overlap_sq(beta1, beta2, n_qubits):
    """Closed form of ``|<beta1|beta2>|**2`` for spin coherent states."""
    b1, b2 = complex(beta1), complex(beta2)
    num = abs(1 + b1.conjugate() * b2) ** 2
    den = (1 + abs(b1) ** 2) * (1 + abs(b2) ** 2)
    return (num / den) ** n_qubits


def symmetric_product(qubit, field_amps):
    """Product state ``|qubit> (x) |field>``."""
    field_amps = np.asarray(field_amps, dtype=complex)
    if field_amps.ndim != 1:
        raise ValueError("field amplitudes must be a vector")
    return SymmetricState(qubit.n_qubits, field_amps.size - 1, np.outer(qubit.amps, field_amps))


def _dicke_membership(n_qubits):
    """Per computational-basis index, the number of excited qubits.

    Bitstring convention: bit value 0 is ``|e>``, 1 is ``|g>``, most significant
    bit is qubit 1, so the two-qubit order is ``ee, eg, ge, gg``.
    """
    idx = np.arange(2**n_qubits)
    ground = np.array([bin(i).count("1") for i in idx])
    return n_qubits - ground


def symmetric_to_full(state):
    """Expand a :class:`SymmetricState` into the full ``2**N_q`` qubit basis.

    Output is a flat, qubit-bitstring-major vector of length
    ``2**N_q * (n_max + 1)``.
    """
    nq = state.n_qubits
    if nq > MAX_FULL_QUBITS:
        raise ValueError(f"full-space bridge limited to {MAX_FULL_QUBITS} qubits")
    ne = _dicke_membership(nq)
    weights = 1.0 / np.sqrt(np.exp(_log_binom(nq, ne)))
    full = state.amps[ne, :] * weights[:, None]
    return full.ravel()


def embed_full_to_symmetric(full_amps, n_qubits, fock_cutoff, tol=1e-10):
    """Project a full-space vector onto the symmetric subspace.

    Raises :class:`NotSymmetric` when the part outside the symmetric subspace
    has norm ``>= tol``.
    """
    if n_qubits > MAX_FULL_QUBITS:
        raise ValueError(f"full-space bridge limited to {MAX_FULL_QUBITS} qubits")
    full = np.asarray(full_amps, dtype=complex).reshape(2**n_qubits, fock_cutoff + 1)
    ne = _dicke_membership(n_qubits)
    weights = 1.0 / np.sqrt(np.exp(_log_binom(n_qubits, ne)))
    sym = np.zeros((n_qubits + 1, fock_cutoff + 1), dtype=complex)
    np.add.at(sym, ne, full * weights[:, None])
    residual = np.linalg.norm(full - sym[ne, :] * weights[:, None])
    if residual >= tol:
        raise NotSymmetric(f"state has weight {residual:.3e} outside the symmetric subspace")
    return SymmetricState(n_qubits, fock_cutoff, sym)
