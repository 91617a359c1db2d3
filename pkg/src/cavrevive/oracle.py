"""Brute-force reference in the full 2**N_q (x) Fock space, N_q <= 3.

No permutation symmetry is assumed: the interaction is assembled from
per-qubit ``sigma+/-`` and the cavity ladder operators, and evolution uses a
dense eigendecomposition of the whole matrix.  Used only to check the blocked
engine.  Qubit bit 0 is ``|e>`` and 1 is ``|g>``, qubit 1 most significant,
and the flat index is ``qubit_index * (n_max + 1) + n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

MAX_QUBITS = 3
MAX_CUTOFF = 300

# |e> = index 0, |g> = index 1
_SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])  # |e><g|


def _guard(n_qubits, fock_cutoff):
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"oracle limited to {MAX_QUBITS} qubits")
    if fock_cutoff > MAX_CUTOFF:
        raise ValueError(f"oracle limited to n_max <= {MAX_CUTOFF}")


@dataclass(frozen=True)
class FullState:
    n_qubits: int
    fock_cutoff: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        _guard(self.n_qubits, self.fock_cutoff)
        amps = np.array(self.amps, dtype=complex).ravel()
        if amps.size != 2**self.n_qubits * (self.fock_cutoff + 1):
            raise ValueError("amplitude length does not match dimensions")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def matrix(self):
        """Amplitudes reshaped to ``(2**N_q, n_max + 1)``."""
        return self.amps.reshape(2**self.n_qubits, self.fock_cutoff + 1)


@lru_cache(maxsize=16)
def _interaction(n_qubits, fock_cutoff):
    n = np.arange(1, fock_cutoff + 1)
    a = sparse.diags(np.sqrt(n), 1, shape=(fock_cutoff + 1,) * 2, format="csr")
    eye2 = sparse.identity(2, format="csr")
    total = sparse.csr_matrix((2**n_qubits * (fock_cutoff + 1),) * 2)
    for i in range(n_qubits):
        ops = [eye2] * n_qubits
        ops[i] = sparse.csr_matrix(_SIGMA_PLUS)
        sp = ops[0]
        for op in ops[1:]:
            sp = sparse.kron(sp, op, format="csr")
        term = sparse.kron(sp, a, format="csr")
        total = total + term + term.T
    return total.tocsr()


def full_hamiltonian(params):
    """Sparse ``V = lambda sum_i (a sigma_i+ + a^dag sigma_i-)``."""
    _guard(params.n_qubits, params.fock_cutoff)
    return params.coupling * _interaction(params.n_qubits, params.fock_cutoff)


def full_hamiltonian_apply(params, state):
    return FullState(state.n_qubits, state.fock_cutoff, full_hamiltonian(params) @ state.amps)


@lru_cache(maxsize=8)
def _eig(n_qubits, fock_cutoff):
    return np.linalg.eigh(_interaction(n_qubits, fock_cutoff).toarray())


def full_spectrum(params):
    """Eigenvalues of ``V`` in units of ``lambda``."""
    _guard(params.n_qubits, params.fock_cutoff)
    return _eig(params.n_qubits, params.fock_cutoff)[0]


def full_evolve(params, psi0, t):
    """``exp(-i V t) |psi0>`` by dense diagonalization."""
    _guard(params.n_qubits, params.fock_cutoff)
    w, U = _eig(params.n_qubits, params.fock_cutoff)
    c = U.T @ psi0.amps
    out = U @ (np.exp(-1j * w * params.coupling * t) * c)
    return FullState(psi0.n_qubits, psi0.fock_cutoff, out)


def full_product(qubit_amps, field_amps):
    """Product of a ``2**N_q`` qubit vector and a field vector."""
    q = np.asarray(qubit_amps, dtype=complex)
    f = np.asarray(field_amps, dtype=complex)
    nq = int(round(np.log2(q.size)))
    return FullState(nq, f.size - 1, np.kron(q, f))


def reduce_full_qubits(state):
    """Full ``2**N_q x 2**N_q`` reduced qubit density matrix."""
    m = state.matrix()
    return m @ m.conj().T
