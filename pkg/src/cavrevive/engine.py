"""Exact propagation of the Tavis-Cummings interaction in excitation-number blocks.

The interaction ``V = lambda (a J+ + a^dag J-)`` conserves
``E = a^dag a + N_e``.  Inside one block the basis is ``(N_e, n = E - N_e)``
and ``V`` is a real symmetric tridiagonal matrix with zero diagonal and
couplings ``lambda sqrt(n) sqrt((N_e + 1)(N_q - N_e))`` between ``(N_e, n)``
and ``(N_e + 1, n - 1)``.  Each block is diagonalized once; evolution to any
time is then a phase rotation in the eigenbasis, with no time stepping.

Energies are kept in units of ``hbar * lambda`` and the coupling rescales
time, so ``evolve(prop, psi, t)`` propagates to ``lambda * t`` in those units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .hilbert import ModelParams, SymmetricState

EIG_RESIDUAL_TOL = 1e-11


@dataclass(frozen=True)
class ExcitationBlock:
    """One conserved-excitation block and its eigendecomposition.

    ``n_excited`` and ``photons`` list the basis ``(N_e, n)`` in ascending
    ``N_e``; ``eigenvalues`` are in units of ``lambda``.
    """

    excitation_number: int
    n_excited: np.ndarray = field(repr=False)
    photons: np.ndarray = field(repr=False)
    couplings: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    clipped: bool = False

    @property
    def dim(self):
        return self.n_excited.size

    def matrix(self):
        """Dense block matrix in units of ``lambda``."""
        d = self.dim
        h = np.zeros((d, d))
        idx = np.arange(d - 1)
        h[idx, idx + 1] = self.couplings
        h[idx + 1, idx] = self.couplings
        return h


def block_basis(n_qubits, fock_cutoff, E):
    ne = np.arange(max(0, E - fock_cutoff), min(n_qubits, E) + 1)
    return ne, E - ne


def build_block(params, E):
    """Build and diagonalize the block with excitation number ``E``."""
    nq, nmax = params.n_qubits, params.fock_cutoff
    if not 0 <= E <= nmax + nq:
        raise ValueError(f"excitation number {E} outside [0, {nmax + nq}]")
    ne, n = block_basis(nq, nmax, E)
    couplings = np.sqrt(n[:-1]) * np.sqrt((ne[:-1] + 1.0) * (nq - ne[:-1]))
    if ne.size == 1:
        w, U = np.zeros(1), np.ones((1, 1))
    else:
        w, U = eigh_tridiagonal(np.zeros(ne.size), couplings)
    blk = ExcitationBlock(
        excitation_number=E,
        n_excited=ne,
        photons=n,
        couplings=couplings,
        eigenvalues=w,
        eigenvectors=U,
        clipped=E > nmax,
    )
    resid = np.max(np.abs(blk.matrix() @ U - U * w)) if ne.size > 1 else 0.0
    if resid >= EIG_RESIDUAL_TOL:
        raise RuntimeError(f"eigensolver residual {resid:.2e} in block E={E}")
    return blk


@dataclass(frozen=True)
class _BlockGroup:
    # all blocks of one dimension, stacked for batched evaluation
    flat_index: np.ndarray  # (B, d) into the dicke-major flat vector
    eigenvalues: np.ndarray  # (B, d)
    eigenvectors: np.ndarray  # (B, d, d)


@dataclass(frozen=True)
class BlockPropagator:
    """Eigendecompositions of every block with ``E <= n_max + N_q``."""

    params: ModelParams
    blocks: tuple = field(repr=False)
    _groups: tuple = field(repr=False, default=())

    @property
    def max_block_dim(self):
        return max(b.dim for b in self.blocks)

    def spectrum(self):
        """All block eigenvalues (units of ``lambda``), concatenated."""
        return np.concatenate([b.eigenvalues for b in self.blocks])


def build_propagator(params):
    """Diagonalize all excitation blocks of ``params``."""
    blocks = tuple(build_block(params, E) for E in range(params.fock_cutoff + params.n_qubits + 1))
    stride = params.fock_dim
    by_dim = {}
    for b in blocks:
        by_dim.setdefault(b.dim, []).append(b)
    groups = []
    for d in sorted(by_dim):
        bs = by_dim[d]
        groups.append(
            _BlockGroup(
                flat_index=np.stack([b.n_excited * stride + b.photons for b in bs]),
                eigenvalues=np.stack([b.eigenvalues for b in bs]),
                eigenvectors=np.stack([b.eigenvectors for b in bs]),
            )
        )
    return BlockPropagator(params=params, blocks=blocks, _groups=tuple(groups))


def _check_compatible(prop, psi0):
    p = prop.params
    if psi0.n_qubits != p.n_qubits or psi0.fock_cutoff != p.fock_cutoff:
        raise ValueError(
            f"state dims (N_q={psi0.n_qubits}, n_max={psi0.fock_cutoff}) do not match "
            f"propagator (N_q={p.n_qubits}, n_max={p.fock_cutoff})"
        )


def evolve_series(prop, psi0, times):
    """Evolve ``psi0`` to every time in ``times``.

    Eigenbasis coefficients are computed once; each time is then evaluated
    independently, so there is no accumulation of error along the grid.
    """
    _check_compatible(prop, psi0)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or not np.all(np.isfinite(times)):
        raise ValueError("times must be a finite 1-d grid")
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending")
    lam = prop.params.coupling
    flat0 = psi0.vector
    coeffs = [np.einsum("bji,bj->bi", g.eigenvectors, flat0[g.flat_index]) for g in prop._groups]
    out = []
    for t in times:
        flat = np.zeros_like(flat0)
        for g, c in zip(prop._groups, coeffs):
            rotated = c * np.exp(-1j * g.eigenvalues * (lam * t))
            flat[g.flat_index] = np.einsum("bij,bj->bi", g.eigenvectors, rotated)
        out.append(SymmetricState(psi0.n_qubits, psi0.fock_cutoff, flat))
    return out


def evolve(prop, psi0, t):
    """Evolve ``psi0`` to time ``t`` (same arithmetic as :func:`evolve_series`)."""
    return evolve_series(prop, psi0, [t])[0]
