"""Reduced density matrices and every plotted quantity.

Probabilities, von Neumann entropy (nats), pure and mixed two-qubit tangle,
and the field and spin Husimi Q functions.  Grid reductions run in a fixed
order (numpy row-major), so repeated runs give bit-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import CutoffTooSmall, InvalidDensity
from .hilbert import TRUNCATION_TOL, QubitPureState, coherent_probe_amps, _log_binom

ENTROPY_CLIP = 1e-10
NEGATIVE_EIG_TOL = 1e-8

# sigma_y (x) sigma_y; identical in the (e, g) and (g, e) orderings
RANK_TOL = 1e-13
_SYSY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))


def _check_density(rho, label):
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidDensity(f"{label} must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise InvalidDensity(f"{label} is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-8:
        raise InvalidDensity(f"{label} has trace {tr!r}")
    ev = np.linalg.eigvalsh(rho)
    if ev[0] < -NEGATIVE_EIG_TOL:
        raise InvalidDensity(f"{label} has negative eigenvalue {ev[0]!r}")
    rho.flags.writeable = False
    return rho


@dataclass(frozen=True)
class QubitDensityMatrix:
    """Reduced state of the symmetric register, Dicke basis (ascending ``N_e``)."""

    n_qubits: int
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = _check_density(self.rho, "qubit density matrix")
        if rho.shape != (self.n_qubits + 1,) * 2:
            raise InvalidDensity(f"expected {(self.n_qubits + 1,) * 2}, got {rho.shape}")
        object.__setattr__(self, "rho", rho)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.rho)


@dataclass(frozen=True)
class TwoQubitDensityMatrix:
    """Two-qubit state in the basis ``ee, eg, ge, gg``."""

    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = _check_density(self.rho, "two-qubit density matrix")
        if rho.shape != (4, 4):
            raise InvalidDensity(f"expected 4x4, got {rho.shape}")
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Sampled Q function.

    ``kind == "field"``: ``points`` is a complex array of ``beta`` values.
    ``kind == "spin"``: ``points`` is a ``(polar, azimuth)`` pair of 2-d
    arrays (``meshgrid`` with ``indexing="ij"``).  ``values`` matches the grid
    shape; ``metadata`` carries plotting hints such as ``radial_scale``.
    """

    kind: str
    points: object = field(repr=False)
    values: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)


# -- reductions ------------------------------------------------------------


def reduce_qubits(psi):
    """Trace out the field: ``rho[m, m'] = sum_n psi[m, n] psi*[m', n]``."""
    a = psi.amps
    return QubitDensityMatrix(psi.n_qubits, a @ a.conj().T)


def field_gram(psi):
    """Gram matrix ``G[m, m'] = <phi_m|phi_m'>`` of the Dicke-conditioned field slices.

    Its spectrum is that of the reduced field state, without forming the
    ``(n_max + 1)**2`` field density matrix.
    """
    a = psi.amps
    return a.conj() @ a.T


def field_spectrum(psi):
    return np.linalg.eigvalsh(field_gram(psi))


def von_neumann(eigs):
    eigs = np.asarray(eigs, dtype=float)
    if eigs.min() < -NEGATIVE_EIG_TOL:
        raise InvalidDensity(f"eigenvalue {eigs.min()!r} below -{NEGATIVE_EIG_TOL}")
    p = eigs[eigs > ENTROPY_CLIP]
    return max(0.0, float(-np.sum(p * np.log(p))))


def entropy(rho):
    """Von Neumann entropy ``-Tr rho ln rho`` in nats.

    Accepts a :class:`QubitDensityMatrix`, a :class:`TwoQubitDensityMatrix`
    or a bare array.
    """
    mat = getattr(rho, "rho", rho)
    return von_neumann(np.linalg.eigvalsh(np.asarray(mat)))


def field_entropy(psi):
    """Entropy of the reduced field state, through :func:`field_gram`."""
    return von_neumann(field_spectrum(psi))


def state_probability(psi, target):
    """``<target| rho_q |target>`` for a :class:`QubitPureState` target."""
    if target.n_qubits != psi.n_qubits:
        raise ValueError("target and state have different N_q")
    # sum_n |<target|phi_n>|^2 without forming rho
    proj = target.amps.conj() @ psi.amps
    return float(np.sum(np.abs(proj) ** 2))


def field_fidelity(psi, field_amps):
    """``<phi| rho_F |phi>`` for a normalized field vector ``phi``."""
    proj = psi.amps @ np.asarray(field_amps).conj()
    return float(np.sum(np.abs(proj) ** 2))


# -- two-qubit entanglement ---------------------------------------------------


def two_qubit_amplitudes(state):
    """``(C_ee, C_eg, C_ge, C_gg)`` of a two-qubit pure state.

    A symmetric :class:`QubitPureState` places ``amps[1] / sqrt(2)`` on both
    ``eg`` and ``ge``; a plain length-4 vector is taken as is.
    """
    if isinstance(state, QubitPureState):
        if state.n_qubits != 2:
            raise ValueError("tangle needs N_q = 2")
        gg, d1, ee = state.amps
        return np.array([ee, d1 / np.sqrt(2), d1 / np.sqrt(2), gg])
    c = np.asarray(state, dtype=complex)
    if c.shape != (4,):
        raise ValueError("tangle needs N_q = 2")
    return c


def pure_tangle(state):
    """``4 |C_ee C_gg - C_eg C_ge|**2``, clipped to [0, 1]."""
    ee, eg, ge, gg = two_qubit_amplitudes(state)
    return float(np.clip(4 * abs(ee * gg - eg * ge) ** 2, 0.0, 1.0))


def concurrence(rho):
    """Wootters concurrence of a two-qubit density matrix.

    With ``rho = F F^dag`` the square roots of the eigenvalues of ``rho rho~``
    are the singular values of ``F^T (sy x sy) F``.  Eigenvectors whose weight
    is below rounding level are dropped from ``F`` so that a pure state gives
    exactly one nonzero singular value.
    """
    mat = rho.rho if isinstance(rho, TwoQubitDensityMatrix) else TwoQubitDensityMatrix(rho).rho
    w, v = np.linalg.eigh(mat)
    keep = w > RANK_TOL * max(w.max(), 1.0)
    f = v[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    sv = np.linalg.svd(f.T @ _SYSY @ f, compute_uv=False)
    lam[: sv.size] = sv
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def mixed_tangle(rho):
    """Squared concurrence."""
    return float(np.clip(concurrence(rho) ** 2, 0.0, 1.0))


def symmetric_to_two_qubit(rho):
    """Embed a 3x3 Dicke density matrix into the 4x4 ``ee, eg, ge, gg`` basis."""
    if rho.n_qubits != 2:
        raise ValueError("symmetric_to_two_qubit needs N_q = 2")
    s = 1 / np.sqrt(2)
    # columns: Dicke N_e = 0 (gg), 1, 2 (ee)
    iso = np.array([[0, 0, 1], [0, s, 0], [0, s, 0], [1, 0, 0]], dtype=complex)
    return TwoQubitDensityMatrix(iso @ rho.rho @ iso.conj().T)


# -- Q functions ---------------------------------------------------------------


def field_grid(nbar, n_points=201, extent=1.6):
    """Square grid of ``n_points**2`` values of ``beta`` covering ``|beta| <= extent sqrt(nbar)``."""
    r = extent * np.sqrt(max(nbar, 1.0))
    x = np.linspace(-r, r, n_points)
    return x[None, :] + 1j * x[:, None]


def field_q_function(psi, grid, radial_scale=None):
    """Husimi function of the cavity, ``Q(beta) = (1/pi) sum_m |<beta|phi_m>|**2``.

    The probe is truncated at the cutoff, which is exact for a state that
    lives below it; :class:`CutoffTooSmall` is raised when the state itself
    leaks into the top of the Fock space.
    """
    leak = psi.leakage()
    if leak >= TRUNCATION_TOL:
        raise CutoffTooSmall(f"state leaks {leak:.3e} into the Fock cutoff", leakage=leak)
    grid = np.asarray(grid, dtype=complex)
    probes = coherent_probe_amps(grid.ravel(), psi.fock_cutoff)
    overlaps = probes.conj() @ psi.amps.T
    q = np.sum(np.abs(overlaps) ** 2, axis=1).reshape(grid.shape) / np.pi
    meta = {"radial_scale": float(radial_scale) if radial_scale is not None else None}
    return PhaseSpaceGrid("field", grid, q, meta)


def sphere_grid(n_polar=181, n_azimuth=361):
    """Equiangular ``(polar, azimuth)`` mesh, azimuth endpoints included."""
    pol = np.linspace(0.0, np.pi, n_polar)
    az = np.linspace(0.0, 2 * np.pi, n_azimuth)
    return np.meshgrid(pol, az, indexing="ij")


def spin_coherent_on_sphere(polar, azimuth, n_qubits):
    """Spin coherent amplitudes at sphere points; shape ``polar.shape + (N_q + 1,)``.

    North pole (polar 0) is all-excited and ``beta = tan(polar/2) exp(-i azimuth)``.
    Written with half-angle powers so the south pole needs no special case.
    """
    polar = np.asarray(polar, dtype=float)[..., None]
    azimuth = np.asarray(azimuth, dtype=float)[..., None]
    ne = np.arange(n_qubits + 1)
    k = n_qubits - ne
    binom = np.exp(0.5 * _log_binom(n_qubits, k))
    return binom * np.cos(polar / 2) ** ne * np.sin(polar / 2) ** k * np.exp(-1j * azimuth * k)


def spin_q_function(rho, grid):
    """``Q_s = (N_q + 1)/(4 pi) <Omega|rho|Omega>``, normalized to 1 over the sphere."""
    polar, azimuth = grid
    nq = rho.n_qubits
    probes = spin_coherent_on_sphere(polar, azimuth, nq)
    flat = probes.reshape(-1, nq + 1)
    vals = np.einsum("pi,ij,pj->p", flat.conj(), rho.rho, flat).real
    q = (nq + 1) / (4 * np.pi) * vals.reshape(np.shape(polar))
    return PhaseSpaceGrid("spin", (polar, azimuth), q, {})


def q_mass(grid):
    """Trapezoid integral of a Q grid over its domain (plane or sphere)."""
    if grid.kind == "field":
        pts = grid.points
        x = pts[0, :].real
        y = pts[:, 0].imag
        return float(np.trapezoid(np.trapezoid(grid.values, x, axis=1), y))
    polar, azimuth = grid.points
    integrand = grid.values * np.sin(polar)
    return float(np.trapezoid(np.trapezoid(integrand, azimuth[0, :], axis=1), polar[:, 0]))


def superlevel_components(grid, level=0.5):
    """Connected regions where the Q function is at least ``level * max``.

    Returns ``(count, labels)``.  On the sphere, the two azimuth seams are
    glued and each pole row is merged into one region.
    """
    mask = grid.values >= level * grid.values.max()
    labels, count = ndimage.label(mask)
    if grid.kind != "spin":
        return count, labels
    parent = list(range(count + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        if i and j:
            parent[find(i)] = find(j)

    for a, b in zip(labels[:, 0], labels[:, -1]):
        union(a, b)
    for row in (labels[0], labels[-1]):
        ids = [i for i in np.unique(row) if i]
        for i in ids[1:]:
            union(ids[0], i)
    roots = np.array([find(i) for i in range(count + 1)])
    merged = roots[labels]
    uniq = [r for r in np.unique(merged) if r]
    remap = np.zeros(count + 1, dtype=int)
    for new, r in enumerate(uniq, start=1):
        remap[r] = new
    return len(uniq), remap[merged]


def lobe_peaks(grid, level=0.5):
    """Location and value of the maximum inside each superlevel component."""
    count, labels = superlevel_components(grid, level)
    out = []
    for lab in range(1, count + 1):
        vals = np.where(labels == lab, grid.values, -np.inf)
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        if grid.kind == "field":
            where = complex(grid.points[idx])
        else:
            where = (float(grid.points[0][idx]), float(grid.points[1][idx]))
        out.append((where, float(grid.values[idx])))
    return out
