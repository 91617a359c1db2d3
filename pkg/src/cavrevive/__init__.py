"""Exact simulation of the resonant multi-qubit Jaynes-Cummings (Tavis-Cummings) model.

Collapse and revival, attractor states, basins of attraction and the transfer
of cat-state superpositions between a qubit register and a cavity mode.
"""

from .attractor import (
    BasinParameter,
    CharacteristicTimes,
    attractor_probability_series,
    attractor_state,
    basin_state,
    cat_decomposition,
    characteristic_times,
    predicted_field_state,
    reconstruct_from_cat,
)
from .engine import BlockPropagator, ExcitationBlock, build_block, build_propagator, evolve, evolve_series
from .errors import BasinOutOfRange, ConfigError, CutoffTooSmall, InvalidDensity, NotSymmetric
from .hilbert import (
    LAYOUT,
    ModelParams,
    QubitPureState,
    SymmetricState,
    coherent_field_amps,
    dicke_state,
    embed_full_to_symmetric,
    spin_coherent,
    symmetric_product,
    symmetric_to_full,
)
from .observables import (
    PhaseSpaceGrid,
    QubitDensityMatrix,
    TwoQubitDensityMatrix,
    entropy,
    field_entropy,
    field_fidelity,
    field_q_function,
    mixed_tangle,
    pure_tangle,
    reduce_qubits,
    spin_q_function,
    state_probability,
    symmetric_to_two_qubit,
)

__version__ = "0.1.0"
