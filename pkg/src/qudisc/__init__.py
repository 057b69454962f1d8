"""Qudit statevector simulation of non-destructive generalized Bell state discrimination."""

from .bell import BellIndex, QubitBellIndex, bell_qubit, bell_qudit, enumerate_bell_basis
from .circuit import Circuit
from .discriminator import (
    DiscriminationResult,
    ParityPairSet,
    build_parity_circuit,
    build_phase_circuit,
    discriminate,
    reconstruct_q,
)
from .gates import GateKind, GateSpec, controlled_u, csum, hd_matrix, xd_matrix, zd_matrix
from .netcost import Topology, baseline_cost, baseline_transform, protocol_cost
from .outsourcing import (
    DiagonalUnitarySpec,
    ObservableSpec,
    closure_map,
    decompose_controlled_u,
    outsource_measure,
    parity_circuit_hadamard_form,
    parity_circuit_reversed_form,
    zz_conjugation_identity_check,
)
from .tensor import (
    DenseOperator,
    MeasurementOutcome,
    StateVector,
    apply_embedded,
    equal_up_to_global_phase,
    measure_wire,
    new_basis_state,
)

__version__ = "0.1.0"
