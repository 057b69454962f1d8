"""Ancilla-outsourced measurement of observables compatible with a unitary.

A unitary ``U`` whose eigenvalues are ``d``-th roots of unity,
``U = sum_j w^j P_j``, is read out by preparing an ancilla with ``H_d``,
applying ``C_U = sum_j |j><j| (x) U^j`` and decoding with ``H_d^dag``.  The
ancilla then holds ``j`` with probability ``|P_j psi|^2`` and the system is
left in ``P_j psi`` (normalized), so ``U``-eigenstates pass through intact.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.linalg import schur

from .bell import BellIndex, bell_qudit, enumerate_bell_basis
from .circuit import Circuit
from .gates import GateKind, controlled_u, hd_dagger, hd_matrix, xd_matrix, zd_matrix
from .tensor import (
    UNITARY_TOL,
    DenseOperator,
    MeasurementOutcome,
    StateVector,
    measure_wire,
    operator_matrix,
    unitarity_error,
)


@dataclass(frozen=True, eq=False)
class DiagonalUnitarySpec:
    """``U = V diag(w^{phase_index}) V^dag`` with ``w = exp(2 pi i / d_outcomes)``.

    Columns of ``eigenbasis`` are eigenvectors; several columns may share a
    phase class.  The system consists of ``n_wires`` wires of dimension
    ``d_outcomes``.
    """

    d_outcomes: int
    eigenbasis: np.ndarray
    phase_index: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.eigenbasis, dtype=np.complex128)
        idx = tuple(int(j) for j in self.phase_index)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or len(idx) != v.shape[0]:
            raise ValueError("eigenbasis must be square with one phase index per column")
        if any(not 0 <= j < self.d_outcomes for j in idx):
            raise ValueError(f"phase indices must lie in [0, {self.d_outcomes})")
        err = unitarity_error(v)
        if err > UNITARY_TOL:
            raise ValueError(f"eigenbasis is not unitary (deviation {err:.3e})")
        object.__setattr__(self, "eigenbasis", v)
        object.__setattr__(self, "phase_index", idx)
        if self.n_wires < 1:
            raise ValueError("eigenbasis must act on at least one wire")

    @property
    def n_wires(self) -> int:
        return DenseOperator.from_matrix(self.d_outcomes, self.eigenbasis).arity

    def matrix(self) -> np.ndarray:
        phases = np.exp(2j * np.pi * np.array(self.phase_index) / self.d_outcomes)
        return (self.eigenbasis * phases) @ self.eigenbasis.conj().T

    def operator(self) -> DenseOperator:
        return DenseOperator.from_matrix(self.d_outcomes, self.matrix()).require_unitary()

    def projector(self, j: int) -> np.ndarray:
        cols = self.eigenbasis[:, np.array(self.phase_index) == j]
        return cols @ cols.conj().T

    @classmethod
    def from_unitary(cls, d: int, u, tol: float = 1e-9) -> DiagonalUnitarySpec:
        """Diagonalize ``u`` (normal, eigenvalues ``d``-th roots of unity)."""
        if isinstance(u, DenseOperator):
            u = u.matrix
        u = np.asarray(u, dtype=np.complex128)
        if unitarity_error(u) > tol:
            raise ValueError("matrix is not unitary")
        # Schur form of a normal matrix is diagonal with unitary Z
        t, z = schur(u, output="complex")
        eig = np.diag(t)
        k = np.angle(eig) * d / (2 * np.pi)
        j = np.round(k).astype(int) % d
        if np.abs(eig - np.exp(2j * np.pi * j / d)).max() > tol:
            raise ValueError(f"eigenvalues are not {d}-th roots of unity")
        return cls(d, z, tuple(j))

    @classmethod
    def bell_phase(cls, d: int, n: int) -> DiagonalUnitarySpec:
        """``X_d`` on every wire, diagonal in the Bell basis with class ``p``."""
        labels = enumerate_bell_basis(d, n)
        v = np.column_stack([bell_qudit(i).amps for i in labels])
        return cls(d, v, tuple(i.p for i in labels))

    @classmethod
    def computational(cls, d: int, phase_index: Sequence[int]) -> DiagonalUnitarySpec:
        return cls(d, np.eye(len(phase_index)), tuple(phase_index))


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """Observable ``W = sum_j f(j) P_j`` sharing the eigenspaces of ``base``."""

    base: DiagonalUnitarySpec
    relabel: Callable[[int], float] = field(default=float)

    def value(self, j: int) -> float:
        if not 0 <= j < self.base.d_outcomes:
            raise ValueError(f"outcome {j} outside [0, {self.base.d_outcomes})")
        return float(self.relabel(j))

    def matrix(self) -> np.ndarray:
        return sum(
            self.value(j) * self.base.projector(j) for j in range(self.base.d_outcomes)
        )


def outsourcing_circuit(u: DenseOperator) -> Circuit:
    """``H_d`` on the ancilla, ``C_U`` onto all system wires, ``H_d^dag``."""
    n = u.arity
    c = Circuit(u.d, n, 1)
    c.add(GateKind.HD, [n])
    c.add(GateKind.CONTROLLED_U, [n, *range(n)], payload=u)
    c.add(GateKind.HD_DAG, [n])
    return c


def _measure_last(circuit: Circuit, state: StateVector) -> list[MeasurementOutcome]:
    if (state.d, state.n_wires) != (circuit.d, circuit.system_wires):
        raise ValueError(
            f"state is (d={state.d}, n={state.n_wires}); expected "
            f"(d={circuit.d}, n={circuit.system_wires})"
        )
    return measure_wire(circuit.run(state.with_ancilla()), circuit.system_wires)


def outsource_measure(u: DiagonalUnitarySpec, state: StateVector) -> list[MeasurementOutcome]:
    """Outcome ``j`` with weight of phase class ``j``; post-states are projections."""
    if state.d != u.d_outcomes:
        raise ValueError(f"ancilla dimension {state.d} != {u.d_outcomes} phase classes")
    return _measure_last(outsourcing_circuit(u.operator()), state)


def outsource_measure_parts(parts: Sequence[DenseOperator], state: StateVector) -> list[MeasurementOutcome]:
    """Same read-out for ``U = parts[0] (x) parts[1] (x) ...`` using one
    controlled gate per wire from a shared ancilla."""
    c = decompose_controlled_u(parts)
    anc = c.system_wires
    full = Circuit(c.d, c.system_wires, 1).add(GateKind.HD, [anc])
    full.extend(c).add(GateKind.HD_DAG, [anc])
    return _measure_last(full, state)


def projective_measure(u: DiagonalUnitarySpec, state: StateVector) -> list[MeasurementOutcome]:
    """Direct eigenspace-projector measurement; the reference for :func:`outsource_measure`."""
    results = []
    for j in range(u.d_outcomes):
        branch = u.projector(j) @ state.amps
        prob = float(np.vdot(branch, branch).real)
        post = None
        if prob > 0:
            post = StateVector(state.d, state.n_wires, branch / np.sqrt(prob))
        results.append(MeasurementOutcome(j, prob, post))
    return results


def decompose_controlled_u(parts: Sequence[DenseOperator]) -> Circuit:
    """One ancilla-controlled gate per single-wire part; ancilla is the last wire.

    The product equals ``controlled_u(parts[0] (x) parts[1] (x) ...)`` and the
    steps commute, so :meth:`Circuit.reordered` gives the same unitary.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    d = parts[0].d
    for p in parts:
        if p.d != d or p.arity != 1:
            raise ValueError("parts must all be single-wire operators of one dimension")
        p.require_unitary()
    anc = len(parts)
    c = Circuit(d, len(parts), 1)
    for wire, p in enumerate(parts):
        c.add(GateKind.CONTROLLED_U, [anc, wire], payload=p)
    return c


def monolithic_controlled_u(parts: Sequence[DenseOperator]) -> np.ndarray:
    """``controlled_u(kron(parts))`` laid out like :func:`decompose_controlled_u`."""
    u = reduce(DenseOperator.kron, parts)
    n = len(parts)
    return operator_matrix(controlled_u(u), [n, *range(n)], n + 1)


def parity_circuit_hadamard_form(d: int) -> Circuit:
    """Relative-parity read-out with ancilla-controlled C-SUMs.

    Wires: 0 = player a, 1 = player b, 2 = ancilla.  Controlled ``Z^dag (x) Z``
    is rewritten through ``Z = H^dag X H`` into ancilla-controlled
    ``CSUM^dag`` on a and ``CSUM`` on b between Fourier layers.
    """
    c = Circuit(d, 2, 1)
    for w in (0, 1, 2):
        c.add(GateKind.HD, [w])
    c.add(GateKind.CSUM_DAG, [2, 0])
    c.add(GateKind.CSUM, [2, 1])
    for w in (0, 1, 2):
        c.add(GateKind.HD_DAG, [w])
    return c


def parity_circuit_reversed_form(d: int) -> Circuit:
    """The same read-out with the system wires as controls and no Fourier gates."""
    c = Circuit(d, 2, 1)
    c.add(GateKind.CSUM_DAG, [1, 2])
    c.add(GateKind.CSUM, [0, 2])
    return c


def parity_closed_form(state: StateVector) -> StateVector:
    """``sum_jk a_jk |j>|k>|k-j>`` for a two-wire input ``sum_jk a_jk |j>|k>``."""
    d = state.d
    if state.n_wires != 2:
        raise ValueError("closed form is defined for two system wires")
    a = state.amps.reshape(d, d)
    out = np.zeros((d, d, d), dtype=np.complex128)
    for j in range(d):
        for k in range(d):
            out[j, k, (k - j) % d] = a[j, k]
    return StateVector(d, 3, out.reshape(-1))


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    max_deviation: float

    def __bool__(self) -> bool:
        return self.holds


def zz_conjugation_identity_check(d: int, j: int, form: str = "printed", tol: float = 1e-12) -> IdentityCheck:
    """Compare ``(Z^dag (x) Z)^j`` with a Fourier conjugate of ``(X^dag (x) X)^j``.

    ``form="printed"`` conjugates as ``(H (x) H) . (H^dag (x) H^dag)``;
    ``form="corrected"`` as ``(H^dag (x) H^dag) . (H (x) H)``.  With
    ``X = H Z H^dag`` only the corrected form holds for every ``d``; the
    printed one fails for ``d >= 3`` unless ``(Z^dag)^j == Z^j``.
    """
    if not 0 <= j < d:
        raise ValueError(f"need 0 <= j < d, got j={j}, d={d}")
    z, x, h = zd_matrix(d), xd_matrix(d), hd_matrix(d)
    lhs = z.dagger.kron(z).power(j).matrix
    core = x.dagger.kron(x).power(j).matrix
    hh = h.kron(h).matrix
    if form == "printed":
        rhs = hh @ core @ hh.conj().T
    elif form == "corrected":
        rhs = hh.conj().T @ core @ hh
    else:
        raise ValueError(f"unknown form {form!r}")
    dev = float(np.abs(lhs - rhs).max())
    return IdentityCheck(dev <= tol, dev)


CLOSURE_VARIANTS = ("H(x)Hdag", "Hdag(x)H")


def closure_map(d: int, variant: str = "H(x)Hdag", tol: float = 1e-10) -> dict[BellIndex, tuple[BellIndex, complex]]:
    """Image label and dropped global phase of every two-qudit Bell state."""
    h, hd = hd_matrix(d), hd_dagger(d)
    if variant == "H(x)Hdag":
        op = h.kron(hd).matrix
    elif variant == "Hdag(x)H":
        op = hd.kron(h).matrix
    else:
        raise ValueError(f"variant must be one of {CLOSURE_VARIANTS}")
    labels = enumerate_bell_basis(d, 2)
    basis = np.column_stack([bell_qudit(i).amps for i in labels])
    images = basis.conj().T @ (op @ basis)
    out = {}
    for col, src in enumerate(labels):
        row = int(np.argmax(np.abs(images[:, col])))
        overlap = images[row, col]
        if abs(overlap) < 1 - tol:
            raise ArithmeticError(f"image of {src} is not a Bell state (|overlap| = {abs(overlap):.3e})")
        out[src] = (labels[row], complex(overlap / abs(overlap)))
    return out


def closure_formula(d: int, variant: str = "H(x)Hdag") -> dict[BellIndex, BellIndex]:
    """Closed-form label maps: ``(p, q) -> (-q, p)`` and ``(p, q) -> (q, -p)``."""
    out = {}
    for i in enumerate_bell_basis(d, 2):
        p, (q,) = i.p, i.q
        if variant == "H(x)Hdag":
            out[i] = BellIndex(d, 2, (d - q) % d, (p,))
        elif variant == "Hdag(x)H":
            out[i] = BellIndex(d, 2, q, ((d - p) % d,))
        else:
            raise ValueError(f"variant must be one of {CLOSURE_VARIANTS}")
    return out
