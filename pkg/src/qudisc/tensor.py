"""Dense qudit statevectors and embedded application of small unitaries.

Wire 0 is the most significant base-``d`` digit of the amplitude index.
States are immutable; every operation returns a new :class:`StateVector`.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
DEFAULT_MAX_AMPLITUDES = 2**26
MAX_AMPLITUDES_ENV = "QUDISC_MAX_AMPLITUDES"


class DimensionError(ValueError):
    """Raised when a register would exceed the amplitude budget."""


def max_amplitudes() -> int:
    raw = os.environ.get(MAX_AMPLITUDES_ENV)
    if raw is None:
        return DEFAULT_MAX_AMPLITUDES
    return int(raw)


def check_size(d: int, n_wires: int) -> int:
    """Return ``d**n_wires`` or raise :class:`DimensionError` past the cap."""
    if d < 2:
        raise ValueError(f"wire dimension must be >= 2, got {d}")
    if n_wires < 1:
        raise ValueError(f"need at least one wire, got {n_wires}")
    size = d**n_wires
    cap = max_amplitudes()
    if size > cap:
        raise DimensionError(
            f"{d}^{n_wires} = {size} amplitudes exceeds the cap of {cap} "
            f"(override with {MAX_AMPLITUDES_ENV})"
        )
    return size


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    d: int
    n_wires: int
    amps: np.ndarray

    def __post_init__(self):
        size = check_size(self.d, self.n_wires)
        amps = _frozen(np.asarray(self.amps).reshape(-1))
        if amps.shape != (size,):
            raise ValueError(f"expected {size} amplitudes, got {amps.size}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm!r}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, d: int, amps, normalize: bool = False) -> StateVector:
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        n_wires = _infer_wires(d, amps.size)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(d, n_wires, amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def tensor(self) -> np.ndarray:
        """Read-only view with one axis per wire."""
        return self.amps.reshape((self.d,) * self.n_wires)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def inner(self, other: StateVector) -> complex:
        """Return ``<self|other>``."""
        _check_same_shape(self, other)
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: StateVector) -> float:
        return abs(self.inner(other)) ** 2

    def kron(self, other: StateVector) -> StateVector:
        if other.d != self.d:
            raise ValueError("cannot join registers of different wire dimension")
        return StateVector(self.d, self.n_wires + other.n_wires, np.kron(self.amps, other.amps))

    def with_ancilla(self, count: int = 1) -> StateVector:
        """Append ``count`` wires in ``|0>`` after the existing ones."""
        return self.kron(new_basis_state(self.d, count, [0] * count))

    def __repr__(self) -> str:
        return f"StateVector(d={self.d}, n_wires={self.n_wires})"


def _infer_wires(d: int, size: int) -> int:
    n, s = 0, 1
    while s < size:
        s *= d
        n += 1
    if s != size or n == 0:
        raise ValueError(f"{size} amplitudes is not a positive power of {d}")
    return n


def _check_same_shape(a: StateVector, b: StateVector) -> None:
    if (a.d, a.n_wires) != (b.d, b.n_wires):
        raise ValueError(
            f"shape mismatch: (d={a.d}, n={a.n_wires}) vs (d={b.d}, n={b.n_wires})"
        )


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A ``d**k x d**k`` matrix acting on ``k`` wires of dimension ``d``."""

    d: int
    arity: int
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        side = self.d**self.arity
        if m.shape != (side, side):
            raise ValueError(f"expected a {side}x{side} matrix, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, d: int, matrix) -> DenseOperator:
        matrix = np.asarray(matrix, dtype=np.complex128)
        return cls(d, _infer_wires(d, matrix.shape[0]), matrix)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return unitarity_error(self.matrix) <= tol

    def require_unitary(self, tol: float = UNITARY_TOL) -> DenseOperator:
        err = unitarity_error(self.matrix)
        if err > tol:
            raise ValueError(f"operator is not unitary (max |UU^dag - I| = {err:.3e})")
        return self

    @property
    def dagger(self) -> DenseOperator:
        return DenseOperator(self.d, self.arity, self.matrix.conj().T)

    def __matmul__(self, other: DenseOperator) -> DenseOperator:
        if (other.d, other.arity) != (self.d, self.arity):
            raise ValueError("operator shapes differ")
        return DenseOperator(self.d, self.arity, self.matrix @ other.matrix)

    def kron(self, other: DenseOperator) -> DenseOperator:
        if other.d != self.d:
            raise ValueError("operators act on wires of different dimension")
        return DenseOperator(self.d, self.arity + other.arity, np.kron(self.matrix, other.matrix))

    def power(self, k: int) -> DenseOperator:
        """Non-negative integer power by repeated multiplication."""
        if k < 0:
            return self.dagger.power(-k)
        out = np.eye(self.matrix.shape[0], dtype=np.complex128)
        for _ in range(k):
            out = self.matrix @ out
        return DenseOperator(self.d, self.arity, out)

    def __repr__(self) -> str:
        return f"DenseOperator(d={self.d}, arity={self.arity})"


def unitarity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max())


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome: int
    probability: float
    post_state: StateVector | None

    def __iter__(self):
        return iter((self.outcome, self.probability, self.post_state))


def new_basis_state(d: int, n_wires: int, digits: Sequence[int]) -> StateVector:
    """Computational basis state ``|digits>``; ``digits[0]`` is the most significant."""
    digits = list(digits)
    if len(digits) != n_wires:
        raise ValueError(f"expected {n_wires} digits, got {len(digits)}")
    size = check_size(d, n_wires)
    index = 0
    for digit in digits:
        if not 0 <= digit < d:
            raise ValueError(f"digit {digit} out of range for d={d}")
        index = index * d + digit
    amps = np.zeros(size, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(d, n_wires, amps)


def _check_wires(wires: Sequence[int], n_wires: int) -> tuple[int, ...]:
    wires = tuple(int(w) for w in wires)
    if len(set(wires)) != len(wires):
        raise ValueError(f"duplicate wire in {wires}")
    for w in wires:
        if not 0 <= w < n_wires:
            raise IndexError(f"wire {w} out of range for {n_wires} wires")
    return wires


def apply_tensor(
    tensor: np.ndarray, matrix: np.ndarray, wires: Sequence[int], d: int
) -> np.ndarray:
    """Contract ``matrix`` into the leading wire axes of ``tensor``.

    ``tensor`` has shape ``(d,)*n + extra``; trailing axes are carried along
    untouched, which lets the same kernel push a batch of columns through.
    """
    k = len(wires)
    gate = matrix.reshape((d,) * (2 * k))
    out = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(wires)))
    # tensordot leaves the k output axes in front
    return np.moveaxis(out, list(range(k)), list(wires))


def apply_embedded(state: StateVector, op: DenseOperator, wires: Sequence[int]) -> StateVector:
    """Apply ``op`` to ``wires`` (in that order), identity elsewhere.

    Cost is O(d**n * d**k); the full-register matrix is never formed.
    """
    if op.d != state.d:
        raise ValueError(f"operator dimension {op.d} != state dimension {state.d}")
    if op.arity != len(wires):
        raise ValueError(f"operator arity {op.arity} != {len(wires)} wires")
    wires = _check_wires(wires, state.n_wires)
    out = apply_tensor(state.tensor(), op.matrix, wires, state.d)
    return StateVector(state.d, state.n_wires, out.reshape(-1))


def measure_wire(state: StateVector, wire: int) -> list[MeasurementOutcome]:
    """All computational-basis outcomes of ``wire``, in increasing order.

    Each post-state has the measured wire removed; it is ``None`` when the
    outcome has zero probability or the register would be left empty.
    """
    (wire,) = _check_wires([wire], state.n_wires)
    t = np.moveaxis(state.tensor(), wire, 0).reshape(state.d, -1)
    probs = np.einsum("ij,ij->i", t.conj(), t).real
    probs = probs / probs.sum()
    results = []
    for k in range(state.d):
        post = None
        if probs[k] > 0 and state.n_wires > 1:
            branch = t[k] / np.linalg.norm(t[k])
            post = StateVector(state.d, state.n_wires - 1, branch)
        results.append(MeasurementOutcome(k, float(probs[k]), post))
    return results


def equal_up_to_global_phase(
    a: StateVector, b: StateVector, tol: float = 1e-10
) -> tuple[bool, complex | None]:
    """Return ``(True, <a|b>/|<a|b>|)`` when ``|<a|b>| >= 1 - tol``."""
    overlap = a.inner(b)
    mag = abs(overlap)
    if mag >= 1.0 - tol:
        return True, overlap / mag
    return False, None


def operator_matrix(op: DenseOperator, wires: Sequence[int], n_wires: int) -> np.ndarray:
    """Full ``d**n x d**n`` matrix of ``op`` embedded on ``wires``; small registers only."""
    d = op.d
    size = check_size(d, n_wires)
    wires = _check_wires(wires, n_wires)
    eye = np.eye(size, dtype=np.complex128).reshape((d,) * n_wires + (size,))
    return apply_tensor(eye, op.matrix, wires, d).reshape(size, size)
