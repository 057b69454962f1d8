"""Qubit and qudit Bell families.

An n-qudit Bell state is labelled by a phase index ``p`` and a parity vector
``q = (q_1, ..., q_{n-1})``::

    |Psi_{p,q}> = d^{-1/2} sum_j exp(2 pi i j p / d) |j, q_1 + j, ..., q_{n-1} + j>

Player (system wire) ``k`` carries digit ``v_k + j`` with ``v_1 = 0`` and
``v_k = q_{k-1}``.  The relative parity of players ``(a, b)`` is
``v_b - v_a mod d``.  Players are numbered from 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .tensor import StateVector, check_size


@dataclass(frozen=True, order=True)
class BellIndex:
    d: int
    n: int
    p: int
    q: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        if self.d < 2 or self.n < 2:
            raise ValueError(f"need d >= 2 and n >= 2, got d={self.d}, n={self.n}")
        if len(self.q) != self.n - 1:
            raise ValueError(f"parity vector must have {self.n - 1} entries, got {len(self.q)}")
        if not 0 <= self.p < self.d or any(not 0 <= x < self.d for x in self.q):
            raise ValueError(f"label components must lie in [0, {self.d}): p={self.p}, q={self.q}")

    @property
    def offsets(self) -> tuple[int, ...]:
        """Per-player digit offsets ``(v_1, ..., v_n)`` with ``v_1 = 0``."""
        return (0, *self.q)

    def relative_parity(self, a: int, b: int) -> int:
        v = self.offsets
        return (v[b - 1] - v[a - 1]) % self.d


@dataclass(frozen=True)
class QubitBellIndex:
    n: int
    x: int
    sign: str

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2 qubits, got {self.n}")
        if not 0 <= self.x < 2 ** (self.n - 1):
            raise ValueError(f"x must lie in [0, {2 ** (self.n - 1)}), got {self.x}")
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")

    @property
    def complement(self) -> int:
        return (2**self.n - 1) ^ self.x

    def to_bell_index(self) -> BellIndex:
        """Qudit label of the same state at ``d=2``.

        ``x`` has leading bit 0, so its remaining bits are the parities.
        """
        bits = [(self.x >> (self.n - 1 - k)) & 1 for k in range(self.n)]
        return BellIndex(2, self.n, 0 if self.sign == "+" else 1, tuple(bits[1:]))

    @classmethod
    def from_bell_index(cls, idx: BellIndex) -> QubitBellIndex:
        if idx.d != 2:
            raise ValueError("only d=2 labels have a qubit form")
        x = 0
        for bit in idx.q:
            x = (x << 1) | bit
        return cls(idx.n, x, "+" if idx.p == 0 else "-")


def bell_qubit(n: int, x: int, sign: str = "+") -> StateVector:
    """``(|x> +/- |x_bar>)/sqrt(2)`` on ``n`` qubits, ``x_bar`` the bitwise complement."""
    idx = QubitBellIndex(n, x, sign)
    amps = np.zeros(check_size(2, n), dtype=np.complex128)
    amps[idx.x] = 1 / np.sqrt(2)
    amps[idx.complement] = (1 if sign == "+" else -1) / np.sqrt(2)
    return StateVector(2, n, amps)


def bell_qudit(idx: BellIndex) -> StateVector:
    d, n = idx.d, idx.n
    size = check_size(d, n)
    amps = np.zeros(size, dtype=np.complex128)
    weights = d ** np.arange(n - 1, -1, -1)
    v = np.array(idx.offsets)
    for j in range(d):
        amps[int(((v + j) % d) @ weights)] = np.exp(2j * np.pi * ((j * idx.p) % d) / d)
    return StateVector(d, n, amps / np.sqrt(d))


def enumerate_bell_basis(d: int, n: int) -> list[BellIndex]:
    """All ``d**n`` labels, lexicographic in ``(p, q)``."""
    check_size(d, n)
    return [
        BellIndex(d, n, p, q)
        for p in range(d)
        for q in itertools.product(range(d), repeat=n - 1)
    ]


def bell_matrix(d: int, n: int) -> np.ndarray:
    """Columns are the Bell states in :func:`enumerate_bell_basis` order."""
    return np.column_stack([bell_qudit(i).amps for i in enumerate_bell_basis(d, n)])


def identify_bell_state(state: StateVector, n: int | None = None, tol: float = 1e-10):
    """Return ``(BellIndex, phase)`` with ``state == phase * |Psi_idx>``, else ``None``."""
    n = state.n_wires if n is None else n
    for idx in enumerate_bell_basis(state.d, n):
        overlap = np.vdot(bell_qudit(idx).amps, state.amps)
        if abs(overlap) >= 1 - tol:
            return idx, complex(overlap / abs(overlap))
    return None


# Names used in the two-qubit tables; sign convention follows |psi^-> = (|00> - |11>)/sqrt(2).
QUBIT_BELL_NAMES = {
    BellIndex(2, 2, 0, (0,)): "psi+",
    BellIndex(2, 2, 1, (0,)): "psi-",
    BellIndex(2, 2, 0, (1,)): "phi+",
    BellIndex(2, 2, 1, (1,)): "phi-",
}
