"""Generalized qudit gates: clock, shift, Fourier, C-SUM and controlled-U.

Conventions::

    Z_d |j>      = exp(2 pi i j / d) |j>
    X_d |j>      = |j - 1 mod d>
    (H_d)_{jk}   = exp(2 pi i j k / d) / sqrt(d)
    CSUM |c>|t>  = |c>|t - c mod d>        (control first)

so that ``X_d = H_d Z_d H_d^dag`` and ``controlled_u(X_d) == csum(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .tensor import DenseOperator


def _check_dim(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"qudit dimension must be an integer >= 2, got {d!r}")


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def _roots(d: int, k: int = 1) -> np.ndarray:
    # exact integer exponent reduction keeps Z^d == I to machine precision
    j = (np.arange(d) * k) % d
    return np.exp(2j * np.pi * j / d)


@lru_cache(maxsize=None)
def _zd(d: int) -> DenseOperator:
    return DenseOperator(d, 1, np.diag(_roots(d)))


@lru_cache(maxsize=None)
def _xd(d: int) -> DenseOperator:
    m = np.zeros((d, d), dtype=np.complex128)
    j = np.arange(d)
    m[(j - 1) % d, j] = 1.0
    return DenseOperator(d, 1, m)


@lru_cache(maxsize=None)
def _hd(d: int) -> DenseOperator:
    j = np.arange(d)
    m = np.exp(2j * np.pi * (np.outer(j, j) % d) / d) / np.sqrt(d)
    return DenseOperator(d, 1, m)


@lru_cache(maxsize=None)
def _csum(d: int, dagger: bool) -> DenseOperator:
    sign = 1 if dagger else -1
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for c in range(d):
        for t in range(d):
            m[c * d + (t + sign * c) % d, c * d + t] = 1.0
    return DenseOperator(d, 2, m)


def zd_matrix(d: int) -> DenseOperator:
    """Clock operator ``diag(1, w, ..., w^(d-1))`` with ``w = exp(2 pi i/d)``."""
    _check_dim(d)
    return _zd(int(d))


def xd_matrix(d: int) -> DenseOperator:
    """Shift operator sending ``|j>`` to ``|j-1 mod d>``."""
    _check_dim(d)
    return _xd(int(d))


def hd_matrix(d: int) -> DenseOperator:
    """Generalized Hadamard (the unitary DFT matrix); ``hd_matrix(2)`` is H."""
    _check_dim(d)
    return _hd(int(d))


def hd_dagger(d: int) -> DenseOperator:
    return hd_matrix(d).dagger


def csum(d: int, dagger: bool = False) -> DenseOperator:
    """Two-wire C-SUM, control wire first.

    ``dagger=False`` maps ``|c>|t> -> |c>|t-c>``; ``dagger=True`` is the
    inverse ``|c>|t> -> |c>|t+c>``. Both reduce to CNOT at ``d=2``.
    """
    _check_dim(d)
    return _csum(int(d), bool(dagger))


def controlled_u(u: DenseOperator, d_ancilla: int | None = None) -> DenseOperator:
    """Block-diagonal ``sum_j |j><j| (x) u^j`` with the ancilla wire first.

    The ancilla shares the wire dimension of ``u``; ``d_ancilla`` is accepted
    for explicitness and must match it.
    """
    d = u.d
    if d_ancilla is None:
        d_ancilla = d
    _check_dim(d_ancilla)
    if d_ancilla != d:
        raise ValueError(f"ancilla dimension {d_ancilla} must equal wire dimension {d}")
    u.require_unitary()
    side = u.matrix.shape[0]
    out = np.zeros((d * side, d * side), dtype=np.complex128)
    block = np.eye(side, dtype=np.complex128)
    for j in range(d):
        out[j * side:(j + 1) * side, j * side:(j + 1) * side] = block
        block = u.matrix @ block
    return DenseOperator(d, u.arity + 1, out)


class GateKind(str, Enum):
    ZD = "ZD"
    XD = "XD"
    HD = "HD"
    HD_DAG = "HDDAG"
    CSUM = "CSUM"
    CSUM_DAG = "CSUMDAG"
    CONTROLLED_U = "CU"


ANCILLA_CONTROLS_SYSTEM = "ancilla-controls-system"
SYSTEM_CONTROLS_ANCILLA = "system-controls-ancilla"


@dataclass(frozen=True, eq=False)
class GateSpec:
    """Symbolic gate; :meth:`operator` realizes it as a :class:`DenseOperator`.

    ``power`` applies to the single-wire kinds. ``control_role`` is
    informational for the C-SUM family and is filled in by :class:`Circuit`.
    ``payload`` is the controlled unitary for ``CONTROLLED_U``.
    """

    kind: GateKind
    d: int
    power: int = 1
    control_role: str | None = None
    payload: DenseOperator | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        _check_dim(self.d)
        if self.kind is GateKind.CONTROLLED_U:
            if self.payload is None:
                raise ValueError("controlled-U gate needs a payload operator")
            if self.payload.d != self.d:
                raise ValueError("payload dimension differs from gate dimension")

    @property
    def arity(self) -> int:
        if self.kind in (GateKind.CSUM, GateKind.CSUM_DAG):
            return 2
        if self.kind is GateKind.CONTROLLED_U:
            return self.payload.arity + 1
        return 1

    def operator(self) -> DenseOperator:
        d = self.d
        if self.kind is GateKind.ZD:
            return zd_matrix(d).power(self.power)
        if self.kind is GateKind.XD:
            return xd_matrix(d).power(self.power)
        if self.kind is GateKind.HD:
            return hd_matrix(d).power(self.power)
        if self.kind is GateKind.HD_DAG:
            return hd_dagger(d).power(self.power)
        if self.kind is GateKind.CSUM:
            return csum(d, False)
        if self.kind is GateKind.CSUM_DAG:
            return csum(d, True)
        return controlled_u(self.payload, d)

    def with_role(self, role: str | None) -> GateSpec:
        return GateSpec(self.kind, self.d, self.power, role, self.payload)
