"""Seeded Haar-random unitaries and states."""

from __future__ import annotations

import numpy as np

from .tensor import StateVector, check_size


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_state(d: int, n_wires: int, rng: np.random.Generator) -> StateVector:
    size = check_size(d, n_wires)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return StateVector(d, n_wires, v / np.linalg.norm(v))
