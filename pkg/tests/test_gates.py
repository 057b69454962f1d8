import itertools

import numpy as np
import pytest

from qudisc.gates import (
    GateKind,
    GateSpec,
    controlled_u,
    csum,
    hd_dagger,
    hd_matrix,
    xd_matrix,
    zd_matrix,
)
from qudisc.tensor import DenseOperator, unitarity_error

DIMS = range(2, 8)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def shift_by_control(d, sign):
    """|c>|t> -> |c>|t + sign*c>, built entry by entry."""
    m = np.zeros((d * d, d * d))
    for c, t in itertools.product(range(d), repeat=2):
        m[c * d + (t + sign * c) % d, c * d + t] = 1
    return m


def test_zd_small():
    assert np.allclose(zd_matrix(2).matrix, np.diag([1, -1]))
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(zd_matrix(3).matrix, np.diag([1, w, w**2]))


@pytest.mark.parametrize("d", DIMS)
def test_zd_order_d(d):
    assert np.abs(zd_matrix(d).power(d).matrix - np.eye(d)).max() < 1e-12


def test_xd_small():
    assert np.array_equal(xd_matrix(2).matrix, [[0, 1], [1, 0]])
    assert np.array_equal(xd_matrix(3).matrix[:, 0], [0, 0, 1])  # |0> -> |2>


@pytest.mark.parametrize("d", DIMS)
def test_shift_is_fourier_conjugate_of_clock(d):
    h = hd_matrix(d).matrix
    assert np.abs(xd_matrix(d).matrix - h @ zd_matrix(d).matrix @ h.conj().T).max() < 1e-12


def test_hd_is_hadamard_at_d2():
    assert np.abs(hd_matrix(2).matrix - np.array([[1, 1], [1, -1]]) / np.sqrt(2)).max() < 1e-15


@pytest.mark.parametrize("d", DIMS)
def test_hd_unitary_symmetric_uniform(d):
    h = hd_matrix(d).matrix
    assert np.abs(h @ h.conj().T - np.eye(d)).max() < 1e-12
    assert np.array_equal(h, h.T)
    assert np.allclose(h[:, 0], np.full(d, 1 / np.sqrt(d)))
    assert np.allclose(hd_dagger(d).matrix, h.conj().T)


def test_csum_small():
    assert np.array_equal(csum(2).matrix, CNOT)
    assert np.array_equal(csum(2, True).matrix, CNOT)
    # d=3, |1>|0> -> |1>|2>
    assert csum(3).matrix[1 * 3 + 2, 1 * 3 + 0] == 1


@pytest.mark.parametrize("d", DIMS)
def test_csum_pair(d):
    assert np.array_equal(csum(d).matrix, shift_by_control(d, -1))
    assert np.array_equal(csum(d, True).matrix, shift_by_control(d, +1))
    assert np.array_equal(csum(d).matrix @ csum(d, True).matrix, np.eye(d * d))


def test_controlled_x2_is_cnot():
    assert np.array_equal(controlled_u(xd_matrix(2), 2).matrix, CNOT)


@pytest.mark.parametrize("d", DIMS)
def test_controlled_shift_is_csum(d):
    assert np.array_equal(controlled_u(xd_matrix(d), d).matrix, shift_by_control(d, -1))


def test_controlled_identity():
    eye = DenseOperator(3, 2, np.eye(9))
    assert np.array_equal(controlled_u(eye).matrix, np.eye(27))


def test_controlled_u_rejects_bad_payload():
    with pytest.raises(ValueError):
        controlled_u(DenseOperator(2, 1, np.array([[1, 1], [0, 1]])))
    with pytest.raises(ValueError):
        controlled_u(xd_matrix(3), 2)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_dimension_checks(bad):
    for fn in (zd_matrix, xd_matrix, hd_matrix, csum):
        with pytest.raises(ValueError):
            fn(bad)


@pytest.mark.parametrize("d", DIMS)
def test_every_gate_unitary(d):
    specs = [GateSpec(k, d, power=2) for k in (GateKind.ZD, GateKind.XD, GateKind.HD, GateKind.HD_DAG)]
    specs += [GateSpec(GateKind.CSUM, d), GateSpec(GateKind.CSUM_DAG, d)]
    specs.append(GateSpec(GateKind.CONTROLLED_U, d, payload=zd_matrix(d)))
    for s in specs:
        assert unitarity_error(s.operator().matrix) <= 1e-12, s.kind


def test_gate_powers_by_repeated_product():
    z3 = zd_matrix(3).matrix
    assert np.allclose(GateSpec(GateKind.ZD, 3, power=2).operator().matrix, z3 @ z3)
    assert np.allclose(GateSpec(GateKind.XD, 5, power=-1).operator().matrix, xd_matrix(5).matrix.T)


def _embed(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@pytest.mark.parametrize("d", range(2, 6))
@pytest.mark.parametrize("n", range(2, 5))
def test_commutation_backbone(d, n):
    x, z = xd_matrix(d).matrix, zd_matrix(d).matrix
    xn = _embed([x] * n)

    def zz(j, k):
        mats = [np.eye(d)] * n
        mats[j], mats[k] = z, z.conj().T
        return _embed(mats)

    pairs = [(j, k) for j in range(n) for k in range(n) if j != k]
    for j, k in pairs:
        a = zz(j, k)
        assert np.abs(xn @ a - a @ xn).max() < 1e-12
    for (j, k), (j2, k2) in itertools.combinations(pairs, 2):
        a, b = zz(j, k), zz(j2, k2)
        assert np.abs(a @ b - b @ a).max() < 1e-12
