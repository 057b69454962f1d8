import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qudisc.bell import (
    BellIndex,
    QubitBellIndex,
    bell_qubit,
    bell_qudit,
    enumerate_bell_basis,
    identify_bell_state,
)
from qudisc.gates import xd_matrix, zd_matrix

S = 1 / np.sqrt(2)


def ket(d, *digits):
    v = np.zeros(d ** len(digits), complex)
    v[np.ravel_multi_index(digits, (d,) * len(digits))] = 1
    return v


def test_qubit_bell_states():
    assert np.allclose(bell_qubit(2, 0, "+").amps, S * (ket(2, 0, 0) + ket(2, 1, 1)))
    assert np.allclose(bell_qubit(2, 1, "-").amps, S * (ket(2, 0, 1) - ket(2, 1, 0)))
    assert np.allclose(bell_qubit(3, 0, "+").amps, S * (ket(2, 0, 0, 0) + ket(2, 1, 1, 1)))


def test_qubit_index_errors():
    with pytest.raises(ValueError):
        bell_qubit(2, 2, "+")
    with pytest.raises(ValueError):
        bell_qubit(2, 0, "x")
    with pytest.raises(ValueError):
        bell_qubit(1, 0, "+")


def test_qudit_bell_examples():
    assert np.allclose(bell_qudit(BellIndex(2, 2, 0, (0,))).amps, bell_qubit(2, 0, "+").amps)
    want = (ket(3, 0, 1) + ket(3, 1, 2) + ket(3, 2, 0)) / np.sqrt(3)
    assert np.allclose(bell_qudit(BellIndex(3, 2, 0, (1,))).amps, want)


def _kron(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _eigenvalue(op, v):
    lam = np.vdot(v, op @ v)
    assert np.abs(op @ v - lam * v).max() < 1e-12
    return lam


def test_three_qutrit_eigenvalues():
    psi = bell_qudit(BellIndex(3, 3, 1, (0, 2))).amps
    x3 = _kron([xd_matrix(3).matrix] * 3)
    assert abs(_eigenvalue(x3, psi) - np.exp(2j * np.pi / 3)) < 1e-12
    z = zd_matrix(3).matrix
    zz12 = _kron([z.conj().T, z, np.eye(3)])
    assert abs(_eigenvalue(zz12, psi) - 1) < 1e-12


labels = st.integers(2, 4).flatmap(
    lambda d: st.integers(2, 3).flatmap(
        lambda n: st.builds(
            BellIndex,
            st.just(d),
            st.just(n),
            st.integers(0, d - 1),
            st.tuples(*[st.integers(0, d - 1)] * (n - 1)),
        )
    )
)


@given(labels)
def test_eigenstate_property(idx):
    d, n = idx.d, idx.n
    psi = bell_qudit(idx).amps
    xn = _kron([xd_matrix(d).matrix] * n)
    assert abs(_eigenvalue(xn, psi) - np.exp(2j * np.pi * idx.p / d)) < 1e-12
    z = zd_matrix(d).matrix
    v = (0, *idx.q)
    for a in range(n):
        for b in range(a + 1, n):
            mats = [np.eye(d)] * n
            mats[a], mats[b] = z.conj().T, z
            want = np.exp(2j * np.pi * (v[b] - v[a]) / d)
            assert abs(_eigenvalue(_kron(mats), psi) - want) < 1e-12
            assert idx.relative_parity(a + 1, b + 1) == (v[b] - v[a]) % d


@pytest.mark.parametrize("d, n, count", [(2, 2, 4), (3, 2, 9), (2, 3, 8), (3, 3, 27), (5, 2, 25)])
def test_enumeration(d, n, count):
    labels = enumerate_bell_basis(d, n)
    assert len(labels) == count == len(set(labels))
    assert labels == sorted(labels, key=lambda i: (i.p, i.q))


@pytest.mark.parametrize("d, n", [(2, 3), (3, 2), (3, 3)])
def test_gram_identity(d, n):
    vecs = np.array([bell_qudit(i).amps for i in enumerate_bell_basis(d, n)])
    assert np.abs(vecs.conj() @ vecs.T - np.eye(d**n)).max() < 1e-12


def test_enumeration_memory_cap(monkeypatch):
    monkeypatch.setenv("QUDISC_MAX_AMPLITUDES", "100")
    with pytest.raises(ValueError):
        enumerate_bell_basis(5, 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_qubit_reduction(n):
    for x in range(2 ** (n - 1)):
        for sign in "+-":
            qi = QubitBellIndex(n, x, sign)
            assert np.allclose(bell_qudit(qi.to_bell_index()).amps, bell_qubit(n, x, sign).amps)
            assert QubitBellIndex.from_bell_index(qi.to_bell_index()) == qi


def test_bell_index_validation():
    with pytest.raises(ValueError):
        BellIndex(3, 2, 3, (0,))
    with pytest.raises(ValueError):
        BellIndex(3, 3, 0, (0,))
    with pytest.raises(ValueError):
        BellIndex(3, 2, 0, (-1,))


def test_identify_bell_state():
    idx = BellIndex(3, 2, 2, (1,))
    psi = bell_qudit(idx)
    from qudisc.tensor import StateVector

    shifted = StateVector(3, 2, psi.amps * 1j)
    found, phase = identify_bell_state(shifted)
    assert found == idx and abs(phase - 1j) < 1e-12
    mixed = StateVector(3, 2, (psi.amps + bell_qudit(BellIndex(3, 2, 0, (0,))).amps) / np.sqrt(2))
    assert identify_bell_state(mixed) is None
