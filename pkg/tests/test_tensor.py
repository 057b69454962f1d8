import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qudisc.gates import xd_matrix, zd_matrix
from qudisc.randoms import random_state, random_unitary
from qudisc.tensor import (
    DenseOperator,
    DimensionError,
    StateVector,
    apply_embedded,
    equal_up_to_global_phase,
    measure_wire,
    new_basis_state,
    operator_matrix,
)


def kron_oracle(op, wires, n, d):
    """Embed via kron(op, I) followed by a wire permutation matrix."""
    k = len(wires)
    full = np.kron(op, np.eye(d ** (n - k)))
    # full acts with op on wires 0..k-1; move those axes onto `wires`
    rest = [w for w in range(n) if w not in wires]
    order = list(wires) + rest
    perm = np.zeros((d**n, d**n))
    for digits in itertools.product(range(d), repeat=n):
        src = np.ravel_multi_index(digits, (d,) * n)
        target = [0] * n
        for pos, w in enumerate(order):
            target[w] = digits[pos]
        perm[np.ravel_multi_index(target, (d,) * n), src] = 1
    return perm @ full @ perm.T


@pytest.mark.parametrize(
    "d, n, digits, index",
    [(2, 2, [0, 0], 0), (3, 2, [1, 2], 5), (2, 3, [1, 1, 1], 7)],
)
def test_basis_state_index(d, n, digits, index):
    psi = new_basis_state(d, n, digits)
    assert psi.amps[index] == 1
    assert np.count_nonzero(psi.amps) == 1


def test_basis_state_errors(monkeypatch):
    with pytest.raises(ValueError):
        new_basis_state(2, 2, [0, 2])
    with pytest.raises(ValueError):
        new_basis_state(2, 2, [0])
    with pytest.raises(DimensionError):
        new_basis_state(2, 27, [0] * 27)
    monkeypatch.setenv("QUDISC_MAX_AMPLITUDES", "8")
    new_basis_state(2, 3, [0, 0, 0])
    with pytest.raises(DimensionError):
        new_basis_state(3, 2, [0, 0])


def test_state_is_immutable_and_normalized():
    psi = new_basis_state(2, 1, [0])
    with pytest.raises(ValueError):
        psi.amps[0] = 0
    with pytest.raises(ValueError):
        StateVector(2, 1, np.array([1.0, 1.0]))


def test_x_flips_wire_zero():
    out = apply_embedded(new_basis_state(2, 2, [0, 0]), xd_matrix(2), [0])
    assert np.allclose(out.amps, new_basis_state(2, 2, [1, 0]).amps)


def test_identity_leaves_state(rng):
    psi = random_state(3, 3, rng)
    out = apply_embedded(psi, DenseOperator(3, 2, np.eye(9)), [2, 0])
    assert np.array_equal(out.amps, psi.amps)


def test_z3_phases_per_digit():
    w = np.exp(2j * np.pi / 3)
    amps = np.zeros(9, complex)
    amps[1] = amps[5] = 1 / np.sqrt(2)  # (|01> + |12>)/sqrt2
    out = apply_embedded(StateVector(3, 2, amps), zd_matrix(3), [1])
    want = np.zeros(9, complex)
    want[1], want[5] = w / np.sqrt(2), w**2 / np.sqrt(2)
    assert np.abs(out.amps - want).max() < 1e-12


def test_apply_errors():
    psi = new_basis_state(2, 2, [0, 0])
    with pytest.raises(ValueError):
        apply_embedded(psi, xd_matrix(2), [0, 1])
    with pytest.raises(ValueError):
        apply_embedded(psi, DenseOperator(2, 2, np.eye(4)), [1, 1])
    with pytest.raises(IndexError):
        apply_embedded(psi, xd_matrix(2), [2])


@settings(max_examples=60, deadline=None)
@given(
    d=st.integers(2, 3),
    n=st.integers(1, 3),
    data=st.data(),
    seed=st.integers(0, 2**32 - 1),
)
def test_embedding_matches_kron_oracle(d, n, data, seed):
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(1, n))
    wires = data.draw(st.permutations(range(n)))[:k]
    u = random_unitary(d**k, rng)
    psi = random_state(d, n, rng)
    got = apply_embedded(psi, DenseOperator(d, k, u), wires).amps
    want = kron_oracle(u, wires, n, d) @ psi.amps
    assert np.abs(got - want).max() <= 1e-12
    assert np.abs(operator_matrix(DenseOperator(d, k, u), wires, n) - kron_oracle(u, wires, n, d)).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(d=st.integers(2, 5), n=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_norm_preserved_and_measurement_sums(d, n, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(d, n, rng)
    k = min(n, 2)
    wires = rng.permutation(n)[:k].tolist()
    out = apply_embedded(psi, DenseOperator(d, k, random_unitary(d**k, rng)), wires)
    assert abs(np.linalg.norm(out.amps) - 1) <= 1e-12
    for w in range(n):
        res = measure_wire(out, w)
        assert [o.outcome for o in res] == list(range(d))
        assert abs(sum(o.probability for o in res) - 1) <= 1e-10


def test_measure_single_wire():
    (zero, one) = measure_wire(new_basis_state(2, 1, [0]), 0)
    assert zero.probability == 1 and one.probability == 0
    plus = StateVector(2, 1, np.array([1, 1]) / np.sqrt(2))
    probs = [o.probability for o in measure_wire(plus, 0)]
    assert probs == pytest.approx([0.5, 0.5], abs=1e-12)


def test_measure_removes_wire_and_renormalizes():
    amps = np.zeros(8, complex)
    amps[0b010] = 0.6
    amps[0b111] = 0.8
    res = measure_wire(StateVector(2, 3, amps), 0)
    assert res[0].probability == pytest.approx(0.36)
    assert res[0].post_state.n_wires == 2
    assert np.allclose(res[0].post_state.amps, new_basis_state(2, 2, [1, 0]).amps)
    assert np.allclose(res[1].post_state.amps, new_basis_state(2, 2, [1, 1]).amps)


def test_equal_up_to_global_phase():
    plus = StateVector(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    minus = StateVector(2, 2, np.array([1, 0, 0, -1]) / np.sqrt(2))
    assert equal_up_to_global_phase(plus, plus) == (True, pytest.approx(1))
    ok, phase = equal_up_to_global_phase(plus, StateVector(2, 2, plus.amps * np.exp(1j * np.pi / 4)))
    assert ok and abs(phase - np.exp(1j * np.pi / 4)) < 1e-12
    assert equal_up_to_global_phase(plus, minus) == (False, None)
    with pytest.raises(ValueError):
        equal_up_to_global_phase(plus, new_basis_state(2, 3, [0, 0, 0]))
