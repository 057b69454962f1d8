"""Non-destructive generalized Bell state discrimination.

One phase sub-circuit (ancilla-controlled C-SUM onto every player, between
Fourier gates on the ancilla) reads ``p``; one parity sub-circuit per pair
``(a, b)`` reads ``v_b - v_a``.  Each sub-circuit gets a fresh ancilla that
is appended after the system, measured, and dropped again.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .bell import BellIndex
from .circuit import Circuit
from .gates import GateKind
from .tensor import StateVector, measure_wire

DETERMINISTIC_TOL = 1e-10


class InconsistentParityError(ValueError):
    """Parity outcomes disagree around a cycle of the pair graph."""


@dataclass(frozen=True)
class ParityPairSet:
    """Player pairs ``(a, b)`` (1-based) whose relative parities are measured."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if a == b:
                raise ValueError(f"parity pair ({a}, {b}) needs two distinct players")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def consecutive(cls, n: int) -> ParityPairSet:
        return cls(tuple((i, i + 1) for i in range(1, n)))

    @classmethod
    def star(cls, n: int, hub: int = 1) -> ParityPairSet:
        return cls(tuple((hub, j) for j in range(1, n + 1) if j != hub))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def graph(self, n: int) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, n + 1))
        for a, b in self.pairs:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"pair ({a}, {b}) names a player outside 1..{n}")
            g.add_edge(a, b)
        return g

    def require_spanning(self, n: int) -> None:
        if not nx.is_connected(self.graph(n)):
            raise ValueError(
                f"parity pairs {list(self.pairs)} do not connect all {n} players; "
                "the parity vector is not determined"
            )


def _as_pairs(pairs, n: int) -> ParityPairSet:
    if pairs is None:
        return ParityPairSet.consecutive(n)
    if isinstance(pairs, ParityPairSet):
        return pairs
    return ParityPairSet(tuple(pairs))


def build_phase_circuit(d: int, n: int, prepare_with_dagger: bool = False) -> Circuit:
    """Phase read-out on ``n`` system wires plus one ancilla (wire ``n``).

    The default prepares the ancilla with ``H_d`` and decodes with ``H_d^dag``
    so a Bell input leaves the ancilla in ``|p>``.  ``prepare_with_dagger``
    swaps the two, which reads ``-p mod d`` instead.
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    anc = n
    first, last = GateKind.HD, GateKind.HD_DAG
    if prepare_with_dagger:
        first, last = last, first
    c = Circuit(d, n, 1)
    c.add(first, [anc])
    for wire in range(n):
        c.add(GateKind.CSUM, [anc, wire])
    c.add(last, [anc])
    return c


def build_parity_circuit(d: int, n: int, pair: tuple[int, int]) -> Circuit:
    """Relative parity of players ``(a, b)`` onto a fresh ``|0>`` ancilla.

    ``CSUM^dag(b -> anc)`` adds digit ``b``, then ``CSUM(a -> anc)`` subtracts
    digit ``a``; the ancilla ends in ``|v_b - v_a>`` on Bell inputs.
    """
    (a, b), = ParityPairSet((pair,)).pairs
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"pair ({a}, {b}) names a player outside 1..{n}")
    anc = n
    c = Circuit(d, n, 1)
    c.add(GateKind.CSUM_DAG, [b - 1, anc])
    c.add(GateKind.CSUM, [a - 1, anc])
    return c


def build_discriminator(d: int, n: int, pairs=None, phase_first: bool = True) -> list[Circuit]:
    """Sub-circuits in execution order, each acting on system + its own ancilla."""
    pairs = _as_pairs(pairs, n)
    pairs.require_spanning(n)
    phase = [build_phase_circuit(d, n)]
    parity = [build_parity_circuit(d, n, pr) for pr in pairs]
    return phase + parity if phase_first else parity + phase


def reconstruct_q(outcomes: Sequence[int], pairs, d: int, n: int) -> tuple[int, ...]:
    """Solve ``v_1 = 0``, ``v_b - v_a = outcome`` (mod d) over the pair graph."""
    pairs = _as_pairs(pairs, n)
    if len(outcomes) != len(pairs):
        raise ValueError(f"{len(pairs)} pairs but {len(outcomes)} outcomes")
    pairs.require_spanning(n)
    adj: dict[int, list[tuple[int, int]]] = {k: [] for k in range(1, n + 1)}
    for (a, b), m in zip(pairs, outcomes):
        adj[a].append((b, m))
        adj[b].append((a, -m))
    v = {1: 0}
    stack = [1]
    while stack:
        a = stack.pop()
        for b, m in adj[a]:
            want = (v[a] + m) % d
            if b not in v:
                v[b] = want
                stack.append(b)
            elif v[b] != want:
                raise InconsistentParityError(
                    f"parity outcomes disagree at player {b}: {v[b]} vs {want}"
                )
    return tuple(v[k] for k in range(2, n + 1))


@dataclass(frozen=True)
class DiscriminationResult:
    p: int
    q: tuple[int, ...]
    ancilla_outcomes: tuple[int, ...]
    post_state: StateVector
    deterministic: bool
    probabilities: tuple[float, ...]
    two_qudit_gates: int

    @property
    def label(self) -> BellIndex:
        return BellIndex(self.post_state.d, self.post_state.n_wires, self.p, self.q)


def _run_with_ancilla(state: StateVector, circuit: Circuit):
    return measure_wire(circuit.run(state.with_ancilla()), state.n_wires)


def _check_system(state: StateVector, d: int | None, n: int | None) -> tuple[int, int]:
    d = state.d if d is None else d
    n = state.n_wires if n is None else n
    if (state.d, state.n_wires) != (d, n):
        raise ValueError(f"state is (d={state.d}, n={state.n_wires}), expected (d={d}, n={n})")
    return d, n


def discriminate(
    state: StateVector,
    d: int | None = None,
    n: int | None = None,
    pairs=None,
    *,
    phase_first: bool = True,
    rng: np.random.Generator | None = None,
) -> DiscriminationResult:
    """Run the phase and parity read-outs and rebuild the Bell label.

    Without ``rng`` the most likely outcome is kept at every measurement
    (exact on Bell inputs); with ``rng`` outcomes are sampled.  Outcomes are
    reported as ``(M_1, M_pair1, ...)`` whatever the execution order.
    """
    d, n = _check_system(state, d, n)
    pairs = _as_pairs(pairs, n)
    circuits = build_discriminator(d, n, pairs, phase_first)
    outcomes, probs = [], []
    current = state
    for circuit in circuits:
        branches = _run_with_ancilla(current, circuit)
        if rng is None:
            pick = max(branches, key=lambda b: b.probability)
        else:
            weights = np.array([b.probability for b in branches])
            pick = branches[rng.choice(len(branches), p=weights / weights.sum())]
        outcomes.append(pick.outcome)
        probs.append(pick.probability)
        current = pick.post_state
    if not phase_first:
        outcomes = outcomes[-1:] + outcomes[:-1]
        probs = probs[-1:] + probs[:-1]
    try:
        q = reconstruct_q(outcomes[1:], pairs, d, n)
    except InconsistentParityError:
        # sampled outcomes from a non-Bell input need not be cycle-consistent
        q = ()
    return DiscriminationResult(
        p=outcomes[0],
        q=q,
        ancilla_outcomes=tuple(outcomes),
        post_state=current,
        deterministic=all(pr >= 1 - DETERMINISTIC_TOL for pr in probs),
        probabilities=tuple(probs),
        two_qudit_gates=sum(c.two_qudit_gate_count for c in circuits),
    )


@dataclass(frozen=True)
class Branch:
    outcomes: tuple[int, ...]
    probability: float
    post_state: StateVector


def sector_distribution(
    state: StateVector,
    d: int | None = None,
    n: int | None = None,
    pairs=None,
    *,
    phase_first: bool = True,
    cutoff: float = 1e-14,
) -> list[Branch]:
    """Exact joint outcome distribution, one entry per non-negligible branch.

    Outcomes are ordered as in :func:`discriminate`; branches are sorted by
    outcome tuple.
    """
    d, n = _check_system(state, d, n)
    circuits = build_discriminator(d, n, pairs, phase_first)
    frontier = [((), 1.0, state)]
    for circuit in circuits:
        nxt = []
        for outs, prob, st in frontier:
            for b in _run_with_ancilla(st, circuit):
                if prob * b.probability > cutoff:
                    nxt.append((outs + (b.outcome,), prob * b.probability, b.post_state))
        frontier = nxt
    result = []
    for outs, prob, st in frontier:
        if not phase_first:
            outs = outs[-1:] + outs[:-1]
        result.append(Branch(outs, prob, st))
    return sorted(result, key=lambda b: b.outcomes)


def expected_outcomes(idx: BellIndex, pairs: Iterable[tuple[int, int]] | None = None) -> tuple[int, ...]:
    """Outcomes a Bell input must produce: ``(p, v_b - v_a for each pair)``."""
    pairs = _as_pairs(pairs, idx.n)
    return (idx.p, *(idx.relative_parity(a, b) for a, b in pairs))
