"""Quantum communication and gate costs on star and linear networks.

One unit of communication is one qudit crossing one network edge.

Routes used by the non-destructive protocol:

* phase ancilla, star: leaves the hub, visits each leaf and comes back
  through the hub each time, and is measured at the hub;
* phase ancilla, linear: walks the chain once from player 1 to player n;
* parity ancilla for pair ``(a, b)``: prepared at ``b``, carried along a
  shortest path to ``a`` and measured there.

The disentangle-and-reentangle baseline ships every other player's qudit to
Alice along a shortest path and back.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import networkx as nx

from .circuit import Circuit
from .discriminator import ParityPairSet
from .gates import GateKind
from .tensor import StateVector

STAR = "star"
LINEAR = "linear"


@dataclass(frozen=True)
class Topology:
    """Players ``1..n``; a star's hub is player 1 and must be Alice."""

    kind: str
    n: int
    alice: int = 1

    def __post_init__(self):
        if self.kind not in (STAR, LINEAR):
            raise ValueError(f"topology must be '{STAR}' or '{LINEAR}', got {self.kind!r}")
        if self.n < 2:
            raise ValueError(f"need at least two players, got n={self.n}")
        if not 1 <= self.alice <= self.n:
            raise ValueError(f"alice={self.alice} is not a player in 1..{self.n}")
        if self.kind == STAR and self.alice != 1:
            raise ValueError(
                "only the hub (player 1) can be Alice on a star; "
                f"got alice={self.alice}"
            )

    @classmethod
    def linear_middle(cls, n: int) -> Topology:
        """Alice at the centre; for even ``n`` the lower of the two central players."""
        return cls(LINEAR, n, (n + 1) // 2)

    @property
    def hub(self) -> int:
        return 1

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n + 1))
        if self.kind == STAR:
            g.add_edges_from((self.hub, j) for j in range(2, self.n + 1))
        else:
            g.add_edges_from((i, i + 1) for i in range(1, self.n))
        return g

    def parity_pairs(self) -> ParityPairSet:
        if self.kind == STAR:
            return ParityPairSet.star(self.n, self.hub)
        return ParityPairSet.consecutive(self.n)


@dataclass
class CostReport:
    protocol: str
    topology: Topology
    qudits_moved: int = 0
    two_qudit_gates: int = 0
    per_player_gate_counts: list[int] = field(default_factory=list)
    edge_traversals: dict[tuple[int, int], int] = field(default_factory=dict)

    def to_record(self) -> dict:
        t = self.topology
        return {
            "protocol": self.protocol,
            "topology": t.kind,
            "n": t.n,
            "alice": t.alice,
            "qudits_moved": self.qudits_moved,
            "gate_count": self.two_qudit_gates,
            "per_player_gate_counts": list(self.per_player_gate_counts),
        }


class _Tally:
    def __init__(self, topology: Topology):
        self.topology = topology
        self.graph = topology.graph()
        self.edges: Counter = Counter()
        self.gates = Counter()

    def move(self, route: list[int]) -> None:
        for u, v in zip(route, route[1:]):
            if not self.graph.has_edge(u, v):
                raise ValueError(f"route step {u}->{v} is not a network edge")
            self.edges[(min(u, v), max(u, v))] += 1

    def ship(self, src: int, dst: int) -> None:
        self.move(nx.shortest_path(self.graph, src, dst))

    def gate(self, player: int, count: int = 1) -> None:
        self.gates[player] += count

    def report(self, protocol: str) -> CostReport:
        n = self.topology.n
        return CostReport(
            protocol=protocol,
            topology=self.topology,
            qudits_moved=sum(self.edges.values()),
            two_qudit_gates=sum(self.gates.values()),
            per_player_gate_counts=[self.gates[k] for k in range(1, n + 1)],
            edge_traversals=dict(sorted(self.edges.items())),
        )


def phase_route(t: Topology) -> list[int]:
    if t.kind == STAR:
        route = [t.hub]
        for leaf in range(2, t.n + 1):
            route += [leaf, t.hub]
        return route
    return list(range(1, t.n + 1))


def protocol_cost(t: Topology) -> CostReport:
    """Tally the non-destructive protocol: one phase ancilla, one per parity pair."""
    tally = _Tally(t)
    tally.move(phase_route(t))
    for player in range(1, t.n + 1):
        tally.gate(player)
    for a, b in t.parity_pairs():
        tally.ship(b, a)
        tally.gate(a)
        tally.gate(b)
    return tally.report("nondestructive")


def baseline_cost(t: Topology) -> CostReport:
    """Tally shipping every qudit to Alice and back; she applies all 2(n-1) gates."""
    tally = _Tally(t)
    for player in range(1, t.n + 1):
        if player != t.alice:
            tally.ship(player, t.alice)
            tally.ship(t.alice, player)
    tally.gate(t.alice, 2 * (t.n - 1))
    return tally.report("baseline")


def baseline_circuit(d: int, n: int) -> Circuit:
    """Disentangle a Bell state into ``|p>|v_2-v_1>...|v_n-v_{n-1}>``.

    C-SUM from player k onto player k+1, from the last pair back to the
    first, then ``H_d^dag`` on player 1.
    """
    c = Circuit(d, n)
    for k in range(n - 2, -1, -1):
        c.add(GateKind.CSUM, [k, k + 1])
    c.add(GateKind.HD_DAG, [0])
    return c


def baseline_inverse_circuit(d: int, n: int) -> Circuit:
    c = Circuit(d, n)
    c.add(GateKind.HD, [0])
    for k in range(n - 1):
        c.add(GateKind.CSUM_DAG, [k, k + 1])
    return c


@dataclass(frozen=True)
class BaselineResult:
    state: StateVector
    digits: tuple[int, ...] | None

    @property
    def is_product(self) -> bool:
        return self.digits is not None


def product_digits(state: StateVector, tol: float = 1e-10) -> tuple[int, ...] | None:
    """Digits of a computational basis state up to phase, else ``None``."""
    probs = state.probabilities()
    k = int(probs.argmax())
    if probs[k] < 1 - tol:
        return None
    digits = []
    for _ in range(state.n_wires):
        k, r = divmod(k, state.d)
        digits.append(r)
    return tuple(reversed(digits))


def baseline_transform(state: StateVector, d: int | None = None, n: int | None = None) -> BaselineResult:
    """Apply :func:`baseline_circuit`; a non-Bell input is flagged by ``digits=None``."""
    d = state.d if d is None else d
    n = state.n_wires if n is None else n
    out = baseline_circuit(d, n).run(state)
    return BaselineResult(out, product_digits(out))


def baseline_restore(state: StateVector) -> StateVector:
    return baseline_inverse_circuit(state.d, state.n_wires).run(state)
