"""Gate sequences over system + ancilla wires, and their line-oriented text form.

Wires ``0 .. system_wires-1`` hold the system; ancillas follow them.

Text grammar (one step per line, ``#`` starts a comment)::

    circuit  := header step*
    header   := "CIRCUIT" d system_wires ancilla_count
    step     := GATE ["^" power] d wire+ [payload]
    GATE     := ZD | XD | HD | HDDAG | CSUM | CSUMDAG | CU
    payload  := "payload=" re,im;re,im;...      (CU only, row-major)

e.g. the d=2 phase sub-circuit on two system wires::

    CIRCUIT 2 2 1
    HD 2 2
    CSUM 2 2 0
    CSUM 2 2 1
    HDDAG 2 2
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .gates import (
    ANCILLA_CONTROLS_SYSTEM,
    SYSTEM_CONTROLS_ANCILLA,
    GateKind,
    GateSpec,
)
from .tensor import DenseOperator, StateVector, apply_embedded, apply_tensor, check_size


@dataclass(frozen=True)
class Step:
    gate: GateSpec
    wires: tuple[int, ...]


@dataclass
class Circuit:
    d: int
    system_wires: int
    ancilla_count: int = 0
    steps: list[Step] = field(default_factory=list)

    @property
    def n_wires(self) -> int:
        return self.system_wires + self.ancilla_count

    @property
    def two_qudit_gate_count(self) -> int:
        return sum(1 for s in self.steps if s.gate.arity == 2)

    def is_ancilla(self, wire: int) -> bool:
        return wire >= self.system_wires

    def add(self, kind, wires: Sequence[int], power: int = 1, payload: DenseOperator | None = None) -> Circuit:
        gate = GateSpec(kind, self.d, power, payload=payload)
        return self.append(gate, wires)

    def append(self, gate: GateSpec, wires: Sequence[int]) -> Circuit:
        wires = tuple(int(w) for w in wires)
        if gate.d != self.d:
            raise ValueError(f"gate dimension {gate.d} != circuit dimension {self.d}")
        if len(wires) != gate.arity:
            raise ValueError(f"{gate.kind.value} takes {gate.arity} wires, got {wires}")
        if len(set(wires)) != len(wires):
            raise ValueError(f"duplicate wire in {wires}")
        for w in wires:
            if not 0 <= w < self.n_wires:
                raise IndexError(f"wire {w} out of range for {self.n_wires} wires")
        if gate.kind in (GateKind.CSUM, GateKind.CSUM_DAG):
            ctrl, tgt = wires
            role = None
            if self.is_ancilla(ctrl) and not self.is_ancilla(tgt):
                role = ANCILLA_CONTROLS_SYSTEM
            elif self.is_ancilla(tgt) and not self.is_ancilla(ctrl):
                role = SYSTEM_CONTROLS_ANCILLA
            gate = gate.with_role(role)
        self.steps.append(Step(gate, wires))
        return self

    def extend(self, other: Circuit) -> Circuit:
        if (other.d, other.n_wires) != (self.d, self.n_wires):
            raise ValueError("circuits have different wire layouts")
        for s in other.steps:
            self.append(s.gate, s.wires)
        return self

    def reordered(self, order: Sequence[int]) -> Circuit:
        order = [int(i) for i in order]
        if sorted(order) != list(range(len(self.steps))):
            raise ValueError(f"{order} is not a permutation of the {len(self.steps)} steps")
        out = Circuit(self.d, self.system_wires, self.ancilla_count)
        for i in order:
            out.append(self.steps[i].gate, self.steps[i].wires)
        return out

    def run(self, state: StateVector) -> StateVector:
        """Apply every step to a register laid out like this circuit."""
        if (state.d, state.n_wires) != (self.d, self.n_wires):
            raise ValueError(
                f"state has (d={state.d}, wires={state.n_wires}); circuit expects "
                f"(d={self.d}, wires={self.n_wires})"
            )
        for s in self.steps:
            state = apply_embedded(state, s.gate.operator(), s.wires)
        return state

    def unitary(self) -> np.ndarray:
        """Dense matrix of the whole circuit in this circuit's wire order."""
        size = check_size(self.d, self.n_wires)
        t = np.eye(size, dtype=np.complex128).reshape((self.d,) * self.n_wires + (size,))
        for s in self.steps:
            t = apply_tensor(t, s.gate.operator().matrix, s.wires, self.d)
        return t.reshape(size, size)

    def to_text(self) -> str:
        lines = [f"CIRCUIT {self.d} {self.system_wires} {self.ancilla_count}"]
        for s in self.steps:
            name = s.gate.kind.value
            if s.gate.power != 1:
                name += f"^{s.gate.power}"
            parts = [name, str(self.d), *map(str, s.wires)]
            if s.gate.payload is not None:
                flat = s.gate.payload.matrix.reshape(-1)
                parts.append("payload=" + ";".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in flat))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        circuit = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if circuit is None:
                    if tok[0] != "CIRCUIT" or len(tok) != 4:
                        raise ValueError("expected 'CIRCUIT d system_wires ancilla_count'")
                    circuit = cls(int(tok[1]), int(tok[2]), int(tok[3]))
                    continue
                name, _, power = tok[0].partition("^")
                kind = GateKind(name)
                d = int(tok[1])
                if d != circuit.d:
                    raise ValueError(f"gate dimension {d} != circuit dimension {circuit.d}")
                payload = None
                rest = tok[2:]
                if rest and rest[-1].startswith("payload="):
                    payload = _parse_payload(d, rest.pop()[len("payload="):])
                circuit.add(kind, [int(w) for w in rest], int(power or 1), payload)
            except (ValueError, IndexError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if circuit is None:
            raise ValueError("empty circuit text")
        return circuit


def _parse_payload(d: int, body: str) -> DenseOperator:
    vals = [complex(float(re), float(im)) for re, im in (p.split(",") for p in body.split(";"))]
    side = int(round(np.sqrt(len(vals))))
    return DenseOperator.from_matrix(d, np.array(vals).reshape(side, side))
