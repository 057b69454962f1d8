"""Named invariant suites, shared by the CLI ``verify`` command and the tests.

Each check yields ``Case`` records; a suite passes when every case does.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

from . import bell, discriminator, gates, netcost, outsourcing
from .bell import BellIndex, bell_qudit, enumerate_bell_basis
from .randoms import random_state, random_unitary
from .tensor import DenseOperator, StateVector, apply_embedded, measure_wire, unitarity_error

END_TO_END_TOL = 1e-10
CONSTRUCTION_TOL = 1e-12
ROUND_TRIP_GRID = ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2))


@dataclass(frozen=True)
class Case:
    suite: str
    case_id: str
    ok: bool
    detail: str = ""


Check = Callable[[np.random.Generator], Iterator[tuple[str, bool, str]]]
SUITES: dict[str, list[tuple[str, Check]]] = {}


def _check(suite: str):
    def register(fn: Check) -> Check:
        SUITES.setdefault(suite, []).append((fn.__name__, fn))
        return fn

    return register


def embed_by_enumeration(op: np.ndarray, wires, n_wires: int, d: int) -> np.ndarray:
    """Full matrix of ``op`` on ``wires`` built entry by entry from digit tuples."""
    size = d**n_wires
    k = len(wires)
    full = np.zeros((size, size), dtype=np.complex128)
    weights = [d ** (n_wires - 1 - w) for w in range(n_wires)]
    for col_digits in itertools.product(range(d), repeat=n_wires):
        col = sum(x * w for x, w in zip(col_digits, weights))
        sub_in = 0
        for w in wires:
            sub_in = sub_in * d + col_digits[w]
        for sub_out in range(d**k):
            row_digits = list(col_digits)
            rem = sub_out
            for w in reversed(wires):
                rem, row_digits[w] = divmod(rem, d)
            row = sum(x * w for x, w in zip(row_digits, weights))
            full[row, col] += op[sub_out, sub_in]
    return full


# -- tensor-core -------------------------------------------------------------


@_check("tensor")
def norm_preservation(rng):
    for d, n, k in [(2, 4, 1), (2, 4, 2), (3, 3, 2), (3, 3, 3), (5, 2, 2)]:
        psi = random_state(d, n, rng)
        wires = rng.permutation(n)[:k].tolist()
        out = apply_embedded(psi, DenseOperator(d, k, random_unitary(d**k, rng)), wires)
        err = abs(np.linalg.norm(out.amps) - 1)
        yield f"d={d},n={n},wires={wires}", err <= CONSTRUCTION_TOL, f"norm error {err:.2e}"


@_check("tensor")
def embedding_matches_enumeration(rng):
    for d in (2, 3):
        for n in (1, 2, 3):
            for k in range(1, n + 1):
                for wires in itertools.permutations(range(n), k):
                    u = random_unitary(d**k, rng)
                    psi = random_state(d, n, rng)
                    got = apply_embedded(psi, DenseOperator(d, k, u), wires).amps
                    want = embed_by_enumeration(u, wires, n, d) @ psi.amps
                    err = float(np.abs(got - want).max())
                    yield f"d={d},n={n},wires={wires}", err <= CONSTRUCTION_TOL, f"max dev {err:.2e}"


@_check("tensor")
def measurement_probabilities_sum(rng):
    for d, n in [(2, 3), (3, 3), (4, 2), (5, 2)]:
        psi = random_state(d, n, rng)
        for w in range(n):
            total = sum(o.probability for o in measure_wire(psi, w))
            yield f"d={d},n={n},wire={w}", abs(total - 1) <= END_TO_END_TOL, f"sum {total!r}"


# -- gate-lib ----------------------------------------------------------------


@_check("gates")
def gate_unitarity(rng):
    for d in range(2, 8):
        for name, op in [
            ("Z", gates.zd_matrix(d)),
            ("X", gates.xd_matrix(d)),
            ("H", gates.hd_matrix(d)),
            ("CSUM", gates.csum(d)),
            ("CSUMdag", gates.csum(d, True)),
            ("C-X", gates.controlled_u(gates.xd_matrix(d))),
        ]:
            err = unitarity_error(op.matrix)
            yield f"{name},d={d}", err <= CONSTRUCTION_TOL, f"deviation {err:.2e}"


def _zz(d: int, n: int, a: int, b: int) -> np.ndarray:
    """``Z_d`` on wire ``a`` and ``Z_d^dag`` on wire ``b`` (0-based), full register."""
    mats = [np.eye(d)] * n
    mats[a] = gates.zd_matrix(d).matrix
    mats[b] = gates.zd_matrix(d).matrix.conj()
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@_check("gates")
def commutation_backbone(rng):
    for d in range(2, 6):
        for n in range(2, 5):
            xn = gates.xd_matrix(d).matrix
            for _ in range(n - 1):
                xn = np.kron(xn, gates.xd_matrix(d).matrix)
            pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
            worst = 0.0
            for a, b in pairs:
                zz = _zz(d, n, a, b)
                worst = max(worst, float(np.abs(xn @ zz - zz @ xn).max()))
            for (a, b), (c, e) in itertools.combinations(pairs, 2):
                z1, z2 = _zz(d, n, a, b), _zz(d, n, c, e)
                worst = max(worst, float(np.abs(z1 @ z2 - z2 @ z1).max()))
            yield f"d={d},n={n}", worst <= CONSTRUCTION_TOL, f"max commutator {worst:.2e}"


# -- bell-states -------------------------------------------------------------


@_check("bell")
def orthonormal_completeness(rng):
    for d, n in ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)):
        b = bell.bell_matrix(d, n)
        err = float(np.abs(b.conj().T @ b - np.eye(d**n)).max())
        yield f"d={d},n={n}", err <= CONSTRUCTION_TOL, f"gram deviation {err:.2e}"


def _eigen_phase(op_full: np.ndarray, psi: StateVector) -> complex | None:
    out = op_full @ psi.amps
    lam = np.vdot(psi.amps, out)
    if np.abs(out - lam * psi.amps).max() > CONSTRUCTION_TOL:
        return None
    return complex(lam)


@_check("bell")
def eigenstate_property(rng):
    for d, n in ((2, 3), (3, 2), (3, 3), (4, 2)):
        xn = gates.xd_matrix(d).matrix
        for _ in range(n - 1):
            xn = np.kron(xn, gates.xd_matrix(d).matrix)
        for idx in enumerate_bell_basis(d, n):
            psi = bell_qudit(idx)
            lam = _eigen_phase(xn, psi)
            ok = lam is not None and abs(lam - np.exp(2j * np.pi * idx.p / d)) <= CONSTRUCTION_TOL
            for a in range(1, n + 1):
                for b in range(a + 1, n + 1):
                    # Z^dag on a, Z on b
                    mu = _eigen_phase(_zz(d, n, b - 1, a - 1), psi)
                    want = np.exp(2j * np.pi * idx.relative_parity(a, b) / d)
                    ok = ok and mu is not None and abs(mu - want) <= CONSTRUCTION_TOL
            yield f"d={d},n={n},p={idx.p},q={idx.q}", ok, ""


@_check("bell")
def qubit_reduction(rng):
    for n in (2, 3, 4):
        for x in range(2 ** (n - 1)):
            for sign in "+-":
                qi = bell.QubitBellIndex(n, x, sign)
                a = bell.bell_qubit(n, x, sign)
                b = bell_qudit(qi.to_bell_index())
                err = float(np.abs(a.amps - b.amps).max())
                yield f"n={n},x={x},{sign}", err <= CONSTRUCTION_TOL, f"max dev {err:.2e}"


# -- discriminator -----------------------------------------------------------


@_check("discriminator")
def round_trip(rng):
    for d, n in ROUND_TRIP_GRID:
        for idx in enumerate_bell_basis(d, n):
            psi = bell_qudit(idx)
            r = discriminator.discriminate(psi)
            fid = psi.fidelity(r.post_state)
            ok = (r.p, r.q) == (idx.p, idx.q) and r.deterministic and fid >= 1 - END_TO_END_TOL
            yield f"d={d},n={n},p={idx.p},q={idx.q}", ok, f"got p={r.p},q={r.q},fid={fid!r}"


@_check("discriminator")
def order_independence(rng):
    for d, n in ((2, 3), (3, 3), (5, 2)):
        for idx in enumerate_bell_basis(d, n):
            psi = bell_qudit(idx)
            fwd = discriminator.discriminate(psi)
            rev = discriminator.discriminate(psi, phase_first=False)
            ok = fwd.ancilla_outcomes == rev.ancilla_outcomes
            ok = ok and np.abs(fwd.post_state.amps - rev.post_state.amps).max() <= END_TO_END_TOL
            yield f"d={d},n={n},p={idx.p},q={idx.q}", ok, ""


@_check("discriminator")
def alternative_pair_sets(rng):
    scattered = {3: ((1, 3), (3, 2)), 4: ((2, 4), (4, 1), (1, 3))}
    for d, n in ((2, 4), (3, 3)):
        pair_sets = [discriminator.ParityPairSet.star(n), discriminator.ParityPairSet(scattered[n])]
        for pairs in pair_sets:
            for idx in enumerate_bell_basis(d, n):
                r = discriminator.discriminate(bell_qudit(idx), pairs=pairs)
                ok = (r.p, r.q) == (idx.p, idx.q) and r.deterministic
                yield f"d={d},n={n},pairs={pairs.pairs},p={idx.p},q={idx.q}", ok, ""


@_check("discriminator")
def gate_budget(rng):
    for d in (2, 3):
        for n in range(2, 9):
            count = sum(c.two_qudit_gate_count for c in discriminator.build_discriminator(d, n))
            yield f"d={d},n={n}", count == 3 * n - 2, f"{count} gates"


@_check("discriminator")
def superposition_sectors(rng):
    for trial in range(10):
        psi = random_state(2, 2, rng)
        branches = discriminator.sector_distribution(psi)
        ok = len(branches) == 4
        for br in branches:
            idx = BellIndex(2, 2, br.outcomes[0], discriminator.reconstruct_q(br.outcomes[1:], None, 2, 2))
            sector = bell_qudit(idx)
            want = abs(np.vdot(sector.amps, psi.amps)) ** 2
            ok = ok and abs(br.probability - want) <= END_TO_END_TOL
            ok = ok and sector.fidelity(br.post_state) >= 1 - END_TO_END_TOL
        yield f"trial={trial}", ok, ""


# -- outsourcing -------------------------------------------------------------


def random_diagonal_spec(d: int, n_wires: int, rng) -> outsourcing.DiagonalUnitarySpec:
    dim = d**n_wires
    return outsourcing.DiagonalUnitarySpec(
        d, random_unitary(dim, rng), tuple(rng.integers(0, d, size=dim))
    )


@_check("outsourcing")
def outsourced_eigenstates(rng):
    for d in (2, 3, 4, 5):
        for trial in range(5):
            spec = random_diagonal_spec(d, 2, rng)
            col = int(rng.integers(spec.eigenbasis.shape[1]))
            psi = StateVector(d, 2, spec.eigenbasis[:, col])
            res = outsourcing.outsource_measure(spec, psi)
            j = spec.phase_index[col]
            ok = res[j].probability >= 1 - END_TO_END_TOL
            ok = ok and psi.fidelity(res[j].post_state) >= 1 - END_TO_END_TOL
            yield f"d={d},trial={trial}", ok, f"p(j)={res[j].probability!r}"


def _sequential(specs, psi):
    """Joint distribution of successive outsourced read-outs, keyed by outcome tuple."""
    frontier = {(): (1.0, psi)}
    for spec in specs:
        nxt = {}
        for outs, (prob, st) in frontier.items():
            for o in outsourcing.outsource_measure(spec, st):
                if prob * o.probability > 1e-14:
                    nxt[outs + (o.outcome,)] = (prob * o.probability, o.post_state)
        frontier = nxt
    return frontier


@_check("outsourcing")
def compatible_pairs_commute(rng):
    for d in (2, 3, 4):
        for trial in range(4):
            v = random_unitary(d * d, rng)
            u1 = outsourcing.DiagonalUnitarySpec(d, v, tuple(rng.integers(0, d, size=d * d)))
            u2 = outsourcing.DiagonalUnitarySpec(d, v, tuple(rng.integers(0, d, size=d * d)))
            m1, m2 = u1.matrix(), u2.matrix()
            commute = np.abs(m1 @ m2 - m2 @ m1).max() <= CONSTRUCTION_TOL
            psi = random_state(d, 2, rng)
            ab = _sequential([u1, u2], psi)
            ba = {k[::-1]: v for k, v in _sequential([u2, u1], psi).items()}
            ok = commute and ab.keys() == ba.keys()
            for k in ab:
                if not ok:
                    break
                ok = abs(ab[k][0] - ba[k][0]) <= END_TO_END_TOL
                ok = ok and np.abs(ab[k][1].amps - ba[k][1].amps).max() <= END_TO_END_TOL
            yield f"d={d},trial={trial}", bool(ok), ""


@_check("outsourcing")
def controlled_product_decomposition(rng):
    for d in (2, 3, 4):
        for k in (2, 3):
            parts = [DenseOperator(d, 1, random_unitary(d, rng)) for _ in range(k)]
            circ = outsourcing.decompose_controlled_u(parts)
            want = outsourcing.monolithic_controlled_u(parts)
            worst = 0.0
            for _ in range(5):
                order = rng.permutation(k).tolist()
                worst = max(worst, float(np.abs(circ.reordered(order).unitary() - want).max()))
            yield f"d={d},parts={k}", worst <= CONSTRUCTION_TOL, f"max dev {worst:.2e}"


@_check("outsourcing")
def parity_form_ensembles(rng):
    for d in (2, 3, 5):
        ua = outsourcing.parity_circuit_hadamard_form(d).unitary()
        ub = outsourcing.parity_circuit_reversed_form(d).unitary()
        ensemble = [random_state(d, 2, rng).with_ancilla() for _ in range(10)]
        worst = max(float(np.abs(ua @ s.amps - ub @ s.amps).max()) for s in ensemble)
        # mixed input: rho = sum_i w_i |s_i><s_i|
        w = rng.dirichlet(np.ones(len(ensemble)))
        rho = sum(wi * np.outer(s.amps, s.amps.conj()) for wi, s in zip(w, ensemble))
        worst = max(worst, float(np.abs(ua @ rho @ ua.conj().T - ub @ rho @ ub.conj().T).max()))
        yield f"d={d}", worst <= END_TO_END_TOL, f"max dev {worst:.2e}"


# -- netcost -----------------------------------------------------------------


@_check("netcost")
def communication_asymptotics(rng):
    ns = np.arange(2, 51)
    proto = np.array([netcost.protocol_cost(netcost.Topology("linear", int(n))).qudits_moved for n in ns])
    base = np.array([netcost.baseline_cost(netcost.Topology("linear", int(n), int(n))).qudits_moved for n in ns])
    lin = np.all(np.diff(proto, 2) == 0) and np.all(np.diff(proto) > 0)
    quad = np.all(np.diff(base, 3) == 0) and np.all(np.diff(base, 2) > 0)
    yield "linear protocol", bool(lin), f"{proto[:4].tolist()}..."
    yield "quadratic baseline", bool(quad), f"{base[:4].tolist()}..."


@_check("netcost")
def gate_count_cross_check(rng):
    for kind in ("star", "linear"):
        for n in range(2, 12):
            t = netcost.Topology(kind, n)
            emitted = sum(
                c.two_qudit_gate_count
                for c in discriminator.build_discriminator(2, n, t.parity_pairs())
            )
            reported = netcost.protocol_cost(t).two_qudit_gates
            yield f"{kind},n={n}", emitted == reported, f"{emitted} vs {reported}"


@_check("netcost")
def baseline_reversibility(rng):
    for d, n in ROUND_TRIP_GRID:
        for idx in enumerate_bell_basis(d, n):
            psi = bell_qudit(idx)
            res = netcost.baseline_transform(psi)
            back = netcost.baseline_restore(res.state)
            err = float(np.abs(back.amps - psi.amps).max())
            yield f"d={d},n={n},p={idx.p},q={idx.q}", res.is_product and err <= CONSTRUCTION_TOL, f"{err:.2e}"


def run_suite(name: str, seed: int = 0) -> list[Case]:
    """Run one suite (or ``"all"``); cases come back sorted by suite and id."""
    names = sorted(SUITES) if name == "all" else [name]
    cases = []
    for suite in names:
        if suite not in SUITES:
            raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
        for check_name, fn in SUITES[suite]:
            rng = np.random.default_rng([seed, _stable_hash(check_name)])
            for case_id, ok, detail in fn(rng):
                cases.append(Case(suite, f"{check_name}[{case_id}]", bool(ok), detail))
    return sorted(cases, key=lambda c: (c.suite, c.case_id))


def _stable_hash(s: str) -> int:
    return int.from_bytes(s.encode(), "little") % (2**32)
