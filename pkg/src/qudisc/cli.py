"""Command line front-end.

    qudisc discriminate --d 3 --n 3 --p 2 --q 1,0
    qudisc table1
    qudisc verify all --seed 7
    qudisc closure --d 3 --variant "Hdag(x)H"
    qudisc cost --topology linear --n 10
    qudisc bench --d 2 --n 18

Every command takes ``--format {json,csv,text}``.  The amplitude cap can be
raised with the ``QUDISC_MAX_AMPLITUDES`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import netcost, outsourcing, verify
from .bell import QUBIT_BELL_NAMES, BellIndex, bell_qudit
from .discriminator import ParityPairSet, discriminate
from .tensor import DimensionError

COMMANDS = ("discriminate", "table1", "verify", "closure", "cost", "bench")
FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    command: str
    d: int | None = 2
    n: int = 2
    p: int | None = None
    q: tuple[int, ...] | None = None
    pairs: str = "consecutive"
    topology: str = "linear"
    alice: int | None = None
    middle: bool = False
    suite: str = "all"
    variant: str = "both"
    output: str = "text"
    seed: int = 0


def _round(x: float) -> float:
    # + 0.0 folds -0.0 so identical runs print identical text
    return round(float(x), 12) + 0.0


def _parse_pairs(spec: str, n: int) -> ParityPairSet:
    if spec == "consecutive":
        return ParityPairSet.consecutive(n)
    if spec == "star":
        return ParityPairSet.star(n)
    pairs = []
    for item in spec.split(","):
        a, b = item.split("-")
        pairs.append((int(a), int(b)))
    return ParityPairSet(tuple(pairs))


def _discrimination_record(idx: BellIndex, pairs: ParityPairSet) -> dict:
    psi = bell_qudit(idx)
    r = discriminate(psi, pairs=pairs)
    return {
        "d": idx.d,
        "n": idx.n,
        "p": r.p,
        "q": list(r.q),
        "outcomes": list(r.ancilla_outcomes),
        "fidelity": _round(psi.fidelity(r.post_state)),
        "deterministic": r.deterministic,
        "gate_count": r.two_qudit_gates,
    }


def cmd_discriminate(cfg: RunConfig) -> tuple[int, list[dict]]:
    idx = BellIndex(cfg.d, cfg.n, cfg.p or 0, cfg.q if cfg.q is not None else (0,) * (cfg.n - 1))
    return 0, [_discrimination_record(idx, _parse_pairs(cfg.pairs, cfg.n))]


def cmd_table1(cfg: RunConfig) -> tuple[int, list[dict]]:
    rows = []
    for idx, name in QUBIT_BELL_NAMES.items():
        r = discriminate(bell_qudit(idx))
        rows.append({"state": name, "A1": r.ancilla_outcomes[0], "A2": r.ancilla_outcomes[1]})
    return 0, rows


def cmd_verify(cfg: RunConfig) -> tuple[int, list[dict]]:
    cases = verify.run_suite(cfg.suite, cfg.seed)
    rows = []
    status = 0
    for suite in sorted({c.suite for c in cases}):
        mine = [c for c in cases if c.suite == suite]
        failed = [c for c in mine if not c.ok]
        row = {"suite": suite, "cases": len(mine), "failed": len(failed), "first_failure": ""}
        if failed:
            status = 1
            row["first_failure"] = f"{failed[0].case_id} {failed[0].detail}".strip()
        rows.append(row)
    return status, rows


def cmd_closure(cfg: RunConfig) -> tuple[int, list[dict]]:
    variants = outsourcing.CLOSURE_VARIANTS if cfg.variant == "both" else (cfg.variant,)
    dims = [cfg.d] if cfg.d is not None else list(range(2, 8))
    rows = []
    for d in dims:
        for variant in variants:
            formula = outsourcing.closure_formula(d, variant)
            for src, (img, phase) in outsourcing.closure_map(d, variant).items():
                rows.append({
                    "d": d,
                    "variant": variant,
                    "p": src.p,
                    "q": src.q[0],
                    "p_image": img.p,
                    "q_image": img.q[0],
                    "phase_re": _round(phase.real),
                    "phase_im": _round(phase.imag),
                    "matches_formula": formula[src] == img,
                })
    return 0, rows


def _topology(cfg: RunConfig) -> netcost.Topology:
    if cfg.middle:
        if cfg.topology != netcost.LINEAR:
            raise ValueError("--middle only applies to the linear topology")
        return netcost.Topology.linear_middle(cfg.n)
    if cfg.alice is not None:
        return netcost.Topology(cfg.topology, cfg.n, cfg.alice)
    # default Alice: star hub, or the far end of the chain
    alice = 1 if cfg.topology == netcost.STAR else cfg.n
    return netcost.Topology(cfg.topology, cfg.n, alice)


def cmd_cost(cfg: RunConfig) -> tuple[int, list[dict]]:
    t = _topology(cfg)
    return 0, [netcost.protocol_cost(t).to_record(), netcost.baseline_cost(t).to_record()]


def cmd_bench(cfg: RunConfig) -> tuple[int, list[dict]]:
    rng = np.random.default_rng(cfg.seed)
    idx = BellIndex(cfg.d, cfg.n, int(rng.integers(cfg.d)), tuple(rng.integers(0, cfg.d, cfg.n - 1)))
    start = time.perf_counter()
    rec = _discrimination_record(idx, ParityPairSet.consecutive(cfg.n))
    rec["seconds"] = round(time.perf_counter() - start, 4)
    rec["amplitudes_with_ancilla"] = cfg.d ** (cfg.n + 1)
    ok = (rec["p"], tuple(rec["q"])) == (idx.p, idx.q)
    return (0 if ok else 1), [rec]


HANDLERS = {
    "discriminate": cmd_discriminate,
    "table1": cmd_table1,
    "verify": cmd_verify,
    "closure": cmd_closure,
    "cost": cmd_cost,
    "bench": cmd_bench,
}


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if not rows:
        return ""
    keys = list(rows[0])
    flat = [{k: " ".join(map(str, v)) if isinstance(v, list) else v for k, v in r.items()} for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    widths = {k: max(len(k), *(len(str(r[k])) for r in flat)) for k in keys}
    lines = ["  ".join(k.ljust(widths[k]) for k in keys)]
    lines += ["  ".join(str(r[k]).ljust(widths[k]) for k in keys) for r in flat]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudisc", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=FORMATS, default="text")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discriminate", parents=[common], help="discriminate one Bell state")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=_int_list, default=None, help="parity vector, e.g. 1,0")
    p.add_argument("--pairs", default="consecutive", help="consecutive, star, or e.g. 1-2,1-3")

    sub.add_parser("table1", parents=[common], help="two-qubit read-out table")

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", nargs="?", default="all", choices=sorted(verify.SUITES) + ["all"])

    p = sub.add_parser("closure", parents=[common], help="Bell labels under Hadamard pairs")
    p.add_argument("--d", type=int, default=None, help="single dimension (default: 2..7)")
    p.add_argument("--variant", default="both", choices=("both", *outsourcing.CLOSURE_VARIANTS))

    p = sub.add_parser("cost", parents=[common], help="communication and gate costs")
    p.add_argument("--topology", choices=(netcost.STAR, netcost.LINEAR), default=netcost.LINEAR)
    p.add_argument("--n", type=int, required=True)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--alice", type=int, default=None)
    where.add_argument("--middle", action="store_true")

    p = sub.add_parser("bench", parents=[common], help="time a full discrimination")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=18)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, output=args.output, seed=args.seed)
    for name in ("d", "n", "p", "q", "pairs", "topology", "alice", "middle", "suite", "variant"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def run(cfg: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    status, rows = HANDLERS[cfg.command](cfg)
    out.write(render(rows, cfg.output))
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        return run(cfg)
    except (ValueError, DimensionError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
