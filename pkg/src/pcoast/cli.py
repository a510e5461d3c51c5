"""Command-line front end: ``pcoast <subcommand> ...``.

Exit codes: 0 on success, 1 on malformed input (with a ``file:line``
diagnostic on stderr) and 2 when an oracle verification fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import aggregate_stats, max_tqe_bound, r2q
from .graph import ClassicalRemap, Meas, PcoastGraph
from .grouping import InputError, read_pauli_set, read_terms, sorted_insertion
from .ladder import ladder_circuit, ladder_statistics_check
from .measurement_map import map_measurements
from .optimizer import OptimizeMode, optimize_with_report
from .stabilizer_search import find_stabilizers

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
#: Largest register the dense oracle is run on.
VERIFY_MAX_QUBITS = 5


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Failure(EXIT_INPUT, f"{path}: {exc.strerror}") from None


def _load_paulis(path: str):
    try:
        return read_pauli_set(_read(path))
    except InputError as exc:
        raise _Failure(EXIT_INPUT, f"{path}:{exc}") from None


def _load_terms(path: str):
    try:
        return read_terms(_read(path))
    except InputError as exc:
        raise _Failure(EXIT_INPUT, f"{path}:{exc}") from None


def _load_graph(path: str) -> PcoastGraph:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Failure(EXIT_INPUT, f"{path}:line {exc.lineno}: {exc.msg}") from None
    try:
        return PcoastGraph.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise _Failure(EXIT_INPUT, f"{path}: invalid graph: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _csv(rows: list[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("-" if r.get(k) is None else r.get(k)) for k in fields})
    return buf.getvalue()


def _check_size(n: int) -> bool:
    if n > VERIFY_MAX_QUBITS:
        print(f"verification skipped: {n} qubits exceeds {VERIFY_MAX_QUBITS}", file=sys.stderr)
        return False
    return True


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_group(args) -> str:
    grouping = sorted_insertion(_load_terms(args.file))
    if args.csv:
        rows = [
            {"group": gi, "coefficient": t.coefficient, "pauli": t.pauli.label(sign=False)}
            for gi, grp in enumerate(grouping.groups)
            for t in grp
        ]
        return _csv(rows, ["group", "coefficient", "pauli"])
    out = grouping.to_dict()
    out["n_groups"] = len(grouping)
    return _dump(out)


def _cmd_stabsearch(args) -> str:
    S = _load_paulis(args.file)
    try:
        res = find_stabilizers(
            S, args.mode, literal_pseudocode=args.literal_pseudocode, axis_order=args.axis_order
        )
    except ValueError as exc:
        raise _Failure(EXIT_INPUT, f"{args.file}: {exc}") from None
    remap = map_measurements(S, res.circuit, res.frame)
    n = res.circuit.n_qubits
    stats = res.circuit.stats().as_dict()
    k = stats["n_measurements"]
    stats.update(k=k, tqe_bound=max_tqe_bound(n, k), r_2q=r2q(n, k, stats["two_qubit_gates"]))
    out = {
        "circuit": res.circuit.to_dict(),
        "text": res.circuit.to_text().splitlines(),
        "frame": res.frame.to_dict(),
        "remap": remap.to_dict(),
        "stats": stats,
    }
    if args.verify and _check_size(n):
        from .oracle import circuit_to_nodes, release_equivalent

        direct = [Meas(s, t) for s, t in zip(S, remap.targets)]
        searched = circuit_to_nodes(res.circuit) + [remap.to_node()]
        ok = release_equivalent(direct, searched, remap.targets, n, seed=args.seed)
        out["verified"] = ok
        if not ok:
            print(_dump(out))
            raise _Failure(EXIT_VERIFY, "verification failed: searched statistics differ")
    return _dump(out)


def _cmd_ladder(args) -> str:
    S = _load_paulis(args.file)
    try:
        c = ladder_circuit(S)
    except ValueError as exc:
        raise _Failure(EXIT_INPUT, f"{args.file}: {exc}") from None
    stats = c.stats().as_dict()
    n, k = c.n_qubits, stats["n_measurements"]
    stats.update(k=k, r_2q=r2q(n, min(k, n), stats["two_qubit_gates"]))
    out = {"circuit": c.to_dict(), "text": c.to_text().splitlines(), "stats": stats}
    if args.verify and _check_size(n):
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(8):
            psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
            worst = max(worst, max(abs(a - b) for a, b in ladder_statistics_check(S, psi)))
        out["verified"] = worst <= 1e-9
        if not out["verified"]:
            print(_dump(out))
            raise _Failure(EXIT_VERIFY, f"verification failed: expectation gap {worst:.3g}")
    return _dump(out)


def _written_cids(g: PcoastGraph) -> list[str]:
    cids: list[str] = []
    for nd in g.nodes:
        if isinstance(nd, Meas):
            cids += [c for c, _ in nd.outputs]
        elif isinstance(nd, ClassicalRemap):
            cids += list(nd.outputs)
    return list(dict.fromkeys(cids))


def _equivalent(a: PcoastGraph, b: PcoastGraph, mode: str, seed: int) -> bool:
    from .oracle import hold_equivalent, release_equivalent

    if mode == OptimizeMode.HOLD.value:
        return hold_equivalent(a, b)
    return release_equivalent(a, b, _written_cids(a), seed=seed)


def _cmd_optimize(args) -> str:
    g = _load_graph(args.file)
    rep = optimize_with_report(g, args.mode)
    if args.emit_remap:
        payload = {
            "graph": rep.graph.to_dict(),
            "remap": None if rep.remap is None else rep.remap.to_dict(),
            "iterations": rep.iterations,
        }
        text = _dump(payload)
    else:
        text = rep.graph.to_json(indent=2)
    if args.verify and _check_size(g.n_qubits):
        if not _equivalent(g, rep.graph, args.mode, args.seed):
            print(text)
            raise _Failure(EXIT_VERIFY, f"verification failed: graphs are not {args.mode}-equivalent")
    return text


def _cmd_verify(args) -> str:
    a, b = _load_graph(args.first), _load_graph(args.second)
    if a.n_qubits != b.n_qubits:
        raise _Failure(EXIT_INPUT, "graphs act on different qubit counts")
    if not _check_size(a.n_qubits):
        raise _Failure(EXIT_INPUT, "register too large for the dense oracle")
    ok = _equivalent(a, b, args.mode, args.seed)
    text = _dump({"mode": args.mode, "equivalent": ok})
    if not ok:
        print(text)
        raise _Failure(EXIT_VERIFY, f"graphs are not {args.mode}-equivalent")
    return text


STATS_FIELDS = ("group", "k", "total_gates", "two_qubit_gates", "depth", "r_2q")


def _cmd_stats(args) -> str:
    terms = _load_terms(args.file)
    grouping = sorted_insertion(terms)
    n = terms[0].pauli.n_qubits
    rows = []
    for gi in range(len(grouping)):
        res = find_stabilizers(grouping.paulis(gi), args.mode, axis_order=args.axis_order, n_qubits=n)
        s = res.circuit.stats()
        k = s.n_measurements
        rows.append(
            {
                "group": gi,
                "k": k,
                "total_gates": s.total_gates,
                "two_qubit_gates": s.two_qubit_gates,
                "depth": s.depth,
                "r_2q": r2q(n, k, s.two_qubit_gates),
            }
        )
    agg = aggregate_stats(n, rows)
    if args.csv:
        return _csv(rows + [dict(agg, group="mean")], STATS_FIELDS)
    return _dump({"n_qubits": n, "n_groups": len(rows), "groups": rows, "aggregate": agg})


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for oracle test states")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output where supported")

    p = argparse.ArgumentParser(prog="pcoast", description="Pauli-graph measurement and frame optimization tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group", parents=[common], help="sorted-insertion grouping of a term file")
    s.add_argument("file")
    s.set_defaults(func=_cmd_group)

    s = sub.add_parser("stabsearch", parents=[common], help="stabilizer search on a Pauli-set file")
    s.add_argument("file")
    s.add_argument("--mode", choices=("general", "exact"), default="general")
    s.add_argument("--literal-pseudocode", action="store_true", help="scan for agreeing qubits only before the loop")
    s.add_argument("--axis-order", default="XYZ")
    s.add_argument("--verify", action="store_true", help="check joint statistics with the dense oracle")
    s.set_defaults(func=_cmd_stabsearch)

    s = sub.add_parser("ladder", parents=[common], help="CNOT-ladder baseline circuit for a Pauli-set file")
    s.add_argument("file")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=_cmd_ladder)

    s = sub.add_parser("optimize", parents=[common], help="optimize a graph JSON file")
    s.add_argument("file")
    s.add_argument("--mode", choices=[m.value for m in OptimizeMode], default="hold")
    s.add_argument("--emit-remap", action="store_true", help="wrap the graph together with the classical remap")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=_cmd_optimize)

    s = sub.add_parser("verify", parents=[common], help="oracle equivalence of two graph JSON files")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--mode", choices=[m.value for m in OptimizeMode], default="hold")
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("stats", parents=[common], help="per-group search statistics of a term file")
    s.add_argument("file")
    s.add_argument("--mode", choices=("general", "exact"), default="exact")
    s.add_argument("--axis-order", default="XYZ")
    s.set_defaults(func=_cmd_stats)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
