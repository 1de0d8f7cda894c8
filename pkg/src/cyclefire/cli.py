"""Command-line front end.

Every subcommand prints one JSON document on stdout. Messages and timings
go to stderr. Exit codes: 0 ok, 1 error, 2 infeasible, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .circuits import SearchConstraints, find_circuit_m_basis
from .firing import (
    NotAvalancheFiniteError,
    NotMMatrixError,
    RedistributionMatrix,
    classical_criticals,
    classical_superstables,
    critical_group,
    degree_histogram,
    enumerate_z_superstables,
    fire_multiset,
    maximal_elements,
    stabilize,
)
from .graph import (
    GraphError,
    face_basis,
    fundamental_cycle_basis,
    genus,
    read_graph,
    reduced_laplacian,
    spanning_tree_count,
)
from .linalg import determinant, nontrivial_invariant_factors
from .mbasis import _certificate, is_cycle_m_basis, mbasis_transform

EXIT_CODES = {"ok": 0, "error": 1, "infeasible": 2, "inconclusive": 3}


@dataclass
class CommandResult:
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class UsageError(Exception):
    pass


def _matrix_doc(M):
    return [[str(x) for x in row] for row in M]


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _read_vectors(path: str) -> list[tuple[int, ...]]:
    doc = json.loads(Path(path).read_text())
    vectors = doc["vectors"] if isinstance(doc, dict) else doc
    return [tuple(int(x) for x in v) for v in vectors]


def _basis(g, choice: str):
    """Vectors for ``auto`` / ``fundamental`` / ``faces`` or a JSON file."""
    if choice == "fundamental":
        return list(fundamental_cycle_basis(g).vectors)
    if choice == "auto":
        return list(mbasis_transform(fundamental_cycle_basis(g)).vectors)
    if choice == "faces":
        return list(face_basis(g).vectors)
    return _read_vectors(choice)


def _checked_basis(g, choice: str):
    vectors = _basis(g, choice)
    check = is_cycle_m_basis(g, vectors)
    if not check:
        raise UsageError(f"basis is not a cycle M-basis: {check.failure} {list(check.witness)}")
    return vectors


def cmd_analyze(graph_path: str) -> CommandResult:
    g = read_graph(graph_path)
    return CommandResult("ok", {
        "vertices": g.vertex_count,
        "edges": [list(e) for e in g.edges],
        "genus": genus(g),
        "trees": spanning_tree_count(g),
        "group": list(critical_group(g)),
    })


def cmd_mbasis(graph_path: str, start: str = "fundamental", out: str | None = None) -> CommandResult:
    g = read_graph(graph_path)
    vectors = _basis(g, start)
    cert = mbasis_transform(vectors)
    cert = _certificate(cert.vectors, g, f"mbasis_transform({start})")
    check = is_cycle_m_basis(g, cert.vectors)
    if not check:
        raise UsageError(f"start basis does not span the flow lattice: {check.failure}")
    doc = cert.to_document()
    if out:
        Path(out).write_text(json.dumps(doc, indent=2) + "\n")
    return CommandResult("ok", doc)


def cmd_circuit_basis(
    graph_path: str,
    max_len: int | None = None,
    exact_lens: tuple[int, ...] | None = None,
    budget: int = 10**7,
    seed: int | None = None,
) -> CommandResult:
    g = read_graph(graph_path)
    cons = SearchConstraints(
        max_len=max_len,
        exact_lens=frozenset(exact_lens) if exact_lens else None,
        budget=budget,
        seed=seed,
    )
    result = find_circuit_m_basis(g, cons)
    payload = result.report()
    diagnostics = [f"search took {result.seconds:.3f}s"]
    if result.status == "found":
        payload["certificate"] = result.certificate.to_document()
        payload["circuits"] = [list(c.vertices) for c in result.circuits]
        return CommandResult("ok", payload, diagnostics)
    return CommandResult(result.status, payload, diagnostics)


def _superstable_doc(configs):
    return {
        "count": len(configs),
        "histogram": degree_histogram(configs),
        "maximal": [list(c) for c in maximal_elements(configs)],
        "configurations": [list(c) for c in configs],
    }


def cmd_zsuper(graph_path: str, basis: str = "auto") -> CommandResult:
    g = read_graph(graph_path)
    vectors = _checked_basis(g, basis)
    L = _certificate(vectors, g).dual_laplacian
    configs = enumerate_z_superstables(L)
    doc = {"trees": spanning_tree_count(g), "dual_laplacian": _matrix_doc(L)}
    doc.update(_superstable_doc(configs))
    return CommandResult("ok", doc)


def cmd_stabilize(
    graph_path: str,
    basis: str = "classical",
    config: str = "",
    multiset: str | None = None,
    max_fires: int = 10**6,
) -> CommandResult:
    g = read_graph(graph_path)
    if basis == "classical":
        L = reduced_laplacian(g)
    else:
        L = _certificate(_checked_basis(g, basis), g).dual_laplacian
    R = RedistributionMatrix(L)
    c = _parse_ints(config, "--config")
    if len(c) != R.size:
        raise UsageError(f"--config has {len(c)} entries, expected {R.size}")
    if any(x < 0 for x in c):
        raise UsageError("--config must be effective (no negative entries)")
    if multiset is not None:
        z = _parse_ints(multiset, "--multiset")
        if len(z) != R.size:
            raise UsageError(f"--multiset has {len(z)} entries, expected {R.size}")
        return CommandResult("ok", {"config": list(c), "multiset": list(z),
                                    "result": list(fire_multiset(c, R, z))})
    stable, counts = stabilize(c, R, max_fires=max_fires)
    return CommandResult("ok", {"config": list(c), "stable": list(stable),
                                "firing_counts": list(counts)})


def cmd_superstables(graph_path: str) -> CommandResult:
    g = read_graph(graph_path)
    configs = classical_superstables(g)
    doc = _superstable_doc(configs)
    doc["criticals"] = [list(c) for c in classical_criticals(g)]
    return CommandResult("ok", doc)


def cmd_faces(graph_path: str) -> CommandResult:
    from .circuits import planar_circuit_m_basis

    g = read_graph(graph_path)
    if g.rotation is None:
        raise UsageError("graph file has no rotation system")
    cert = planar_circuit_m_basis(g)
    doc = cert.to_document()
    doc["group"] = list(nontrivial_invariant_factors(cert.dual_laplacian))
    doc["determinant"] = str(determinant(cert.dual_laplacian))
    return CommandResult("ok", doc)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CODES["error"], f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyclefire", description="Cycle chip-firing and M-bases of flow lattices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", help="genus, spanning trees, critical group")
    s.add_argument("graph")

    s = sub.add_parser("mbasis", help="transform a flow basis into an M-basis")
    s.add_argument("graph")
    s.add_argument("--start", default="fundamental",
                   help="fundamental, faces, or a JSON file of vectors")
    s.add_argument("--out", help="also write the certificate here")

    s = sub.add_parser("circuit-basis", help="search for a circuit M-basis")
    s.add_argument("graph")
    s.add_argument("--max-len", type=int)
    s.add_argument("--exact-lens", help="comma-separated allowed circuit lengths")
    s.add_argument("--budget", type=int, default=10**7, help="search node cap")
    s.add_argument("--seed", type=int, help="shuffle circuits of equal length")

    s = sub.add_parser("zsuper", help="z-superstables of a dual Laplacian")
    s.add_argument("graph")
    s.add_argument("--basis", default="auto", help="auto, faces, fundamental or a JSON file")

    s = sub.add_parser("stabilize", help="stabilize a configuration")
    s.add_argument("graph")
    s.add_argument("--basis", default="classical",
                   help="classical (reduced Laplacian), auto, faces or a JSON file")
    s.add_argument("--config", required=True)
    s.add_argument("--multiset", help="fire this multiset once instead of stabilizing")
    s.add_argument("--max-fires", type=int, default=10**6)

    s = sub.add_parser("superstables", help="classical superstables and criticals")
    s.add_argument("graph")

    s = sub.add_parser("faces", help="face basis of a planar rotation system")
    s.add_argument("graph")
    return p


def run(argv=None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args.graph)
        if args.command == "mbasis":
            return cmd_mbasis(args.graph, args.start, args.out)
        if args.command == "circuit-basis":
            lens = _parse_ints(args.exact_lens, "--exact-lens") if args.exact_lens else None
            return cmd_circuit_basis(args.graph, args.max_len, lens, args.budget, args.seed)
        if args.command == "zsuper":
            return cmd_zsuper(args.graph, args.basis)
        if args.command == "stabilize":
            return cmd_stabilize(args.graph, args.basis, args.config, args.multiset, args.max_fires)
        if args.command == "superstables":
            return cmd_superstables(args.graph)
        if args.command == "faces":
            return cmd_faces(args.graph)
    except (UsageError, GraphError, NotMMatrixError, NotAvalancheFiniteError,
            OSError, ValueError, KeyError) as exc:
        return CommandResult("error", {}, [f"{type(exc).__name__}: {exc}"])
    raise AssertionError(args.command)


def main(argv=None) -> int:
    start = time.perf_counter()
    result = run(argv)
    if result.payload or result.status != "error":
        json.dump(result.payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    print(f"{result.status} in {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
