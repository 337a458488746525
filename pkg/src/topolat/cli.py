"""Batch command-line surface for the verification laboratory.

Every subcommand prints one deterministic JSON report to stdout (wall
time goes to stderr so reports stay byte-identical across runs) and
exits 0 when all checks pass, 1 when a verification property fails (a
counterexample to something that should hold), and 2 on usage or input
errors.  Randomized subcommands require an explicit seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import factorial

from .errors import IntegrityAlarm, TopolatError
from .finfield import GF, VectorSpace, enumerate_subspaces
from .galois import enumerate_vector_topologies, galois_report
from .hartmanis import reconstruct_bijection
from .lattice import (
    LatticeIsoTable,
    TYPE_TABLE,
    atom_profiles,
    enumerate_automorphisms,
    sigma_lattice,
    type_of,
)
from .projective import SubspaceIsoTable, TauIsoTable, ftpg_reconstruct, theorem_c_pipeline
from .rigidity import end_to_end_theorem_a, theorem_b_group
from .topology import (
    FinTopology,
    TOPOLOGY_COUNTS,
    count_topologies,
    enumerate_topologies,
)


def _parse_field(text: str) -> tuple[int, int]:
    try:
        p, k = (int(x) for x in text.split(","))
    except ValueError:
        raise TopolatError(f"--field expects 'p,k', got {text!r}")
    return p, k


def _space_from_args(args) -> VectorSpace:
    p, k = _parse_field(args.field)
    return VectorSpace(GF(p, k), args.dim)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise TopolatError(f"cannot read table file {path}: {e}")


# -- subcommand handlers -------------------------------------------------------

def cmd_count_top(args) -> dict:
    n = args.n
    count = count_topologies(n, big_ok=args.budget)
    expected = TOPOLOGY_COUNTS[n] if n < len(TOPOLOGY_COUNTS) else None
    return {
        "command": "count-top",
        "n": n,
        "count": count,
        "expected": expected,
        "pass": expected is None or count == expected,
    }


def cmd_enum_top(args) -> dict:
    n = args.n
    sink = open(args.out, "w") if args.out else sys.stdout
    count = 0
    try:
        for t in enumerate_topologies(n, big_ok=args.budget):
            sink.write(json.dumps(t.to_json_dict(), separators=(",", ":")) + "\n")
            count += 1
    finally:
        if args.out:
            sink.close()
    report = {
        "command": "enum-top",
        "n": n,
        "count": count,
        "expected": TOPOLOGY_COUNTS[n] if n < len(TOPOLOGY_COUNTS) else None,
        "out": args.out,
        "pass": count == TOPOLOGY_COUNTS[n],
    }
    if not args.out:
        # the stream itself was the output; keep stdout pure JSON lines
        print(json.dumps(report), file=sys.stderr)
        return {"pass": report["pass"], "quiet": True}
    return report


def cmd_type_table(args) -> dict:
    n = args.n
    if not 3 <= n <= 7:
        raise TopolatError("type-table needs 3 <= n <= 7")
    profiles = atom_profiles(n)
    realized: dict[str, set[int]] = {}
    for i, p in enumerate(profiles):
        for q in profiles[i + 1:]:
            key = ",".join(sorted((p.klass, q.klass)))
            realized.setdefault(key, set()).add(type_of(p, q))
    within = all(
        vals <= TYPE_TABLE[tuple(key.split(","))]  # type: ignore[index]
        for key, vals in realized.items()
    )
    l_atoms = [p for p in profiles if p.klass == "L"]
    l_ok = all(
        any(q.klass == "L" and q.mask != p.mask and type_of(p, q) == 4 for q in l_atoms)
        for p in l_atoms
    )
    return {
        "command": "type-table",
        "n": n,
        "realized": {k: sorted(v) for k, v in sorted(realized.items())},
        "within_table": within,
        "l_atoms": len(l_atoms),
        "every_l_atom_has_type4_partner": l_ok,
        "pass": within and l_ok,
    }


def cmd_aut_sigma(args) -> dict:
    n = args.n
    if not 2 <= n <= 4:
        raise TopolatError("aut-sigma supports 2 <= n <= 4")
    lat = sigma_lattice(n)
    auts = enumerate_automorphisms(lat)
    expected = factorial(n) * (2 if n >= 3 else 1)
    return {
        "command": "aut-sigma",
        "n": n,
        "lattice_size": lat.size,
        "count": len(auts),
        "expected": expected,
        "pass": len(auts) == expected,
    }


def _infer_sigma_n(d: dict) -> int:
    if "n" in d:
        return int(d["n"])
    size = int(d["size"])
    for n, c in enumerate(TOPOLOGY_COUNTS):
        if c == size and n >= 2:
            return n
    raise TopolatError(f"table size {size} is not a full topology-lattice size")


def cmd_hartmanis(args) -> dict:
    d = _load_json(args.table)
    n = _infer_sigma_n(d)
    if not 2 <= n <= 5:
        raise TopolatError("full-lattice reconstruction supports 2 <= n <= 5")
    lat = sigma_lattice(n)
    table = LatticeIsoTable(lat, lat, [int(x) for x in d["map"]], check_order=n <= 4)
    result = reconstruct_bijection(table)
    out = result.to_json_dict()
    out.update({"command": "hartmanis", "n": n, "pass": True})
    return out


def cmd_vt_census(args) -> dict:
    sp = _space_from_args(args)
    image = enumerate_vector_topologies(sp, "image")
    report = {
        "command": "vt-census",
        "space": {"p": sp.field.p, "k": sp.field.k, "dim": sp.dim},
        "subspaces": len(enumerate_subspaces(sp)),
        "image_count": len(image),
    }
    run_census = args.mode == "census" or (args.mode == "auto" and sp.size <= 5)
    if run_census:
        census = enumerate_vector_topologies(sp, "census")
        report["census_count"] = len(census)
        report["census_equals_image"] = set(census) == set(image)
        report["pass"] = report["census_equals_image"] and len(image) == report["subspaces"]
    else:
        report["census_count"] = None
        report["pass"] = len(image) == report["subspaces"]
    return report


def cmd_galois_verify(args) -> dict:
    report = galois_report(_space_from_args(args))
    report["command"] = "galois-verify"
    return report


def cmd_theorem_b(args) -> dict:
    report = theorem_b_group(_space_from_args(args), seed=args.seed)
    report["command"] = "theorem-b"
    report["seed"] = args.seed
    return report


def cmd_theorem_a_e2e(args) -> dict:
    report = end_to_end_theorem_a(args.seed, args.trials)
    report["command"] = "theorem-a-e2e"
    return report


def _space_from_json(d: dict) -> VectorSpace:
    return VectorSpace(GF(int(d["p"]), int(d["k"])), int(d["dim"]))


def cmd_ftpg(args) -> dict:
    d = _load_json(args.table)
    table = SubspaceIsoTable(
        _space_from_json(d["source_space"]),
        _space_from_json(d["target_space"]),
        [int(x) for x in d["map"]],
    )
    psi, phi = ftpg_reconstruct(table)
    return {
        "command": "ftpg",
        "size": len(table.map),
        "psi_frobenius_exponent": psi.e,
        "matrix": [list(r) for r in phi.matrix],
        "pass": True,
    }


def cmd_theorem_c(args) -> dict:
    d = _load_json(args.table)
    table = TauIsoTable(
        _space_from_json(d["source_space"]),
        _space_from_json(d["target_space"]),
        [int(x) for x in d["map"]],
    )
    report = theorem_c_pipeline(table, hausdorff_check=not args.no_hausdorff_check)
    report["command"] = "theorem-c"
    return report


def cmd_export_dot(args) -> dict:
    tops: list[FinTopology] = []
    with open(args.input) as fh:
        for line in fh:
            line = line.strip()
            if line:
                tops.append(FinTopology.from_json_dict(json.loads(line)))
    if not tops:
        raise TopolatError("input file holds no topologies")
    n = tops[0].n
    if any(t.n != n for t in tops):
        raise TopolatError("input topologies live on different ground sizes")
    size = len(tops)
    leq = [[tops[i].famset <= tops[j].famset for j in range(size)] for i in range(size)]
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for i, t in enumerate(tops):
        lines.append(f'  n{i} [label="{len(t.opens)}"];')
    for i in range(size):
        for j in range(size):
            if i != j and leq[i][j]:
                if not any(
                    k != i and k != j and leq[i][k] and leq[k][j] for k in range(size)
                ):
                    lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    dot = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    return {
        "command": "export-dot",
        "nodes": size,
        "out": args.out,
        "pass": True,
        "quiet": args.out is None,
    }


# -- driver --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topolat",
        description="verification lab for lattices of topologies on finite vector spaces",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="data-parallelism hint; results are identical for any value")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-top", help="count all topologies on n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", action="store_true",
                   help="allow n = 7 (9.5M topologies, ~half a minute)")
    p.set_defaults(fn=cmd_count_top)

    p = sub.add_parser("enum-top", help="stream topologies as JSON lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--budget", action="store_true")
    p.set_defaults(fn=cmd_enum_top)

    p = sub.add_parser("type-table", help="realized atom-pair types per class pair")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_type_table)

    p = sub.add_parser("aut-sigma", help="automorphism census of the topology lattice")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_aut_sigma)

    p = sub.add_parser("hartmanis", help="reconstruct the bijection behind a lattice iso table")
    p.add_argument("--table", required=True)
    p.set_defaults(fn=cmd_hartmanis)

    p = sub.add_parser("vt-census", help="vector topologies: saturation images vs continuity filter")
    p.add_argument("--field", required=True, help="p,k")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "census", "image"], default="auto")
    p.set_defaults(fn=cmd_vt_census)

    p = sub.add_parser("galois-verify", help="exhaustive connection checks on one space")
    p.add_argument("--field", required=True, help="p,k")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(fn=cmd_galois_verify)

    p = sub.add_parser("theorem-b", help="census + automorphism group structure")
    p.add_argument("--field", required=True, help="p,k")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_theorem_b)

    p = sub.add_parser("theorem-a-e2e", help="seeded end-to-end reconstruction round trips")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(fn=cmd_theorem_a_e2e)

    p = sub.add_parser("ftpg", help="coordinatize a subspace-lattice iso table")
    p.add_argument("--table", required=True)
    p.set_defaults(fn=cmd_ftpg)

    p = sub.add_parser("theorem-c", help="vector-topology iso to field isomorphism pipeline")
    p.add_argument("--table", required=True)
    p.add_argument("--no-hausdorff-check", action="store_true")
    p.set_defaults(fn=cmd_theorem_c)

    p = sub.add_parser("export-dot", help="Hasse diagram of topologies from a JSON-lines file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    t0 = time.perf_counter()
    try:
        report = args.fn(args)
    except IntegrityAlarm as e:
        print(json.dumps({
            "command": args.command,
            "pass": False,
            "error": type(e).__name__,
            "message": str(e),
        }))
        return 1
    except TopolatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"# wall_time_s={time.perf_counter() - t0:.3f}", file=sys.stderr)
    if not report.get("quiet"):
        print(json.dumps(report))
    return 0 if report.get("pass", True) else 1


if __name__ == "__main__":
    sys.exit(main())
