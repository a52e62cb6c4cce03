"""Command-line surface: check, valuate, worlds, closure, gen3dm, bench.

Exit codes: 0 every dependency satisfied (or witness found), 1 a dependency
violated or no witness exists, 2 usage, parse, model, or budget errors.
The FDLAB_WORLD_CAP environment variable overrides the valuation cap used by
the strong/weak/seamless checkers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from .armstrong import attribute_closure
from .errors import FdlabError, PfdPreconditionError
from .formats import EXTENSION_MODELS, parse_fds, parse_table, serialize_fds, serialize_table
from .model import Model, Table, enumerate_worlds
from .pfd_index import PfdIndex, bench_inserts
from .semantics import DEFAULT_VALUATION_CAP, Semantics, check
from .valuation import generate_3dm_reduction, parse_3dm, seamless_valuation_pfd

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2


def _world_cap(args) -> int:
    env = os.environ.get("FDLAB_WORLD_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise FdlabError(f"FDLAB_WORLD_CAP must be an integer, got {env!r}") from None
    return getattr(args, "cap", None) or DEFAULT_VALUATION_CAP


def _load_table(path: str, model: Optional[Model] = None) -> Table:
    p = Path(path)
    model = model or EXTENSION_MODELS.get(p.suffix.lower())
    return parse_table(p.read_text(encoding="utf-8"), model=model)


def _load_fds(path: str) -> list:
    return parse_fds(Path(path).read_text(encoding="utf-8"))


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    table = _load_table(args.table)
    fds = _load_fds(args.fds)
    report = check(table, fds, Semantics(args.semantics), valuation_cap=_world_cap(args))
    if args.format == "text":
        _emit(args, report.to_text(timing=args.timing))
    else:
        payload = report.to_dict()
        if args.timing:
            payload["elapsed_ms"] = round(report.elapsed_s * 1000, 3)
        _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


def cmd_valuate(args) -> int:
    table = _load_table(args.table)
    fds = _load_fds(args.fds)
    try:
        world = seamless_valuation_pfd(table, fds, seed=args.seed)
    except PfdPreconditionError as exc:
        sys.stderr.write(f"fdlab: dependency not satisfied: {exc.fd}\n")
        return EXIT_VIOLATED
    _emit(args, serialize_table(world))
    return EXIT_OK


def cmd_worlds(args) -> int:
    table = _load_table(args.table)
    worlds = enumerate_worlds(table, limit=args.limit)
    chunks = []
    for i, world in enumerate(worlds, start=1):
        chunks.append(f"# world {i} of {len(worlds)}\n" + serialize_table(world))
    _emit(args, "\n".join(chunks))
    return EXIT_OK


def cmd_closure(args) -> int:
    fds = _load_fds(args.fds)
    closed = attribute_closure(fds, args.attrs.split(","))
    _emit(args, ",".join(sorted(closed)) + "\n")
    return EXIT_OK


def cmd_gen3dm(args) -> int:
    inst = parse_3dm(Path(args.instance).read_text(encoding="utf-8"))
    reduction = generate_3dm_reduction(inst)
    table_text = serialize_table(reduction.table)
    fds_text = serialize_fds(reduction.fds)
    if args.out_table:
        Path(args.out_table).write_text(table_text, encoding="utf-8")
    else:
        sys.stdout.write(table_text)
    if args.out_fds:
        Path(args.out_fds).write_text(fds_text, encoding="utf-8")
    else:
        sys.stdout.write(fds_text)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.table:
        table = _load_table(args.table)
        fds = _load_fds(args.fds)
        if len(fds) != 1:
            raise FdlabError("bench over a table file needs exactly one dependency")
        idx = PfdIndex(fds[0], table.schema)
        accepted = rejected = 0
        start = time.perf_counter()
        for t in table.tuples:
            try:
                idx.insert(t)
                accepted += 1
            except FdlabError:
                rejected += 1
        elapsed = time.perf_counter() - start
        _emit(
            args,
            f"fd: {fds[0]}\naccepted: {accepted}\nrejected: {rejected}\n"
            f"total_ms: {elapsed * 1000:.3f}\n",
        )
        return EXIT_OK
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise FdlabError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    report = bench_inserts(sizes=sizes, probes=args.probes, seed=args.seed)
    _emit(args, report.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdlab",
        description="Functional dependencies over vague and disjunctive tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, table=False, fds=False):
        if table:
            p.add_argument("--table", required=True, help="table file (.stab/.vtab/.dtab)")
        if fds:
            p.add_argument("--fds", required=True, help="dependency file")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("check", help="check dependencies under a chosen semantics")
    add_common(p, table=True, fds=True)
    p.add_argument(
        "--semantics",
        required=True,
        choices=[s.value for s in Semantics],
        help="seamless treats the dependency file as one set",
    )
    p.add_argument("--format", choices=["text", "json", "json-like"], default="text")
    p.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    p.add_argument("--cap", type=int, help="valuation cap for strong/weak/seamless")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("valuate", help="produce one world satisfying all pfds")
    add_common(p, table=True, fds=True)
    p.add_argument("--seed", type=int, default=0, help="value-picker seed")
    p.set_defaults(run=cmd_valuate)

    p = sub.add_parser("worlds", help="enumerate distinct possible worlds")
    add_common(p, table=True)
    p.add_argument("--limit", type=int, help="fail once more distinct worlds exist")
    p.set_defaults(run=cmd_worlds)

    p = sub.add_parser("closure", help="attribute closure under a dependency set")
    add_common(p, fds=True)
    p.add_argument("--attrs", required=True, help="comma-separated attribute names")
    p.set_defaults(run=cmd_closure)

    p = sub.add_parser("gen3dm", help="reduce a matching instance to a table plus FDs")
    p.add_argument("--instance", required=True, help="3DM instance file")
    p.add_argument("--out-table", help="write the generated table here")
    p.add_argument("--out-fds", help="write the generated dependencies here")
    p.set_defaults(run=cmd_gen3dm)

    p = sub.add_parser("bench", help="insert-latency report for the enforcement index")
    p.add_argument("--table", help="optional table file to replay")
    p.add_argument("--fds", help="dependency file (one fd) for --table mode")
    p.add_argument("--sizes", default="100,1000,10000", help="synthetic index sizes")
    p.add_argument("--probes", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.run(args)
    except FdlabError as exc:
        sys.stderr.write(f"fdlab: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        sys.stderr.write(f"fdlab: {exc}\n")
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
