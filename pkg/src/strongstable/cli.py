"""Command-line front end.

Exit codes: 0 success, 1 no strongly stable matching (or a blocking edge for
``check``), 2 bad input, 3 oracle cap exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, TextIO

from .fixed_edge import stable_pairs
from .instance import (
    GenParams,
    Instance,
    ValidationError,
    format_matching,
    generate_random,
    parse_instance,
    parse_matching,
    serialize_instance,
)
from .maxseq import format_sequence, maximal_sequence
from .oracle import DEFAULT_CAP, CapExceeded, all_matchings_stable
from .representation import enumerate_classes, expand_class, format_poset, irreducible_classes
from .rotations import format_rotations, rotation_poset
from .solver import NoSolution, blocking_edges, man_optimal, woman_optimal

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_INPUT = 2
EXIT_CAP = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse from exiting the process
        raise _UsageError(message)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> Instance:
    return parse_instance(_read(path))


def _class_line(inst: Instance, k: int, sig) -> str:
    ranks = " ".join(f"{inst.men[m]}={r}" for m, r in enumerate(sig) if r is not None)
    return f"class {k}: {ranks}".rstrip() + "\n"


def cmd_solve(args, out: TextIO) -> int:
    inst = _load(args.file)
    M = man_optimal(inst) if args.side == "men" else woman_optimal(inst)
    out.write(format_matching(inst, M))
    return EXIT_OK if M is not None else EXIT_NO_SOLUTION


def cmd_check(args, out: TextIO) -> int:
    inst = _load(args.file)
    M = parse_matching(inst, _read(args.matching))
    if M is None:
        raise ValidationError("matching file says NONE")
    try:
        report = blocking_edges(inst, M)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    for m, w in sorted(report.edges):
        out.write(f"{inst.men[m]} {inst.women[w]}\n")
    return EXIT_NO_SOLUTION if report else EXIT_OK


def cmd_pairs(args, out: TextIO) -> int:
    inst = _load(args.file)
    if man_optimal(inst) is None:
        out.write("NONE\n")
        return EXIT_NO_SOLUTION
    for m, w in sorted(stable_pairs(inst)):
        out.write(f"{inst.men[m]} {inst.women[w]}\n")
    return EXIT_OK


def cmd_classes(args, out: TextIO) -> int:
    inst = _load(args.file)
    out.write(format_poset(irreducible_classes(inst)))
    return EXIT_OK


def cmd_enumerate(args, out: TextIO) -> int:
    inst = _load(args.file)
    for k, cls in enumerate(enumerate_classes(inst)):
        out.write(_class_line(inst, k, cls.signature))
        if args.expand:
            for M in expand_class(inst, cls, args.limit):
                out.write(format_matching(inst, M) + "\n")
    return EXIT_OK


def cmd_sequence(args, out: TextIO) -> int:
    inst = _load(args.file)
    seq = maximal_sequence(inst)
    out.write(format_sequence(inst, seq))
    return EXIT_OK if seq is not None else EXIT_NO_SOLUTION


def cmd_rotations(args, out: TextIO) -> int:
    inst = _load(args.file)
    out.write(format_rotations(inst, rotation_poset(inst)))
    return EXIT_OK


def cmd_intermediate(args, out: TextIO) -> int:
    from .maxseq import has_intermediate

    inst = _load(args.file)
    out.write("yes\n" if has_intermediate(inst) else "no\n")
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    try:
        params = GenParams(args.men, args.women, args.density, args.ties, args.seed)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    out.write(serialize_instance(generate_random(params)))
    return EXIT_OK


def cmd_oracle(args, out: TextIO) -> int:
    inst = _load(args.file)
    found = all_matchings_stable(inst, cap=args.cap)
    if not found:
        out.write("NONE\n")
        return EXIT_NO_SOLUTION
    found.sort(key=lambda M: [(-1 if w is None else w) for w in M.wife])
    out.write("\n".join(format_matching(inst, M) for M in found))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="strongstable",
                description="Strongly stable matchings of bipartite instances with ties.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="man- or woman-optimal strongly stable matching")
    s.add_argument("file")
    s.add_argument("--side", choices=("men", "women"), default="men")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", help="list blocking edges of a matching")
    s.add_argument("file")
    s.add_argument("--matching", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("pairs", help="edges that occur in some strongly stable matching")
    s.add_argument("file")
    s.set_defaults(func=cmd_pairs)

    s = sub.add_parser("classes", help="irreducible classes and their covers")
    s.add_argument("file")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("enumerate", help="every class of strongly stable matchings")
    s.add_argument("file")
    s.add_argument("--expand", action="store_true", help="also list matchings of each class")
    s.add_argument("--limit", type=int, default=10, help="matchings per class with --expand")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sequence", help="maximal chain from man- to woman-optimal")
    s.add_argument("file")
    s.set_defaults(func=cmd_sequence)

    s = sub.add_parser("rotations", help="rotations and their precedence")
    s.add_argument("file")
    s.set_defaults(func=cmd_rotations)

    s = sub.add_parser("intermediate", help="is there a class strictly between the extremes")
    s.add_argument("file")
    s.set_defaults(func=cmd_intermediate)

    s = sub.add_parser("gen", help="seeded random instance")
    s.add_argument("--men", type=int, required=True)
    s.add_argument("--women", type=int, required=True)
    s.add_argument("--density", type=float, required=True)
    s.add_argument("--ties", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("oracle", help="all strongly stable matchings by exhaustive search")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_oracle)
    return p


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None,
        err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except ValidationError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NoSolution:
        out.write("NONE\n")
        return EXIT_NO_SOLUTION
    except CapExceeded as exc:
        err.write(f"refused: {exc}\n")
        return EXIT_CAP


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
