"""Command line entry point.

Exit status: 0 success, 1 invalid input, 2 gadget contract violation,
3 verification mismatch.  Errors go to stderr prefixed ``error:``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formula as fm
from .gadgets import FIXTURE_DIR, GadgetError, validate_gadget_dir
from .reduction import build, format_report, stats, verify
from .rotfile import dump_rot, load_rot
from .spins import NAIVE_LIMIT, SpinError, count_satisfying, count_satisfying_naive, energy, load_spins
from .surface import SurfaceError, dual_graph, topology

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT, EXIT_MISMATCH = 0, 1, 2, 3


class _InputError(Exception):
    pass


def _formula(path: str, connect: bool = False) -> fm.PnaeFormula:
    phi = fm.load(path)
    return fm.connectify(phi) if connect else phi


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_reduce(a) -> int:
    C = build(_formula(a.input, a.connectify))
    _write(dump_rot(C.surface), a.output)
    return EXIT_OK


def cmd_count_spins(a) -> int:
    T = load_rot(a.file)
    if a.naive:
        if len(T.vertices) > NAIVE_LIMIT:
            raise _InputError(f"--naive is limited to {NAIVE_LIMIT} vertices, surface has {len(T.vertices)}")
        print(count_satisfying_naive(T))
    else:
        print(count_satisfying(T, threads=a.threads).satisfying_count)
    return EXIT_OK


def cmd_count_nae(a) -> int:
    print(fm.count_nae_witnesses(_formula(a.file)))
    return EXIT_OK


def cmd_verify(a) -> int:
    rep = verify(_formula(a.file), threads=a.threads)
    sys.stdout.write(format_report(rep.as_dict()))
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def _is_formula(path: str) -> bool:
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line and not (line == "c" or line.startswith("c ")):
            return line.startswith("p ")
    return False


def cmd_stats(a) -> int:
    if _is_formula(a.file):
        d = stats(build(_formula(a.file, a.connectify)))
    else:
        if a.connectify:
            raise _InputError("--connectify applies to formula input only")
        top = topology(load_rot(a.file))
        d = {
            "V": top.V,
            "E": top.E,
            "F": top.F,
            "holes": top.holes,
            "chi": top.euler_characteristic,
            "genus": top.genus,
            "components": top.components,
        }
    sys.stdout.write(format_report(d))
    return EXIT_OK


def cmd_validate_gadgets(a) -> int:
    for rep in validate_gadget_dir(a.dir):
        print(rep if a.verbose else str(rep).splitlines()[0])
    return EXIT_OK


def cmd_dual(a) -> int:
    D = dual_graph(load_rot(a.file))
    print(f"# faces {len(D.nodes)} edges {len(D.edges)} cubic {'yes' if D.cubic else 'no'} "
          f"bridgeless {'yes' if D.bridgeless else 'no'}")
    for e, (f, g) in enumerate(D.edges):
        print(e, f, g)
    return EXIT_OK


def cmd_energy(a) -> int:
    print(energy(load_rot(a.file), load_spins(a.spins)))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        self.exit(EXIT_INPUT, f"error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="satspin", description="NAE-3SAT to triangulation reduction and spin counting")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="compile a formula to a .rot triangulation")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--connectify", action="store_true", help="add the connecting clauses first")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("count-spins", help="count satisfying spin assignments of a .rot file")
    s.add_argument("file")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--naive", action="store_true", help=f"plain 2^V enumeration (V <= {NAIVE_LIMIT})")
    s.set_defaults(func=cmd_count_spins)

    s = sub.add_parser("count-nae", help="count NAE witnesses of a formula by brute force")
    s.add_argument("file")
    s.set_defaults(func=cmd_count_nae)

    s = sub.add_parser("verify", help="check both counting identities for a formula")
    s.add_argument("file")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="topology report for a .rot file or a compiled formula")
    s.add_argument("file")
    s.add_argument("--connectify", action="store_true")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("validate-gadgets", help="check gadget fixtures against their contracts")
    s.add_argument("dir", nargs="?", default=str(FIXTURE_DIR))
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_validate_gadgets)

    s = sub.add_parser("dual", help="dual edge list of a closed .rot triangulation")
    s.add_argument("file")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("energy", help="energy of a spin assignment")
    s.add_argument("file")
    s.add_argument("spins")
    s.set_defaults(func=cmd_energy)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        a = make_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(a, "threads", 1) < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return a.func(a)
    except GadgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (SurfaceError, SpinError, fm.FormulaError, _InputError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
