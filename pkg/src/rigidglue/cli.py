"""Command line interface.

Exit codes: 0 certified yes / success, 1 certified or probably no,
2 inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import serialize
from .certify import (
    Certificate,
    certify_generic_global_rigidity,
    certify_global_rigidity_2d_combinatorial,
    check_super_stability,
    replay,
)
from .combine import SharedVertexMap, combine_erase_bar, superimpose_tensegrities
from .generators import EXAMPLES
from .linalg import NumericTolerance
from .model import Framework, RigidityError, Stress
from .pebble import pebble_game_rigid_2d
from .svg import SvgOptions, export_svg

EXIT_OK, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _load(path: str) -> tuple[Framework, Stress | None]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    try:
        return serialize.parse_framework(text)
    except RigidityError as e:
        raise RigidityError(f"{path}: {e}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tolerance(args) -> NumericTolerance:
    return NumericTolerance(args.tol, args.psd_slack)


def cmd_certify(args) -> int:
    t = _tolerance(args)

    def one(path: str) -> Certificate:
        f, _ = _load(path)
        if f.d != args.dim:
            raise RigidityError(f"{path}: file dimension {f.d} does not match --dim {args.dim}")
        return certify_generic_global_rigidity(f.graph, args.dim, args.trials, args.seed, t)

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        certs = list(pool.map(one, args.files))
    docs = [serialize.certificate_to_dict(c) for c in certs]
    _emit(json.dumps(docs[0] if len(docs) == 1 else docs, indent=1) + "\n", args.out)
    for path, c in zip(args.files, certs):
        print(f"{path}: {c.verdict.value} ({c.reason})", file=sys.stderr)
    return max(c.verdict.exit_code for c in certs)


def cmd_certify2d(args) -> int:
    f, _ = _load(args.file)
    cert = certify_global_rigidity_2d_combinatorial(f.graph)
    _emit(serialize.write_certificate(cert), args.out)
    print(f"{args.file}: {cert.verdict.value} ({cert.reason})", file=sys.stderr)
    return cert.verdict.exit_code


def cmd_superstable(args) -> int:
    f, w = _load(args.file)
    if w is None:
        raise RigidityError(f"{args.file}: every member needs a 'stress' value")
    cert = check_super_stability(f, w, _tolerance(args))
    _emit(serialize.write_certificate(cert), args.out)
    print(f"{args.file}: {cert.verdict.value} ({cert.reason})", file=sys.stderr)
    return cert.verdict.exit_code


def cmd_combine(args) -> int:
    f1, _ = _load(args.first)
    f2, _ = _load(args.second)
    shared = SharedVertexMap.parse(args.shared, f1.n, f2.n)
    t = _tolerance(args)
    result = combine_erase_bar(f1, f2, shared, tuple(args.erase_bar), args.seed, t, args.trials)
    cert = certify_generic_global_rigidity(result.framework.graph, result.framework.d, args.trials, args.seed, t)
    doc = {
        "format": serialize.FORMAT_VERSION,
        "framework": serialize.framework_to_dict(result.framework, result.witness),
        "erased": list(result.erased),
        "witness_rank": result.witness_rank,
        "expected_rank": result.expected_rank,
        "fallback": result.fallback,
        "inconclusive": result.inconclusive,
        "reason": result.reason,
        "certificate": serialize.certificate_to_dict(cert),
    }
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    print(f"combine: {result.reason}; re-certification {cert.verdict.value}", file=sys.stderr)
    if result.inconclusive:
        return EXIT_INCONCLUSIVE
    return cert.verdict.exit_code


def cmd_superimpose(args) -> int:
    t1, w1 = _load(args.first)
    t2, w2 = _load(args.second)
    if w1 is None or w2 is None:
        raise RigidityError("both tensegrity files need a 'stress' value on every member")
    shared = SharedVertexMap.parse(args.shared, t1.n, t2.n)
    t = _tolerance(args)
    f, w = superimpose_tensegrities(t1, w1, t2, w2, shared, tuple(args.cancel), t)
    cert = check_super_stability(f, w, t)
    _emit(serialize.write_framework(f, w), args.out)
    print(f"superimpose: result {cert.verdict.value} ({cert.reason})", file=sys.stderr)
    return cert.verdict.exit_code


def cmd_pebble(args) -> int:
    f, _ = _load(args.file)
    rigid = pebble_game_rigid_2d(f.graph)
    print("rigid" if rigid else "flexible")
    return EXIT_OK if rigid else EXIT_NO


def cmd_generate(args) -> int:
    if args.name == "list":
        for name, build in EXAMPLES.items():
            print(f"{name}: {build().note}")
        return EXIT_OK
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; try 'generate list'")
    ex = EXAMPLES[args.name]()
    if args.partner:
        if ex.partner is None:
            raise UsageError(f"example {args.name!r} has no partner framework")
        text = serialize.write_framework(ex.partner, ex.partner_stress)
    else:
        text = serialize.write_framework(ex.framework, ex.stress)
    _emit(text, args.out)
    if ex.shared:
        print("shared: " + ",".join(f"{a}:{b}" for a, b in ex.shared), file=sys.stderr)
    return EXIT_OK


def cmd_export_svg(args) -> int:
    f, _ = _load(args.file)
    export_svg(f, args.out, SvgOptions(size=args.size, labels=not args.no_labels))
    return EXIT_OK


def cmd_verify_certificate(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{args.file}: {e.strerror}") from None
    cert = serialize.parse_certificate(text)
    again = replay(cert)
    same = again.verdict is cert.verdict
    print(f"recorded {cert.verdict.value}, replayed {again.verdict.value}: {'match' if same else 'MISMATCH'}")
    return EXIT_OK if same else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigidglue", description="Rigidity certificates and globally rigid gluing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def numeric(sp, seed=True):
        sp.add_argument("--tol", type=float, default=1e-10, help="relative singular value cutoff for ranks")
        sp.add_argument("--psd-slack", type=float, default=1e-9)
        if seed:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--trials", type=int, default=8)

    sp = sub.add_parser("certify", help="generic global rigidity by stress rank")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--out")
    numeric(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("certify2d", help="planar global rigidity from redundant rigidity and 3-connectivity")
    sp.add_argument("file")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_certify2d)

    sp = sub.add_parser("superstable", help="check super stability of a stressed tensegrity")
    sp.add_argument("file")
    sp.add_argument("-o", "--out")
    numeric(sp, seed=False)
    sp.set_defaults(func=cmd_superstable)

    sp = sub.add_parser("combine", help="glue two frameworks on d+1 vertices and erase a common bar")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--shared", required=True, help="'a:b,a:b,...' vertex pairs (first:second)")
    sp.add_argument("--erase-bar", nargs=2, type=int, required=True, metavar=("I", "J"),
                    help="bar to erase, in the first framework's labels")
    sp.add_argument("-o", "--out")
    numeric(sp)
    sp.set_defaults(func=cmd_combine)

    sp = sub.add_parser("superimpose", help="superimpose two super-stable tensegrities")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--shared", required=True)
    sp.add_argument("--cancel", nargs=2, type=int, required=True, metavar=("I", "J"))
    sp.add_argument("-o", "--out")
    numeric(sp, seed=False)
    sp.set_defaults(func=cmd_superimpose)

    sp = sub.add_parser("pebble", help="(2,3) pebble game: generic rigidity in the plane")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_pebble)

    sp = sub.add_parser("generate", help="write a named example framework ('list' to enumerate)")
    sp.add_argument("name")
    sp.add_argument("--partner", action="store_true", help="write the second framework of a pair")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("export-svg", help="draw a 2D or 3D framework")
    sp.add_argument("file")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--size", type=float, default=400.0)
    sp.add_argument("--no-labels", action="store_true")
    sp.set_defaults(func=cmd_export_svg)

    sp = sub.add_parser("verify-certificate", help="replay a certificate from its embedded seed and tolerances")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_verify_certificate)
    return p


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT
    except (RigidityError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command())
