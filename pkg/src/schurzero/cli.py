"""Command-line front end: ``schurzero <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 parse error or bad flags,
3 operands that parse but do not fit together.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import linalg_fq
from .core import OrbitMatrix, check_composition, orbit_matrices
from .hecke import Permutation, hecke_mult, nbar_compositions, t_sigma, t_sigma_stages, verify_hecke_relations
from .qschur import LOG, AlgebraElement, multiply, verify_relations_q
from .zeroschur import (
    closed_orbit,
    hasse_dot,
    nested_idempotent,
    open_orbit,
    open_orbit_oracle,
    star,
    verify_relations_0,
    word_decompose,
)

LARGE = 4


class UsageError(Exception):
    """Bad flag combination or unparseable operand (exit 2)."""


class Mismatch(Exception):
    """Operands that do not fit together (exit 3)."""


def _matrix(text: str) -> OrbitMatrix:
    try:
        return OrbitMatrix.from_text(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _composition(text: str) -> tuple[int, ...]:
    try:
        return check_composition(int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse composition {text!r}") from exc


def _element(text: str) -> AlgebraElement:
    text = text.strip()
    if text.startswith("{"):
        try:
            return AlgebraElement.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot parse element: {exc}") from exc
    return AlgebraElement.basis(_matrix(text))


def _check_size(n: int | None, r: int | None, got_n: int, got_r: int | None) -> None:
    if n is not None and n != got_n:
        raise Mismatch(f"operand has n={got_n}, expected {n}")
    if r is not None and got_r is not None and r != got_r:
        raise Mismatch(f"operand has r={got_r}, expected {r}")


def _guard(args, n: int, r: int) -> None:
    if (n > LARGE or r > LARGE) and not args.allow_large:
        raise UsageError(f"(n, r) = ({n}, {r}) exceeds {LARGE}; pass --allow-large to proceed")
    if args.allow_large:
        linalg_fq.MAX_DIM = max(linalg_fq.MAX_DIM, r)


def cmd_mult(args) -> int:
    if args.algebra == "hecke":
        try:
            x, y = Permutation.parse(args.A, args.n), Permutation.parse(args.B, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if x.n != y.n:
            raise Mismatch(f"permutations of sizes {x.n} and {y.n}")
        _check_size(args.n, None, x.n, None)
        print(hecke_mult(x, y))
        return 0
    if args.algebra == "zero":
        A, B = _matrix(args.A), _matrix(args.B)
        if (A.n, A.r) != (B.n, B.r):
            raise Mismatch(f"operands from ({A.n},{A.r}) and ({B.n},{B.r})")
        _check_size(args.n, args.r, A.n, A.r)
        C = star(A, B)
        print("0" if C is None else C.to_text())
        return 0
    x, y = _element(args.A), _element(args.B)
    if (x.n, x.r) != (y.n, y.r):
        raise Mismatch(f"operands from ({x.n},{x.r}) and ({y.n},{y.r})")
    _check_size(args.n, args.r, x.n, x.r)
    _guard(args, x.n, x.r)
    print(multiply(x, y).dumps())
    return 0


def cmd_decompose(args) -> int:
    word = word_decompose(_matrix(args.A))
    print(word.dumps() if args.json else str(word))
    return 0


def cmd_deg_order(args) -> int:
    d, e = _composition(args.d), _composition(args.e)
    if len(d) != len(e) or sum(d) != sum(e):
        raise Mismatch(f"types {d} and {e} do not match")
    _check_size(args.n, args.r, len(d), sum(d))
    sys.stdout.write(hasse_dot(d, e))
    return 0


def cmd_orbit(args) -> int:
    d, e = _composition(args.d), _composition(args.e)
    if len(d) != len(e) or sum(d) != sum(e):
        raise Mismatch(f"types {d} and {e} do not match")
    build = open_orbit if args.command == "open-orbit" else closed_orbit
    print(build(d, e).to_text())
    return 0


def cmd_idempotents(args) -> int:
    d = _composition(args.d)
    choices = [_composition(args.nbar)] if args.nbar else nbar_compositions(len(d))
    for nbar in choices:
        try:
            o = nested_idempotent(d, nbar)
        except ValueError as exc:
            raise Mismatch(str(exc)) from exc
        print(f"{','.join(map(str, nbar))}\t{o.to_text()}")
    return 0


def cmd_hecke_tsigma(args) -> int:
    try:
        sigma = Permutation.parse(args.sigma, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for k, stage in enumerate(t_sigma_stages(sigma), start=1):
        print(f"stage {k}\t{stage}")
    result = t_sigma(sigma)
    print(f"t^sigma\t{result}\t{result.to_matrix().to_text()}")
    return 0 if result == sigma else 1


def _verify_oracle(n: int, r: int) -> list[str]:
    failures = []
    for A in orbit_matrices(n, r):
        for B in orbit_matrices(n, r):
            if A.col_type != B.row_type:
                continue
            got, want = star(A, B), open_orbit_oracle(A, B)
            if got != want:
                failures.append(f"star({A}, {B}) = {got}, oracle gives {want}")
    return failures


def cmd_verify(args) -> int:
    n, r = args.n, args.r
    if args.suite == "hecke":
        if n is None:
            raise UsageError("--suite hecke needs --n")
        _guard(args, n, 0)
        rep = verify_hecke_relations(n)
        failures, checked = rep.failures, rep.checked
    else:
        if n is None or r is None:
            raise UsageError(f"--suite {args.suite} needs --n and --r")
        if args.suite == "zero-relations":
            rep = verify_relations_0(n, r)
            failures, checked = [f"{lbl}: {res}" for lbl, res in rep.failures], rep.checked
        elif args.suite == "q-relations":
            _guard(args, n, r)
            rep = verify_relations_q(n, r)
            failures, checked = [f"{lbl}: {res}" for lbl, res in rep.failures], rep.checked
        else:
            _guard(args, n, r)
            failures = _verify_oracle(n, r)
            checked = sum(1 for A in orbit_matrices(n, r) for B in orbit_matrices(n, r)
                          if A.col_type == B.row_type)
    for line in failures:
        print(line)
    status = "FAIL" if failures else "PASS"
    print(f"{status} {args.suite}: {checked} checked, {len(failures)} failed")
    if LOG.fits:
        print(f"interpolations: {LOG.fits} fitted, {LOG.held_out} held-out checks")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurzero", description="q-Schur, 0-Schur and 0-Hecke algebra calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    def sized(p, need=False):
        p.add_argument("--n", type=int, required=need)
        p.add_argument("--r", type=int)
        p.add_argument("--allow-large", action="store_true", help="lift the n, r <= 4 guard on counting-based commands")

    p = sub.add_parser("mult", help="multiply two basis elements or elements")
    p.add_argument("--algebra", choices=["qschur", "zero", "hecke"], default="qschur")
    sized(p)
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("decompose", help="generator word of an orbit matrix")
    p.add_argument("A")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("deg-order", help="Hasse diagram (DOT) of the degeneration order on a block")
    sized(p)
    p.add_argument("--d", required=True)
    p.add_argument("--e", required=True)
    p.set_defaults(func=cmd_deg_order)

    for name in ("open-orbit", "closed-orbit"):
        p = sub.add_parser(name, help=f"{name.split('-')[0]} orbit of a type block")
        p.add_argument("d")
        p.add_argument("e")
        p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("idempotents", help="nested open-orbit idempotents of a vertex")
    p.add_argument("--d", required=True)
    p.add_argument("--nbar")
    p.set_defaults(func=cmd_idempotents)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=["q-relations", "zero-relations", "hecke", "oracle"], required=True)
    sized(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hecke-tsigma", help="staged construction of t^sigma")
    p.add_argument("sigma")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_hecke_tsigma)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Mismatch, linalg_fq.ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
