"""Command line front end: ``python -m ncbv.cli <command> ...``.

Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import bv_integration as bv
from .cyclic_words import odd_line_space, odd_power_potential, parse_lambda, qme_residual, render_lambda, xi_line_space
from .frobenius import (
    ContractibilityError,
    DgFrobeniusAlgebra,
    check_otft_identities,
    hodge_for,
    matrix_algebra,
    tensor_algebras,
    validate,
    xi_algebra,
)
from .graded_linear import EVEN, ODD, SYMMETRIC, BilinearForm, GradedBasis
from .series import TruncatedHSeries

EXIT_OK, EXIT_MATH, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

# matrix mode refuses Lagrangians with more coordinates than this
MAX_MATRIX_COORDS = 36


class UsageError(Exception):
    pass


class ConfigError(UsageError):
    def __init__(self, path, line, col, msg):
        super().__init__("%s:%d:%d: %s" % (path, line, col, msg))
        self.line, self.col = line, col


# ---------------------------------------------------------------------------
# algebra configs
#
#   basis 1:even a:odd
#   unit 1
#   form odd
#   mult a a 1 1        a*a += 1 * 1
#   diff a 1 1          d(a) += 1 * 1
#   pair a 1 1          <a, 1> = 1
#   pair 1 a 1

_PARITY = {"even": EVEN, "0": EVEN, "odd": ODD, "1": ODD}


def parse_algebra_config(text: str, path: str = "<config>") -> DgFrobeniusAlgebra:
    names: List[str] = []
    pars: List[int] = []
    unit = form_parity = None
    mult: Dict = {}
    diff: Dict = {}
    pair: Dict = {}
    seen_basis = False

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        (col, key), args = toks[0], toks[1:]

        def err(msg, c=col):
            raise ConfigError(path, ln, c, msg)

        def index(tok):
            c, name = tok
            if name not in names:
                err("unknown basis element %r" % name, c)
            return names.index(name)

        def rational(tok):
            c, s = tok
            try:
                return Fraction(s)
            except (ValueError, ZeroDivisionError):
                err("bad rational %r" % s, c)

        if key == "basis":
            if seen_basis:
                err("basis declared twice")
            seen_basis = True
            if not args:
                err("empty basis")
            for c, item in args:
                name, sep, p = item.rpartition(":")
                if not sep or p not in _PARITY or not name:
                    err("basis entries look like name:even or name:odd", c)
                if name in names:
                    err("duplicate basis element %r" % name, c)
                names.append(name)
                pars.append(_PARITY[p])
            continue
        if not seen_basis:
            err("the basis line must come first")
        if key == "unit":
            if len(args) != 1:
                err("unit takes one basis element")
            unit = index(args[0])
        elif key == "form":
            if len(args) != 1 or args[0][1] not in _PARITY:
                err("form takes even or odd")
            form_parity = _PARITY[args[0][1]]
        elif key == "mult":
            if len(args) != 4:
                err("mult takes: left right result coefficient")
            i, j, k, c = index(args[0]), index(args[1]), index(args[2]), rational(args[3])
            slot = mult.setdefault((i, j), {})
            slot[k] = slot.get(k, 0) + c
        elif key == "diff":
            if len(args) != 3:
                err("diff takes: source result coefficient")
            i, k, c = index(args[0]), index(args[1]), rational(args[2])
            slot = diff.setdefault(i, {})
            slot[k] = slot.get(k, 0) + c
        elif key == "pair":
            if len(args) != 3:
                err("pair takes: left right value")
            pair[index(args[0]), index(args[1])] = rational(args[2])
        else:
            err("unknown directive %r" % key)

    if not seen_basis:
        raise ConfigError(path, 1, 1, "missing basis line")
    if unit is None:
        raise ConfigError(path, 1, 1, "missing unit line")
    if form_parity is None:
        raise ConfigError(path, 1, 1, "missing form line")
    basis = GradedBasis(tuple(names), tuple(pars))
    try:
        form = BilinearForm(basis, pair, form_parity, SYMMETRIC)
        return DgFrobeniusAlgebra(basis, mult, unit, diff, form, name=os.path.basename(path))
    except ValueError as e:
        raise ConfigError(path, 1, 1, str(e)) from None


def _tokens(line: str):
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def algebra_to_config(A: DgFrobeniusAlgebra) -> str:
    """Inverse of ``parse_algebra_config``; records the basis order."""
    nm = A.basis.names
    lines = ["basis " + " ".join("%s:%s" % (n, "odd" if p else "even") for n, p in zip(nm, A.basis.parities)),
             "unit %s" % nm[A.unit],
             "form %s" % ("odd" if A.form_parity else "even")]
    for (i, j), v in sorted(A.mult.items()):
        lines += ["mult %s %s %s %s" % (nm[i], nm[j], nm[k], c) for k, c in sorted(v.items())]
    for i, v in sorted(A.diff.items()):
        lines += ["diff %s %s %s" % (nm[i], nm[k], c) for k, c in sorted(v.items())]
    for (i, j), c in sorted(A.form.matrix.items()):
        lines.append("pair %s %s %s" % (nm[i], nm[j], c))
    return "\n".join(lines) + "\n"


def resolve_algebra(spec: str) -> DgFrobeniusAlgebra:
    """``xi``, ``matrix:n``, ``tensor:X,Y,...`` or a config file path."""
    if spec == "xi":
        return xi_algebra()
    if spec.startswith("matrix:"):
        try:
            n = int(spec[7:])
        except ValueError:
            raise UsageError("bad matrix size in %r" % spec) from None
        if n < 1:
            raise UsageError("matrix size must be at least 1")
        return matrix_algebra(n)
    if spec.startswith("tensor:"):
        parts = _split_tensor(spec[7:])
        if len(parts) < 2:
            raise UsageError("tensor needs at least two factors")
        A = resolve_algebra(parts[0])
        for p in parts[1:]:
            A = tensor_algebras(A, resolve_algebra(p))
        return A
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_algebra_config(fh.read(), spec)
    raise UsageError("unknown algebra %r" % spec)


def _split_tensor(s: str) -> List[str]:
    # factors are separated by commas; a nested tensor must come last
    parts = []
    while s:
        if s.startswith("tensor:"):
            parts.append(s)
            break
        head, _, s = s.partition(",")
        parts.append(head)
    return parts


def parse_coeffs(text: Optional[str]) -> List[Tuple[int, Fraction]]:
    """``"1=-1,2=1"`` to ``[(1, -1), (2, 1)]``."""
    out: Dict[int, Fraction] = {}
    if not text or not text.strip():
        return []
    for item in text.split(","):
        k, sep, v = item.partition("=")
        try:
            i = int(k)
            c = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError("coefficients look like 1=-1,2=3/2; got %r" % item) from None
        if not sep:
            raise UsageError("coefficients look like 1=-1,2=3/2; got %r" % item)
        if i < 1:
            raise UsageError("coefficient indices start at 1")
        out[i] = out.get(i, 0) + c
    return sorted(out.items())


# ---------------------------------------------------------------------------
# commands


def _emit(series: TruncatedHSeries, output: str, out):
    out.write(series.machine() if output == "machine" else series.render() + "\n")


def cmd_validate(args, out) -> int:
    A = resolve_algebra(args.algebra)
    rep = validate(A)
    out.write("algebra %s, dimension %d, %s form\n" % (A.name, A.dim, "odd" if A.form_parity else "even"))
    for line in rep.lines():
        out.write(line + "\n")
    if rep.ok:
        try:
            hodge_for(A)
            out.write("contractible     yes\n")
        except ContractibilityError as e:
            out.write("contractible     no (%s)\n" % e)
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_pair(args, out) -> int:
    A = resolve_algebra(args.algebra)
    x = odd_power_potential(xi_line_space(), dict(parse_coeffs(args.coeffs)))
    try:
        q = bv.pairing_series(x, A, args.order, convention=args.propagator, weight=args.weight)
    except bv.TruncationError as e:
        out.write("truncation bound: %s (required weight %d)\n" % (e, bv.required_weight(args.order)))
        return EXIT_BOUND
    except ContractibilityError as e:
        out.write("algebra is not contractible: %s\n" % e)
        return EXIT_MATH
    except bv.ParityMismatchError as e:
        raise UsageError("%s; the potential lives on an odd line, so the algebra needs an odd form" % e) from None
    _emit(q, args.output, out)
    return EXIT_OK


def cmd_qme_check(args, out) -> int:
    if args.element is not None:
        S = odd_line_space(args.letters)
        try:
            x = parse_lambda(S, args.element)
        except ValueError as e:
            raise UsageError(str(e)) from None
    else:
        x = odd_power_potential(xi_line_space(), dict(parse_coeffs(args.coeffs)))
    try:
        r = qme_residual(x, args.weight)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out.write("residual to weight %d: %s\n" % (args.weight, render_lambda(r)))
    return EXIT_MATH if r else EXIT_OK


def cmd_identities(args, out) -> int:
    A = resolve_algebra(args.algebra)
    rep = check_otft_identities(A, trial_count=args.trials, rng_seed=args.seed)
    out.write("algebra %s\n" % A.name)
    for line in rep.lines():
        out.write(line + "\n")
    return EXIT_OK if rep.ok else EXIT_MATH


def nontriviality(max_order: int, convention: str = bv.PAPER):
    """Choose ``a_i`` one at a time so the pairing series has no zero coefficient.

    Returns ``(coefficients, steps, series)``; each step is
    ``(i, examined h^i coefficient, chosen a_i)``.
    """
    coeffs: Dict[int, Fraction] = {}
    steps = []
    S = xi_line_space()
    A = xi_algebra()
    z = TruncatedHSeries.zero(max_order)
    for i in range(1, max_order + 1):
        seen = z[i]
        a = Fraction((-1) ** i) if seen == 0 else Fraction(0)
        if a:
            coeffs[i] = a
            z = bv.pairing_series(odd_power_potential(S, coeffs), A, max_order, convention=convention)
        steps.append((i, seen, a))
    return coeffs, steps, z


def cmd_nontriviality(args, out) -> int:
    if args.max_order < 0:
        raise UsageError("max order must be nonnegative")
    coeffs, steps, z = nontriviality(args.max_order, args.propagator)
    for i, seen, a in steps:
        out.write("step %d: coefficient of h^%d in z_%d is %s, so a_%d = %s\n" % (i, i, i - 1, seen, i, a))
    out.write("coefficients: %s\n" % (",".join("%d=%s" % kv for kv in sorted(coeffs.items())) or "none"))
    _emit(z, args.output, out)
    return EXIT_OK if all(z[k] for k in range(1, args.max_order + 1)) else EXIT_MATH


def cmd_matrix(args, out) -> int:
    if args.n < 1:
        raise UsageError("matrix size must be at least 1")
    if args.n * args.n > args.max_coords:
        out.write("resource bound: M_%d has %d Lagrangian coordinates, limit %d (raise --max-coords)\n"
                  % (args.n, args.n * args.n, args.max_coords))
        return EXIT_BOUND
    q = bv.matrix_pairing_series(args.n, dict(parse_coeffs(args.coeffs)), args.order, args.propagator)
    _emit(q, args.output, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncbv", description="Pairings of BV cocycles with cyclic-word classes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("--algebra", default="xi", help="xi, matrix:n, tensor:X,Y or a config file")
        sp.add_argument("--output", choices=("table", "machine"), default="table")
        sp.add_argument("--propagator", choices=(bv.PAPER, bv.LITERAL), default=bv.PAPER)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("validate", help="check the Frobenius axioms and contractibility")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("pair", help="pairing series of sum a_i t^(2i+1)")
    common(sp)
    sp.add_argument("--coeffs", default="")
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--weight", type=int, default=None, help="weight to which the potential is known")
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("qme-check", help="quantum master equation residual")
    common(sp, algebra=False)
    sp.add_argument("--coeffs", default="")
    sp.add_argument("--element", default=None, help="element in word syntax, e.g. w[t1,t2,t1,t2]")
    sp.add_argument("--letters", type=int, default=1, help="number of odd letters t1..tn for --element")
    sp.add_argument("--weight", type=int, default=10)
    sp.set_defaults(func=cmd_qme_check)

    sp = sub.add_parser("identities", help="open TFT identity suite")
    common(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("nontriviality", help="inductive choice of coefficients")
    common(sp, algebra=False)
    sp.add_argument("--max-order", type=int, default=2)
    sp.set_defaults(func=cmd_nontriviality)

    sp = sub.add_parser("matrix", help="pairing series over M_n tensor xi")
    common(sp, algebra=False)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--coeffs", default="1=-1")
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--max-coords", type=int, default=MAX_MATRIX_COORDS)
    sp.set_defaults(func=cmd_matrix)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if getattr(args, "order", 0) < 0:
        err.write("error: order must be nonnegative\n")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as e:
        err.write("error: %s\n" % e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
