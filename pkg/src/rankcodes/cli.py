"""Command-line surface.

Reports go to stdout, diagnostics to stderr.  Exit codes: 0 on success,
1 on validation errors (bad flags, malformed files, violated
preconditions), 2 on enumeration budget overruns.  Every randomized
subcommand requires an explicit --seed, and identical invocations with
identical seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import codes, equivalence, grw, wiretap
from .errors import BudgetError, CodeFileError, HypothesisError
from .field import FieldTower
from .rankmetric import GaloisClosedSpace
from .linalg import DEFAULT_BUDGET


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map flags errors to 1
        raise _CliError(message)


def _tower(args) -> FieldTower:
    modulus = None
    if getattr(args, "modulus", None):
        modulus = [int(tok) for tok in args.modulus.split(",")]
    return FieldTower(args.p, args.m, modulus)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_code(args):
    return codes.parse_code_file(_read(args.input))


def _load_reduction(args) -> codes.Reduction:
    obj = _load_code(args)
    if not isinstance(obj, codes.Reduction):
        raise _CliError(f"{args.input} does not declare blocks; this command needs a reduction")
    return obj


def _plain(obj) -> codes.LinearCode:
    return obj.code() if isinstance(obj, codes.Reduction) else obj


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def build_parser() -> _Parser:
    ap = _Parser(prog="rankcodes", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_field_args(p, n=True, k=True):
        p.add_argument("--p", type=int, required=True, help="prime base field size")
        p.add_argument("--m", type=int, required=True, help="extension degree")
        if n:
            p.add_argument("--n", type=int, required=True, help="code length")
        if k:
            p.add_argument("--k", type=int, required=True, help="code dimension")
        p.add_argument("--modulus", help="override modulus, m+1 comma-separated digits")

    def add_out(p):
        p.add_argument("-o", "--output", default="-", help="output path (default stdout)")

    def add_budget(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="enumeration budget (subspace count)")

    con = sub.add_parser("construct", help="emit code files").add_subparsers(
        dest="what", required=True)

    p = con.add_parser("gabidulin")
    add_field_args(p)
    p.add_argument("--points", help="space-separated evaluation points in scalar syntax")
    add_out(p)

    p = con.add_parser("cartesian")
    p.add_argument("--inputs", nargs="+", required=True, help="factor code files")
    add_out(p)

    p = con.add_parser("reducible")
    p.add_argument("--inputs", nargs="+", required=True, help="main component code files")
    p.add_argument("--seed", type=int, help="seed for random off-diagonal blocks")
    p.add_argument("--fill", choices=["random", "zero"], default="random")
    add_out(p)

    p = con.add_parser("mrd-plan")
    add_field_args(p)

    p = con.add_parser("mrd-build")
    add_field_args(p)
    p.add_argument("--seed", type=int, required=True)
    add_out(p)

    p = con.add_parser("opt")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--modulus")
    add_out(p)

    p = con.add_parser("plotkin")
    p.add_argument("--input1", required=True)
    p.add_argument("--input2", required=True)
    p.add_argument("--mode", choices=["uv", "alpha", "frobenius"], required=True)
    p.add_argument("--alpha", help="scalar for mode alpha, in scalar syntax")
    p.add_argument("--power", type=int, help="Frobenius power for mode frobenius")
    add_out(p)

    p = con.add_parser("transposed-gab")
    add_field_args(p)
    add_budget(p)
    p.add_argument("--list", action="store_true", help="also list the codeword matrices")

    g = sub.add_parser("grw", help="weight tables and bounds").add_subparsers(
        dest="what", required=True)
    p = g.add_parser("exact")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["auto", "subcodes", "closed"], default="auto")
    add_budget(p)
    p = g.add_parser("bounds")
    p.add_argument("--input", required=True)
    add_budget(p)
    p = g.add_parser("estimates")
    add_field_args(p)

    c = sub.add_parser("check", help="MRD / degeneracy / product checks").add_subparsers(
        dest="what", required=True)
    for name in ("mrd", "degenerate", "product", "mrd-rank"):
        p = c.add_parser(name)
        p.add_argument("--input", required=True)
        add_budget(p)

    p = sub.add_parser("dual")
    p.add_argument("--input", required=True)
    add_out(p)

    e = sub.add_parser("equiv", help="rank equivalence constructions").add_subparsers(
        dest="what", required=True)
    p = e.add_parser("to-opt")
    p.add_argument("--input", required=True)
    add_budget(p)
    p = e.add_parser("product-test")
    p.add_argument("--input", required=True)
    add_budget(p)

    w = sub.add_parser("wiretap", help="leakage computations").add_subparsers(
        dest="what", required=True)
    p = w.add_parser("leak")
    p.add_argument("--input", required=True)
    p.add_argument("--wiretap", required=True)
    p.add_argument("--no-table", action="store_true",
                   help="skip the worst-case interpretation (no weight table)")
    add_budget(p)
    p = w.add_parser("empirical")
    p.add_argument("--input", required=True)
    p.add_argument("--wiretap", required=True)
    p.add_argument("--budget", type=int, default=wiretap.JOINT_BUDGET)
    p = w.add_parser("certify")
    p.add_argument("--input", required=True)
    p.add_argument("--wiretap", required=True)
    add_budget(p)

    r = sub.add_parser("reduce", help="reduction rewrites").add_subparsers(
        dest="what", required=True)
    p = r.add_parser("exact-d1")
    p.add_argument("--input", required=True)
    add_budget(p)
    add_out(p)
    p = r.add_parser("transform")
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=int, required=True)
    add_out(p)

    return ap


def _cmd_construct(args) -> int:
    what = args.what
    if what == "gabidulin":
        tower = _tower(args)
        points = None
        if args.points:
            points = [tower.parse_scalar(tok) for tok in args.points.split()]
        code = codes.gabidulin(tower, args.n, args.k, points)
        _emit(args, codes.format_code_file(code))
    elif what == "cartesian":
        factors = [_plain(codes.parse_code_file(_read(path))) for path in args.inputs]
        _emit(args, codes.format_code_file(codes.cartesian(factors)))
    elif what == "reducible":
        mains = [_plain(codes.parse_code_file(_read(path))) for path in args.inputs]
        if args.fill == "random" and args.seed is None:
            raise _CliError("--seed is required for random fill")
        R = codes.reducible(mains, seed=args.seed, fill=args.fill)
        _emit(args, codes.format_code_file(R))
    elif what == "mrd-plan":
        plan = codes.mrd_plan(_tower(args), args.n, args.k)
        _print(plan.lines())
    elif what == "mrd-build":
        tower = _tower(args)
        plan = codes.mrd_plan(tower, args.n, args.k)
        R = codes.build_mrd_reducible(tower, plan, args.seed)
        _emit(args, codes.format_code_file(R))
    elif what == "opt":
        tower = _tower(args)
        _emit(args, codes.format_code_file(codes.build_c_opt(tower, args.k)))
    elif what == "plotkin":
        c1 = _plain(codes.parse_code_file(_read(args.input1)))
        c2 = _plain(codes.parse_code_file(_read(args.input2)))
        alpha = c1.tower.parse_scalar(args.alpha) if args.alpha else None
        R = codes.plotkin_variant(c1, c2, args.mode, alpha=alpha, frob_power=args.power)
        _emit(args, codes.format_code_file(R))
    elif what == "transposed-gab":
        tower = _tower(args)
        tg = codes.transposed_gabidulin(tower, args.n, args.k)
        print(f"transposed-gab q={tower.p} n={args.n} m={tower.m} k={args.k} "
              f"size={tg.size} min_rank_distance={tg.min_rank_distance}")
        if args.list:
            for M in tg.matrices(args.budget):
                print("matrix " + " ".join(
                    ",".join(str(x) for x in row) for row in M))
    return 0


def _cmd_grw(args) -> int:
    if args.what == "exact":
        code = _plain(_load_code(args))
        report = grw.grw_report_exact(code, args.budget, args.method)
        _print(report.lines())
    elif args.what == "bounds":
        R = _load_reduction(args)
        report = grw.grw_bounds_reducible(R, args.budget)
        _print(report.lines())
    elif args.what == "estimates":
        tower = _tower(args)
        plan = codes.mrd_plan(tower, args.n, args.k)
        table = grw.grw_estimates_mrd(plan)
        for r, v in enumerate(table, start=1):
            print(f"r={r} lower={v} upper=- exact=- method=thm-estimates")
        print(f"case={plan.case} verdict={plan.verdict}")
    return 0


def _cmd_check(args) -> int:
    obj = _load_code(args)
    code = _plain(obj)
    if args.what == "mrd":
        table, _ = grw.grw_table_exact(code, args.budget)
        mrd, defect = grw.singleton_check(code.tower.m, code.n, code.k, table[0], table[0])
        print(f"mrd={'true' if mrd else 'false'} defect={defect}")
    elif args.what == "degenerate":
        print(f"degenerate={'true' if grw.is_degenerate(code) else 'false'}")
    elif args.what == "product":
        if not isinstance(obj, codes.Reduction):
            raise _CliError("check product needs a reduction (blocks line)")
        print(f"product={'true' if equivalence.exact_product_test(obj) else 'false'}")
    elif args.what == "mrd-rank":
        print(f"mrd_rank={grw.mrd_rank(code, args.budget)}")
    return 0


def _cmd_dual(args) -> int:
    obj = _load_code(args)
    _emit(args, codes.format_code_file(_plain(obj).dual()))
    return 0


def _cmd_equiv(args) -> int:
    obj = _load_code(args)
    if args.what == "to-opt":
        result = equivalence.to_c_opt(_plain(obj), args.budget)
        _print(result.lines())
    elif args.what == "product-test":
        if not isinstance(obj, codes.Reduction):
            raise _CliError("equiv product-test needs a reduction (blocks line)")
        parts = [obj.row_component(i) for i in range(obj.l) if obj.dims[i]]
        result = equivalence.product_characterization(parts, args.budget)
        print(f"equivalent_to_product={'true' if result.equivalent else 'false'} "
              f"deficiency={result.deficiency}")
        if result.witness is not None:
            _print(result.witness.lines())
    return 0


def _cmd_wiretap(args) -> int:
    obj = _load_code(args)
    code = _plain(obj)
    B = wiretap.parse_wiretap_file(code.tower, _read(args.wiretap), code.n)
    if args.what == "leak":
        table = None
        if not args.no_table:
            table, _ = grw.grw_table_exact(code, args.budget)
        report = wiretap.leakage_exact(code, B, table)
        _print(report.lines())
    elif args.what == "empirical":
        value = wiretap.leakage_joint_enumeration(code, B, args.budget)
        exact = wiretap.leakage_exact(code, B).leakage
        print(f"mu={len(B)} empirical={value} exact={exact} agree=true")
    elif args.what == "certify":
        if not isinstance(obj, codes.Reduction):
            raise _CliError("wiretap certify needs a reduction (blocks line)")
        V = GaloisClosedSpace.from_fq_rows(code.tower, B, code.n)
        search = wiretap.composition_search(obj, V, budget=args.budget)
        exact = wiretap.leakage_exact(code, B).leakage
        if not search.applicable:
            print(f"applicable=false exact={exact}")
        else:
            comp = ",".join(str(r) for r in search.composition)
            print(f"applicable=true bound={search.bound} composition={comp} exact={exact}")
    return 0


def _cmd_reduce(args) -> int:
    R = _load_reduction(args)
    if args.what == "exact-d1":
        out = codes.exact_reduction_for_d1(R, args.budget)
    else:
        A = codes.random_block_transform(R, args.seed)
        out = codes.transform_reduction(R, A)
    _emit(args, codes.format_code_file(out))
    return 0


_HANDLERS = {
    "construct": _cmd_construct,
    "grw": _cmd_grw,
    "check": _cmd_check,
    "dual": _cmd_dual,
    "equiv": _cmd_equiv,
    "wiretap": _cmd_wiretap,
    "reduce": _cmd_reduce,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CodeFileError, HypothesisError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
