"""Command line front end: ``malcevlab <command> ...``.

Exit status is 0 when every requested check passes, 1 when at least one
fails (witnesses go to stdout) and 2 for unusable input or bad arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import corpus
from .algebra import Algebra, AlgebraError
from .constructions import (CertificationError, PostAlternativeAlgebra, PostMalcevAlgebra, admissible_product,
                            double_bracket, modified_post_malcev, post_alt_from_oop, post_alt_from_rb,
                            post_malcev_from_oop, post_malcev_from_rb, subadjacent_malcev, sum_alternative)
from .identities import CheckReport, IdentityError, check_identity, expand_names
from .operators import (LinearMap, OOperator, OperatorError, TensorElement, check_nijenhuis, check_oop, check_rb,
                        lift_oop_to_tensor, mybe_report, nijenhuis_block, operator_form_residual)
from .reps import (AltBimodule, MalcevRep, check_a_module_malcev, check_alt_bimodule, check_malcev_rep,
                   semidirect_alternative, semidirect_malcev)
from .scalar import ScalarError, parse_open
from .suite import BUILTIN_SUITES, SuiteError, load_config, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

REP_CHECKS = {"malcev_rep": check_malcev_rep, "a_module_malcev": check_a_module_malcev,
              "alt_bimodule": check_alt_bimodule}

DEFAULT_BINDINGS = {PostMalcevAlgebra: {"B": "bracket", "P": "rhd"},
                    PostAlternativeAlgebra: {"L": "tri_left", "R": "tri_right", "D": "tri_dot"}}


class UsageError(ValueError):
    pass


def _pairs(items, what):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise UsageError(f"--{what} expects NAME=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _rationals(items, what="assign"):
    out = {}
    for k, v in _pairs(items, what).items():
        try:
            out[k] = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--{what} {k}: {v!r} is not a rational number") from None
    return out


def _algebra_of(obj, what="input") -> Algebra:
    if isinstance(obj, Algebra):
        return obj
    if isinstance(obj, (PostMalcevAlgebra, PostAlternativeAlgebra)):
        return obj.algebra
    raise UsageError(f"{what} must be an algebra, got {type(obj).__name__}")


def _sole_op(alg: Algebra, op: str | None) -> str:
    if op is not None:
        if op not in alg.ops:
            raise UsageError(f"no operation {op!r}; available: {', '.join(sorted(alg.ops))}")
        return op
    if len(alg.ops) != 1:
        raise UsageError(f"choose --op among {', '.join(sorted(alg.ops))}")
    return next(iter(alg.ops))


def _map_of(obj) -> LinearMap:
    if isinstance(obj, OOperator):
        return obj.T
    if isinstance(obj, LinearMap):
        return obj
    raise UsageError(f"--map must be a map or an operator, got {type(obj).__name__}")


def _emit(args, reports: list[CheckReport], extra: dict | None = None) -> int:
    passed = all(r.passed for r in reports)
    if args.format == "json":
        print(json.dumps({"passed": passed, "reports": [r.to_dict() for r in reports], **(extra or {})}, indent=1))
    else:
        for r in reports:
            print(r.render())
        for k, v in (extra or {}).items():
            print(f"{k}: {v}")
    return EXIT_PASS if passed else EXIT_FAIL


# -- commands ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    obj = corpus.load(args.input)
    assign = _rationals(args.assign)
    raw = [n.strip() for part in args.identity for n in part.split(",") if n.strip()]
    binding = _pairs(args.bind, "bind") or DEFAULT_BINDINGS.get(type(obj))
    reports = []
    for name in raw:
        if name in REP_CHECKS:
            rep = obj.rep if isinstance(obj, OOperator) else obj
            if not isinstance(rep, (MalcevRep, AltBimodule)):
                raise UsageError(f"{name} needs a representation input")
            reports.append(REP_CHECKS[name](rep, args.max_witnesses))
            continue
        for sub in expand_names([name]):
            alg = _algebra_of(obj)
            if assign:
                alg = alg.substitute(assign)
            reports.append(check_identity(alg, sub, binding, args.max_witnesses))
    return _emit(args, reports)


def _operator_input(args):
    obj = corpus.load(args.input)
    if isinstance(obj, OOperator):
        o = obj
        if args.weight is not None:
            o = OOperator(o.rep, o.T, parse_open(args.weight, o.params))
        return o, None
    alg = _algebra_of(obj)
    if args.map is None:
        raise UsageError("an algebra input needs --map")
    R = _map_of(corpus.load(args.map))
    return None, (alg, R)


def cmd_verify_operator(args) -> int:
    o, plain = _operator_input(args)
    assign = _rationals(args.assign)
    if o is not None:
        alg, R = o.rep.base, o.T
        op = args.op or (o.rep.bracket if o.is_malcev else o.rep.mul)
        weight = o.weight
    else:
        alg, R = plain
        op = _sole_op(alg, args.op)
        weight = parse_open(args.weight or "0", alg.params)
    if assign:
        alg, R, weight = alg.substitute(assign), R.substitute(assign), weight.substitute(assign)
        if o is not None:
            from .constructions import _substitute_rep

            o = OOperator(_substitute_rep(o, assign).rep, R, weight)
    if args.kind == "rb":
        return _emit(args, [check_rb(alg, op, R, weight, args.max_witnesses)])
    if args.kind == "oop":
        if o is None:
            raise UsageError("--kind oop needs an operator input")
        return _emit(args, [check_oop(o, args.max_witnesses)])
    if o is not None:
        block, N = nijenhuis_block(o)
        return _emit(args, [check_nijenhuis(block, "bracket", N, args.max_witnesses)])
    return _emit(args, [check_nijenhuis(alg, op, R, args.max_witnesses)])


def cmd_mybe(args) -> int:
    alg = _algebra_of(corpus.load(args.algebra), "--algebra")
    r = corpus.load(args.tensor)
    if not isinstance(r, TensorElement):
        raise UsageError("--tensor must be a tensor file")
    op = _sole_op(alg, args.op)
    reports = [mybe_report(alg, op, r, args.max_witnesses)]
    if args.operator_form:
        reports.append(operator_form_residual(alg, op, r, args.max_witnesses))
    return _emit(args, reports)


def _post_kind(p):
    return "post-Malcev" if isinstance(p, PostMalcevAlgebra) else "post-alternative"


def cmd_build(args) -> int:
    fixed = _rationals(args.fix, "fix") or None
    c = args.construction
    obj = corpus.load(args.input)
    summary = {}
    if c == "semidirect":
        if isinstance(obj, MalcevRep):
            out = semidirect_malcev(obj)
        elif isinstance(obj, AltBimodule):
            out = semidirect_alternative(obj)
        else:
            raise UsageError("semidirect needs a representation input")
    elif c in ("subadjacent", "double", "modified", "admissible"):
        if not isinstance(obj, PostMalcevAlgebra):
            raise UsageError(f"{c} needs a post_malcev input")
        out = {"subadjacent": subadjacent_malcev, "double": double_bracket, "modified": modified_post_malcev,
               "admissible": admissible_product}[c](obj)
    elif c == "sum":
        if not isinstance(obj, PostAlternativeAlgebra):
            raise UsageError("sum needs a post_alternative input")
        out = sum_alternative(obj)
    elif c in ("post-from-rb", "post-from-oop"):
        if c == "post-from-oop" or isinstance(obj, OOperator):
            if not isinstance(obj, OOperator):
                raise UsageError("post-from-oop needs an operator input")
            if args.weight is not None:
                obj = OOperator(obj.rep, obj.T, parse_open(args.weight, obj.params))
            build = post_malcev_from_oop if obj.is_malcev else post_alt_from_oop
            out = build(obj, fixed, args.seed)
        else:
            alg = _algebra_of(obj)
            if args.map is None:
                raise UsageError("post-from-rb needs --map")
            R = _map_of(corpus.load(args.map))
            op = _sole_op(alg, args.op)
            weight = parse_open(args.weight or "0", alg.params)
            build = post_malcev_from_rb if alg.is_skew(op) else post_alt_from_rb
            out = build(alg, R, weight, op, fixed, args.seed)
        summary["certificate"] = out.certificate.describe()
        if isinstance(out, PostMalcevAlgebra):
            subadjacent_malcev(out)
            summary["sub-adjacent"] = "sagle pass"
        else:
            sum_alternative(out)
            summary["sum"] = "alternative pass"
        summary["built"] = _post_kind(out)
    elif c == "lift-tensor":
        if not isinstance(obj, OOperator):
            raise UsageError("lift-tensor needs an operator input")
        alg, r = lift_oop_to_tensor(obj)
        alg_path = args.algebra_out or os.path.splitext(args.out)[0] + ".algebra.json"
        corpus.save(alg, alg_path, "lifted")
        summary["algebra"] = alg_path
        out = r
    else:  # argparse restricts the choices
        raise UsageError(f"unknown construction {c}")
    corpus.save(out, args.out, args.id or c)
    summary["out"] = args.out
    if args.format == "json":
        print(json.dumps({"passed": True, **summary}, indent=1))
    else:
        for k, v in summary.items():
            print(f"{k}: {v}")
    return EXIT_PASS


def _table(obj, op, what):
    alg = _algebra_of(obj, what)
    return alg, alg.tensor(_sole_op(alg, op))


def cmd_diff(args) -> int:
    left_alg, left = _table(corpus.load(args.left), args.op, "--left")
    _, right = _table(corpus.load(args.right), args.right_op or args.op, "--right")
    assign = _rationals(args.assign)
    if assign:
        left = left.map_scalars(lambda v: v.substitute(assign))
        right = right.map_scalars(lambda v: v.substitute(assign))
    rows = corpus.diff_tables(left, right)
    basis = left_alg.basis
    if args.format == "json":
        cells = [{"cell": [i, j], "at": f"({basis[i - 1]},{basis[j - 1]})",
                  "computed": corpus.format_vector(x, basis), "reference": corpus.format_vector(y, basis)}
                 for i, j, x, y in rows]
        print(json.dumps({"passed": not rows, "differences": cells}, indent=1))
    else:
        print(corpus.render_diff(rows, basis))
    return EXIT_PASS if not rows else EXIT_FAIL


def cmd_suite(args) -> int:
    if args.name:
        if args.name not in BUILTIN_SUITES:
            raise UsageError(f"unknown suite {args.name!r}; built in: {', '.join(sorted(BUILTIN_SUITES))}")
        config, base = BUILTIN_SUITES[args.name], None
    elif args.config:
        config, base = load_config(args.config)
    else:
        raise UsageError("suite needs --config PATH or --name NAME")
    if args.seed is not None:
        config = {**config, "seed": args.seed}
    report = run_suite(config, base)
    if args.format == "json":
        print(json.dumps(report.to_dict(timing=not args.no_timing), indent=1))
    else:
        print(report.render(timing=not args.no_timing))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_corpus(args) -> int:
    if args.action == "list":
        entries = sorted(corpus.CORPUS.values(), key=lambda e: e.id)
        if args.format == "json":
            print(json.dumps([{"id": e.id, "kind": e.kind, "provenance": e.provenance,
                               "expect_fail": e.expect_fail} for e in entries], indent=1))
        else:
            for e in entries:
                print(f"{e.id:18} {e.kind:10} {e.provenance}")
        return EXIT_PASS
    if not args.id:
        raise UsageError("corpus emit needs an ID")
    text = corpus.dumps(corpus.get(args.id), args.id)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-witnesses", type=int, default=10)

    p = argparse.ArgumentParser(prog="malcevlab", description="Exact checks for Malcev and alternative structures.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check named identities on an algebra")
    c.add_argument("--input", required=True, help="PATH or corpus:ID")
    c.add_argument("--identity", required=True, action="append", help="NAME[,NAME...] (repeatable)")
    c.add_argument("--bind", action="append", metavar="SLOT=OP")
    c.add_argument("--assign", action="append", metavar="PARAM=RATIONAL")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify-operator", parents=[common], help="Rota-Baxter, O-operator or Nijenhuis laws")
    v.add_argument("--kind", choices=("rb", "oop", "nijenhuis"), required=True)
    v.add_argument("--input", required=True, help="operator, or algebra together with --map")
    v.add_argument("--map")
    v.add_argument("--op")
    v.add_argument("--weight", help="expression, may mention parameters")
    v.add_argument("--assign", action="append", metavar="PARAM=RATIONAL")
    v.set_defaults(func=cmd_verify_operator)

    m = sub.add_parser("mybe", parents=[common], help="Malcev Yang-Baxter equation for a skew tensor")
    m.add_argument("--algebra", required=True)
    m.add_argument("--tensor", required=True)
    m.add_argument("--op")
    m.add_argument("--operator-form", action="store_true", help="also check r as an operator on the coadjoint module")
    m.set_defaults(func=cmd_mybe)

    b = sub.add_parser("build", parents=[common], help="run a construction and write the result")
    b.add_argument("--construction", required=True,
                   choices=("semidirect", "subadjacent", "sum", "post-from-rb", "post-from-oop", "double",
                            "modified", "admissible", "lift-tensor"))
    b.add_argument("--input", required=True)
    b.add_argument("--map")
    b.add_argument("--op")
    b.add_argument("--weight")
    b.add_argument("--fix", action="append", metavar="PARAM=RATIONAL",
                   help="certify with this parameter held fixed")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--id")
    b.add_argument("--out", required=True)
    b.add_argument("--algebra-out", help="lift-tensor: where to write the enlarged algebra")
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("diff", parents=[common], help="compare two multiplication tables cell by cell")
    d.add_argument("--left", required=True)
    d.add_argument("--right", required=True)
    d.add_argument("--op")
    d.add_argument("--right-op")
    d.add_argument("--assign", action="append", metavar="PARAM=RATIONAL")
    d.set_defaults(func=cmd_diff)

    s = sub.add_parser("suite", parents=[common], help="run a suite of checks")
    s.add_argument("--config")
    s.add_argument("--name")
    s.add_argument("--seed", type=int)
    s.add_argument("--no-timing", action="store_true")
    s.set_defaults(func=cmd_suite)

    k = sub.add_parser("corpus", parents=[common], help="list or emit built-in examples")
    k.add_argument("action", choices=("list", "emit"))
    k.add_argument("id", nargs="?")
    k.add_argument("--out")
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CertificationError, OperatorError) as exc:
        print(f"failed: {exc}")
        return EXIT_FAIL
    except (UsageError, corpus.LoadError, SuiteError, AlgebraError, ScalarError, IdentityError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
