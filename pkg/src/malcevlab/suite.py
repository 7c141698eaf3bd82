"""Batch runs of named checks with expected verdicts.

A suite config is a JSON object::

    {"seed": 0, "checks": [
        {"name": "...", "kind": "identity", "input": "corpus:malcev7", "identity": ["sagle"],
         "bind": {"B": "bracket"}, "assign": {"alpha": "1"}, "expect": "pass"},
        ...]}

Check kinds: identity, rb, oop, nijenhuis, malcev_rep, a_module_malcev,
alt_bimodule, mybe, post_from_rb, post_diff, subadjacent_sagle, double_sagle,
diff, diagram.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus
from .algebra import Algebra, commutator_algebra
from .constructions import CertificationError, double_bracket, post_alt_from_oop, post_malcev_from_post_alt, \
    post_malcev_from_rb, random_points, subadjacent_malcev, sum_alternative
from .identities import CheckReport, Witness, check_identity, expand_names, merge_reports
from .operators import OOperator, check_nijenhuis, check_oop, check_rb, mybe_report, nijenhuis_block, \
    operator_form_residual
from .reps import check_a_module_malcev, check_alt_bimodule, check_malcev_rep
from .scalar import parse_open


class SuiteError(ValueError):
    pass


@dataclass
class SuiteResult:
    name: str
    report: CheckReport
    expect_pass: bool
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.report.passed == self.expect_pass


@dataclass
class RunReport:
    results: list = field(default_factory=list)
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self, timing: bool = True) -> dict:
        out = {"passed": self.passed, "seed": self.seed, "checks": []}
        for r in self.results:
            d = {"name": r.name, "expect": "pass" if r.expect_pass else "fail", "ok": r.ok, **r.report.to_dict()}
            if timing:
                d["seconds"] = round(r.seconds, 3)
            out["checks"].append(d)
        return out

    def render(self, timing: bool = True) -> str:
        lines = []
        for r in self.results:
            mark = "ok  " if r.ok else "FAIL"
            exp = "" if r.expect_pass else " (expected to fail)"
            t = f" [{r.seconds:.2f}s]" if timing else ""
            lines.append(f"{mark} {r.name}{exp}{t}")
            if not r.ok or r.report.witnesses:
                lines += ["     " + ln for ln in r.report.render().splitlines()]
        lines.append(f"overall: {'pass' if self.passed else 'fail'} ({len(self.results)} checks, seed {self.seed})")
        return "\n".join(lines)


def _assignment(d: dict) -> dict:
    return {k: Fraction(str(v)) for k, v in (d or {}).items()}


def _as_oop(obj, what: str) -> OOperator:
    if not isinstance(obj, OOperator):
        raise SuiteError(f"{what} must be an O-operator")
    return obj


def _specialize_oop(o: OOperator, assign: dict) -> OOperator:
    if not assign:
        return o
    from .constructions import _substitute_rep

    sub = _substitute_rep(o, assign)
    return OOperator(sub.rep, o.T.substitute(assign), o.weight.substitute(assign))


def run_check(spec: dict, seed: int = 0, base_dir: str | None = None) -> CheckReport:
    kind = spec.get("kind", "identity")
    assign = _assignment(spec.get("assign"))
    load = lambda key: corpus.load(spec[key], base_dir)
    mw = spec.get("max_witnesses", 5)
    if kind == "identity":
        alg = load("input")
        if not isinstance(alg, Algebra):
            alg = getattr(alg, "algebra", None)
            if alg is None:
                raise SuiteError("identity checks need an algebra input")
        if assign:
            alg = alg.substitute(assign)
        names = spec["identity"] if isinstance(spec["identity"], list) else [spec["identity"]]
        reports = [check_identity(alg, n, spec.get("bind"), mw) for n in expand_names(names)]
        return reports[0] if len(reports) == 1 else merge_reports("+".join(names), reports, mw)
    if kind in ("rb", "oop", "nijenhuis"):
        o = _specialize_oop(_as_oop(load("input"), "input"), assign)
        if "weight" in spec:
            o = OOperator(o.rep, o.T, parse_open(str(spec["weight"]), o.params))
        if kind == "rb":
            return check_rb(o.rep.base, getattr(o.rep, "bracket", None) or o.rep.mul, o.T, o.weight, mw)
        if kind == "oop":
            return check_oop(o, mw)
        alg, N = nijenhuis_block(o)
        return check_nijenhuis(alg, "bracket", N, mw)
    if kind == "malcev_rep":
        return check_malcev_rep(load("input"), mw)
    if kind == "a_module_malcev":
        return check_a_module_malcev(load("input"), mw)
    if kind == "alt_bimodule":
        return check_alt_bimodule(load("input"), mw)
    if kind == "mybe":
        alg, r = load("algebra"), load("tensor")
        if spec.get("operator_form"):
            return operator_form_residual(alg, spec.get("bracket", "bracket"), r, mw)
        return mybe_report(alg, spec.get("bracket", "bracket"), r, mw)
    if kind == "diagram":
        return _diagram_report(spec.get("instances", list(corpus.POST_ALTERNATIVE_INSTANCES)))
    if kind in ("post_from_rb", "subadjacent_sagle", "double_sagle", "post_diff"):
        alg = load("algebra")
        m = load("map")
        R = m.T if isinstance(m, OOperator) else m
        weight = parse_open(str(spec.get("weight", "0")))
        fixed = _assignment(spec.get("fixed"))
        try:
            p = post_malcev_from_rb(alg, R, weight, fixed=fixed or None, seed=seed)
        except (CertificationError, ValueError) as exc:
            return CheckReport(kind, False, [Witness((), [], str(exc).splitlines()[0])], 1, 1)
        if kind == "post_from_rb":
            return merge_reports("post_from_rb", p.certificate.reports)
        if kind == "post_diff":
            op = spec.get("op", "bracket")
            ref = corpus.load(spec["reference"], base_dir)
            computed = (p.algebra.substitute(assign) if assign else p.algebra).tensor(op)
            reference = _table_of(ref, None)
            if assign:
                reference = reference.map_scalars(lambda v: v.substitute(assign))
            rep = _diff_report(computed, reference, p.algebra.basis)
            if spec.get("informational"):
                # findings are reported, never fatal
                rep.note = f"findings: {rep.failing} differing cells"
                rep.passed = True
            return rep
        if kind == "subadjacent_sagle":
            sub = subadjacent_malcev(p, check=False).substitute(fixed)
            return check_identity(sub, "sagle", max_witnesses=mw)
        dbl = double_bracket(p)
        free = [q for q in dbl.params if q not in fixed]
        point = {**fixed, **random_points(free, 1, seed)[0]}
        rep = check_identity(dbl.evaluate(point), "sagle", max_witnesses=mw)
        rep.note = "at " + ", ".join(f"{k}={v}" for k, v in point.items())
        return rep
    if kind == "diff":
        left, right = load("left"), load("right")
        lt = _table_of(left, spec.get("op"))
        rt = _table_of(right, spec.get("right_op", spec.get("op")))
        if assign:
            lt = lt.map_scalars(lambda v: v.substitute(assign))
            rt = rt.map_scalars(lambda v: v.substitute(assign))
        return _diff_report(lt, rt, _basis_of(left))
    raise SuiteError(f"unknown check kind {kind!r}")


def _diff_report(left, right, basis, name="diff") -> CheckReport:
    rows = corpus.diff_tables(left, right)
    wit = [Witness((i, j), [None], f"({basis[i - 1]},{basis[j - 1]}): computed "
                   f"{corpus.format_vector(x, basis)}; reference {corpus.format_vector(y, basis)}")
           for i, j, x, y in rows]
    return CheckReport(name, not rows, wit, len(rows), left.dim ** 2, ("x", "y"), "computed vs reference")


def _diagram_report(instances) -> CheckReport:
    """commutator(sum(p)) against subadjacent(post_malcev_from_post_alt(p)) for each post-alternative instance."""
    wit = []
    for entry in instances:
        p = post_alt_from_oop(corpus.load(f"corpus:{entry}"))
        left = commutator_algebra(sum_alternative(p), "mul").tensor("bracket")
        right = subadjacent_malcev(post_malcev_from_post_alt(p)).tensor("bracket")
        if left != right:
            wit.append(Witness((), [None], f"{entry}: {len(corpus.diff_tables(left, right))} cells differ"))
    return CheckReport("diagram", not wit, wit, len(wit), len(instances), (), "commutator of sum vs sub-adjacent")


def _table_of(obj, op):
    alg = obj if isinstance(obj, Algebra) else getattr(obj, "algebra", None)
    if alg is None:
        raise SuiteError("diff needs algebra-like inputs")
    if op is None:
        if len(alg.ops) != 1:
            raise SuiteError(f"choose an operation among {sorted(alg.ops)}")
        op = next(iter(alg.ops))
    return alg.tensor(op)


def _basis_of(obj):
    alg = obj if isinstance(obj, Algebra) else obj.algebra
    return alg.basis


def run_suite(config: dict, base_dir: str | None = None) -> RunReport:
    """Run every check in *config*; the run passes iff every verdict matches its expectation."""
    seed = int(config.get("seed", 0))
    report = RunReport(seed=seed)
    for n, spec in enumerate(config.get("checks", [])):
        name = spec.get("name") or f"check{n + 1}"
        expect = spec.get("expect", "pass")
        if expect not in ("pass", "fail"):
            raise SuiteError(f"{name}: expect must be 'pass' or 'fail'")
        t0 = time.perf_counter()
        rep = run_check(spec, seed, base_dir)
        report.results.append(SuiteResult(name, rep, expect == "pass", time.perf_counter() - t0))
    return report


def load_config(path: str) -> tuple[dict, str]:
    import os

    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh), os.path.dirname(os.path.abspath(path))
    except (OSError, json.JSONDecodeError) as exc:
        raise SuiteError(f"cannot read suite config {path}: {exc}") from None


BUILTIN_SUITES = {
    "worked-example": {
        "seed": 0,
        "checks": [
            {"name": "malcev7 sagle", "input": "corpus:malcev7", "identity": "sagle"},
            {"name": "malcev7 malcev", "input": "corpus:malcev7", "identity": "malcev"},
            {"name": "rb7 weight -1", "kind": "rb", "input": "corpus:rb7_param", "weight": "-1"},
            {"name": "post-Malcev from rb7", "kind": "post_from_rb", "algebra": "corpus:malcev7",
             "map": "corpus:rb7_param", "weight": "lam", "fixed": {"lam": "-1"}},
            {"name": "printed bracket table", "kind": "post_diff", "algebra": "corpus:malcev7",
             "map": "corpus:rb7_param", "weight": "lam", "fixed": {"lam": "-1"}, "op": "bracket",
             "reference": "corpus:printed_curly", "assign": {"lam": "-1"}},
            {"name": "printed triangle table (findings)", "kind": "post_diff", "algebra": "corpus:malcev7",
             "map": "corpus:rb7_param", "weight": "lam", "fixed": {"lam": "-1"}, "op": "rhd",
             "reference": "corpus:printed_rhd", "informational": True},
            {"name": "post-alternative diagram", "kind": "diagram"},
            {"name": "sub-adjacent sagle", "kind": "subadjacent_sagle", "algebra": "corpus:malcev7",
             "map": "corpus:rb7_param", "weight": "lam", "fixed": {"lam": "-1"}},
            {"name": "double bracket sagle", "kind": "double_sagle", "algebra": "corpus:malcev7",
             "map": "corpus:rb7_param", "weight": "lam", "fixed": {"lam": "-1"}},
        ],
    },
    "corrupted": {
        "seed": 0,
        "checks": [
            {"name": "corrupted sagle", "input": "corpus:malcev7_corrupt", "identity": "sagle", "expect": "fail"},
            {"name": "corrupted malcev", "input": "corpus:malcev7_corrupt", "identity": "malcev", "expect": "fail"},
            {"name": "nonalt3 weak", "input": "corpus:nonalt3", "identity": "alternative_weak", "expect": "fail"},
            {"name": "rb7 wrong weight", "kind": "rb", "input": "corpus:rb7_param", "weight": "1", "expect": "fail"},
        ],
    },
}
