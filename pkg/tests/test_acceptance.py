"""The nine acceptance criteria, each reported as one PASS/FAIL line (exact arithmetic, tolerance 0)."""

import json
import random
import time
from fractions import Fraction

import generators as gen
from malcevlab import corpus
from malcevlab.algebra import SKEW, Algebra, commutator_algebra, direct_sum
from malcevlab.cli import main
from malcevlab.constructions import (double_bracket, post_alt_from_oop, post_malcev_from_post_alt,
                                     post_malcev_from_rb, random_points, subadjacent_malcev, sum_alternative)
from malcevlab.identities import check_identity
from malcevlab.operators import (LinearMap, OOperator, check_nijenhuis, check_oop, check_oop_malcev,
                                 lift_oop_to_tensor, map_homomorphism_report, mybe_report, nijenhuis_block,
                                 operator_form_residual)
from malcevlab.reps import adjoint_rep, check_a_module_malcev, check_malcev_rep, regular_bimodule, \
    semidirect_malcev

SEED = 20240


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_criterion_1_malcev7(capsys, record):
    t0 = time.perf_counter()
    results = {}
    for name in ("sagle", "malcev"):
        code, out = run_cli(capsys, "check", "--input", "corpus:malcev7", "--identity", name, "--format", "json")
        rep = json.loads(out)["reports"][0]
        results[name] = (code, rep["verdict"], rep["tuples_checked"])
    elapsed = time.perf_counter() - t0
    # sagle enumerates 7^4 quadruples; the malcev identity is checked on its polarized form
    ok = (results["sagle"] == (0, "pass", 2401) and results["malcev"][:2] == (0, "pass") and elapsed < 5)
    record(1, ok, f"sagle {results['sagle'][1]} over {results['sagle'][2]} quadruples, "
                  f"malcev {results['malcev'][1]} ({results['malcev'][2]} polarized tuples), {elapsed:.2f}s")
    assert ok


def test_criterion_2_rb7(capsys, record):
    t0 = time.perf_counter()
    code, out = run_cli(capsys, "verify-operator", "--kind", "rb", "--input", "corpus:rb7_param", "--weight", "-1",
                        "--format", "json")
    elapsed = time.perf_counter() - t0
    rep = json.loads(out)["reports"][0]
    o = corpus.load("corpus:rb7_param")
    symbolic = set(corpus.RB7_PARAMS) <= set(o.params)
    ok = code == 0 and rep["verdict"] == "pass" and rep["tuples_checked"] == 49 and symbolic and elapsed < 5
    record(2, ok, f"rota_baxter weight -1 {rep['verdict']} on {rep['tuples_checked']} pairs over "
                  f"Q[{','.join(o.params)}], {elapsed:.2f}s")
    assert ok


def test_criterion_3_post_malcev(tmp_path, capsys, record):
    t0 = time.perf_counter()
    out = str(tmp_path / "post.json")
    code, text = run_cli(capsys, "build", "--construction", "post-from-rb", "--input", "corpus:malcev7",
                         "--map", "corpus:rb7_param", "--weight", "lam", "--fix", "lam=-1", "--out", out)
    built = code == 0
    p = corpus.load(out)
    params_ok = len(p.algebra.params) == 6 and "lam" in p.algebra.params
    degree_ok = max(t.max_degree() for t in p.algebra.ops.values()) <= 3
    cert = p.certificate
    axioms_ok = cert.mode == "symbolic" and all(r.passed for r in cert.reports)
    code_ax, _ = run_cli(capsys, "check", "--input", out, "--identity", "post_malcev", "--assign", "lam=-1")
    sub_path = str(tmp_path / "sub.json")
    code_sub, _ = run_cli(capsys, "build", "--construction", "subadjacent", "--input", out, "--out", sub_path)
    code_sagle, _ = run_cli(capsys, "check", "--input", sub_path, "--identity", "sagle", "--assign", "lam=-1")
    code_curly, curly = run_cli(capsys, "diff", "--left", out, "--right", "corpus:printed_curly", "--op", "bracket",
                                "--assign", "lam=-1")
    # the triangle table comparison is a findings report, whatever it contains
    code_rhd, findings = run_cli(capsys, "diff", "--left", out, "--right", "corpus:printed_rhd", "--op", "rhd")
    elapsed = time.perf_counter() - t0
    # with lam left free the axioms fail, and every residual vanishes at lam = -1
    formal = check_identity(p.algebra, "post_malcev_1", {"B": "bracket", "P": "rhd"}, max_witnesses=None)
    formal_note = "formal lam fails, residuals vanish at lam=-1" if not formal.passed and all(
        all(v.substitute({"lam": -1}).is_zero() for v in w.residuals[0]) for w in formal.witnesses) else "?"
    ok = (built and params_ok and degree_ok and axioms_ok and code_ax == 0 and code_sub == 0 and code_sagle == 0
          and code_curly == 0 and code_rhd in (0, 1) and elapsed < 60)
    record(3, ok, f"post_malcev_1..4 {cert.describe()}, sub-adjacent sagle "
                  f"{'pass' if code_sagle == 0 else 'fail'}, curly diff '{curly.strip()}', "
                  f"triangle findings '{findings.strip().splitlines()[0]}', {formal_note}, {elapsed:.2f}s")
    assert ok


def test_criterion_4_lift(tmp_path, capsys, record):
    rng = random.Random(SEED)
    good = bad = 0
    for _ in range(100):
        _, o, f = gen.random_oop_pair(rng)
        hat, r = lift_oop_to_tensor(o)
        good += mybe_report(hat, "bracket", r, 1).passed and check_oop(o, 1).passed
        hat_f, r_f = lift_oop_to_tensor(f)
        bad += not mybe_report(hat_f, "bracket", r_f, 1).passed and not check_oop(f, 1).passed
    # the CLI path on one saved operator
    op_path, r_path = str(tmp_path / "op.json"), str(tmp_path / "r.json")
    corpus.save(gen.rank_one_oop(rng, gen.sl2_standard()), op_path)
    code_build, _ = run_cli(capsys, "build", "--construction", "lift-tensor", "--input", op_path, "--out", r_path)
    code_mybe, _ = run_cli(capsys, "mybe", "--algebra", str(tmp_path / "r.algebra.json"), "--tensor", r_path)
    ok = good == 100 and bad == 100 and code_build == 0 and code_mybe == 0
    record(4, ok, f"{good}/100 lifts solve the MYBE, {bad}/100 failing T give nonzero residual, seed {SEED}")
    assert ok


def _criterion5_cases(rng):
    algs3 = [corpus.sl2(), corpus.so3(), corpus.heis3()]
    m7 = corpus.malcev7()
    cases = []
    for k in range(200):
        roll = rng.random()
        if k < 10:
            _, rep = rng.choice(gen.dim3_lift_settings())
            alg, r = lift_oop_to_tensor(gen.rank_one_oop(rng, rep))
            cases.append(("lift", alg, r))
        elif k % 2 == 0:
            alg = rng.choice(algs3)
            pair = gen.commuting_pair(rng, alg)
            if roll < 0.3 and pair:
                cases.append(("wedge", alg, gen.wedge(3, *pair, gen.small(rng) or Fraction(1))))
            else:
                cases.append(("random", alg, gen.skew_matrix(rng, 3)))
        else:
            if roll < 0.35:
                x, y = gen.commuting_pair(rng, m7)
                cases.append(("wedge", m7, gen.wedge(7, x, y, Fraction(rng.choice((1, -2, 3))))))
            else:
                cases.append(("random", m7, gen.skew_matrix(rng, 7, 0.15)))
    return cases


def test_criterion_5_tensor_operator(record):
    rng = random.Random(SEED)
    agree = solutions = lifts = 0
    cases = _criterion5_cases(rng)
    for src, alg, r in cases:
        a = mybe_report(alg, "bracket", r, 1).passed
        b = operator_form_residual(alg, "bracket", r, 1).passed
        agree += a == b
        solutions += a
        lifts += src == "lift" and a
    dims = sorted({alg.dim for _, alg, _ in cases})
    ok = agree == len(cases) == 200 and lifts >= 5 and dims == [3, 7]
    record(5, ok, f"{agree}/200 verdicts agree on dims {dims}, {solutions} solutions ({lifts} from lifts), seed {SEED}")
    assert ok


def test_criterion_6_semidirect(record):
    rng = random.Random(SEED)
    agree = positive = 0
    for _ in range(50):
        rep = gen.rep_candidate(rng)
        s = check_identity(semidirect_malcev(rep), "sagle", max_witnesses=1).passed
        c = check_malcev_rep(rep, 1).passed and check_a_module_malcev(rep, 1).passed
        agree += s == c
        positive += s
    ok = agree == 50
    record(6, ok, f"{agree}/50 verdicts agree ({positive} semidirect products are Malcev), seed {SEED}")
    assert ok


def test_criterion_7_diagram(record):
    checked = []
    for entry in corpus.POST_ALTERNATIVE_INSTANCES:
        p = post_alt_from_oop(corpus.load(f"corpus:{entry}"))
        left = commutator_algebra(sum_alternative(p), "mul").tensor("bracket")
        right = subadjacent_malcev(post_malcev_from_post_alt(p)).tensor("bracket")
        checked.append((entry, left == right))
    ok = all(v for _, v in checked) and "oct_neg_id" in dict(checked)
    record(7, ok, "diagram commutes on " + ", ".join(f"{e}{'' if v else ' (FAILED)'}" for e, v in checked))
    assert ok


def _family_cases():
    """(label, OOperator with V = A) over the corpus."""
    cases = []
    for entry in ("rb7_param", "sl2_triangular", "oct_neg_id", "mat2_upper", "oct_diagonal", "mat2_square_zero"):
        cases.append((entry, corpus.load(f"corpus:{entry}")))
    return cases


def _projection(a: Algebra, b: Algebra, op: str) -> tuple[Algebra, LinearMap]:
    s = direct_sum(a, b, op)
    n = a.dim
    P = [[Fraction(int(i == j and i < n)) for j in range(s.dim)] for i in range(s.dim)]
    return s, LinearMap(P)


def test_criterion_8_operator_families(record):
    counts = {"scaling": 0, "reflection": 0, "identity": 0, "idempotent": 0}
    failures = []
    nus = (Fraction(-2), Fraction(-1), Fraction(2), Fraction(1, 3))
    for label, o in _family_cases():
        for nu in nus:
            scaled = OOperator(o.rep, o.T.scaled(nu), o.weight * nu)
            if check_oop(scaled, 1).passed:
                counts["scaling"] += 1
            else:
                failures.append(f"{label} nu={nu}")
        n = o.rep.base.dim
        reflected = OOperator(o.rep, LinearMap.identity(n, o.params).scaled(-o.weight) - o.T, o.weight)
        if check_oop(reflected, 1).passed:
            counts["reflection"] += 1
        else:
            failures.append(f"{label} reflection")
    malcev_algs = [corpus.malcev7(), corpus.sl2(), corpus.gl2(), corpus.heis3(),
                   commutator_algebra(corpus.emit_octonions(), "mul")]
    for alg in malcev_algs:
        ok = check_oop(OOperator(adjoint_rep(alg), LinearMap.identity(alg.dim), -1), 1).passed
        counts["identity"] += ok
        if not ok:
            failures.append(f"identity on {alg.name}")
    for alg in (corpus.emit_octonions(), corpus.mat2()):
        ok = check_oop(OOperator(regular_bimodule(alg), LinearMap.identity(alg.dim), -1), 1).passed
        counts["identity"] += ok
        if not ok:
            failures.append(f"identity on {alg.name}")
    pairs = [(corpus.malcev7(), corpus.sl2(), "bracket"), (corpus.sl2(), corpus.heis3(), "bracket"),
             (corpus.heis3(), corpus.malcev7(), "bracket"), (corpus.mat2(), corpus.emit_octonions(), "mul")]
    for a, b, op in pairs:
        s, P = _projection(a, b, op)
        hom = map_homomorphism_report("hom", P, s.tensor(op), s.tensor(op)).passed
        idem = (P @ P) == P
        rep = adjoint_rep(s, op) if op == "bracket" else regular_bimodule(s, op)
        ok = hom and idem and check_oop(OOperator(rep, P, -1), 1).passed
        counts["idempotent"] += ok
        if not ok:
            failures.append(f"projection on {s.name}")
    # Nijenhuis criterion on random operators over small settings
    rng = random.Random(SEED)
    agree = passing = 0
    for _ in range(100):
        o = _random_operator(rng)
        alg, N = nijenhuis_block(o)
        a = check_nijenhuis(alg, "bracket", N, 1).passed
        b = check_oop_malcev(o, 1).passed
        agree += a == b
        passing += b
    ok = not failures and agree == 100
    record(8, ok, f"scaling {counts['scaling']}, reflection {counts['reflection']}, identity {counts['identity']}, "
                  f"idempotent {counts['idempotent']} cases verified; Nijenhuis iff {agree}/100 "
                  f"({passing} O-operators), seed {SEED}" + (f"; failures: {failures}" if failures else ""))
    assert ok


def _random_operator(rng) -> OOperator:
    """Weighted and unweighted candidates over dim <= 3, about half of them genuine."""
    roll = rng.random()
    if roll < 0.35:
        _, rep = rng.choice(gen.weight0_settings())
        if rep.module_dim > 1 and rng.random() < 0.4:
            return gen.failing_oop(rng, rep)
        return gen.rank_one_oop(rng, rep)
    alg = rng.choice([corpus.sl2(), corpus.so3(), corpus.heis3(), corpus.aff2()])
    rep = adjoint_rep(alg)
    nu = Fraction(rng.choice((-2, -1, 1, 2, 3)), rng.choice((1, 2)))
    n = alg.dim
    if roll < 0.55:
        return OOperator(rep, LinearMap.identity(n).scaled(nu), -nu)  # nu * id has weight -nu
    if roll < 0.7:
        return OOperator(rep, LinearMap.zero(n, n), nu)
    if roll < 0.8:
        return OOperator(rep, LinearMap.identity(n).scaled(-nu), nu)  # reflection of 0 is -nu id
    return OOperator(rep, LinearMap(gen.rand_matrix(rng, n, n, 0.6)), nu)


def test_criterion_9_double_bracket(record):
    t0 = time.perf_counter()
    p = post_malcev_from_rb(corpus.malcev7(), corpus.rb7_map(), _lam(), fixed={"lam": -1})
    dbl = double_bracket(p)
    free = [q for q in dbl.params if q != "lam"]
    point = {"lam": Fraction(-1), **random_points(free, 1, SEED)[0]}
    rep = check_identity(dbl.evaluate(point), "sagle", max_witnesses=3)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and dbl.dim == 14 and rep.tuples_checked == 14 ** 4 and elapsed < 120
    shown = ", ".join(f"{k}={v}" for k, v in point.items())
    record(9, ok, f"double bracket (dim {dbl.dim}) sagle {rep.verdict} over {rep.tuples_checked} quadruples "
                  f"at {shown}, {elapsed:.2f}s")
    assert ok


def _lam():
    from malcevlab.scalar import parse_open

    return parse_open("lam")
