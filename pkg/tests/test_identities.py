import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from malcevlab import corpus
from malcevlab.algebra import AlgebraError, commutator_algebra, direct_sum
from malcevlab.identities import (GROUPS, REGISTRY, IdentityError, check_all, check_identity, expand_names, lookup,
                                  parse_expression)


def test_expression_parser():
    terms = parse_expression("B(x,y) - 2*P(y, N(x))", ["x", "y"])
    assert terms == [(Fraction(1), ("op", "B", ("var", "x"), ("var", "y"))),
                     (Fraction(-2), ("op", "P", ("var", "y"), ("op", "N", ("var", "x"), None)))]


@pytest.mark.parametrize("text", ["B(x,", "B(x,w)", "B(x y)", "2*"])
def test_expression_parser_errors(text):
    with pytest.raises((IdentityError, ValueError)):
        parse_expression(text, ["x", "y"])


def test_registry_contents():
    for name in ("jacobi", "malcev", "sagle", "alternative_weak", "pre_malcev", "pre_alternative", "malcev_rep",
                 "rota_baxter", "nijenhuis", "o_operator_malcev", "o_operator_alternative"):
        assert name in REGISTRY
    assert expand_names(["post_malcev"]) == ["post_malcev_1", "post_malcev_2", "post_malcev_3", "post_malcev_4"]
    assert len(GROUPS["post_alternative"]) == 10
    assert lookup("sagle").arity == 4
    with pytest.raises(IdentityError):
        lookup("bogus")


def test_report_shape_for_failures():
    rep = check_identity(corpus.malcev7_corrupt(), "sagle", max_witnesses=3)
    assert not rep.passed and rep.tuples_checked == 7 ** 4
    assert len(rep.witnesses) == 3 and rep.failing > 3
    w = rep.witnesses[0]
    assert all(1 <= i <= 7 for i in w.indices)  # witnesses are 1-based
    assert w.label(rep.variables).startswith("(x=e")
    d = rep.to_dict()
    assert d["verdict"] == "fail" and len(d["witnesses"]) == 3
    assert "FAIL" in rep.render()


def test_witness_ordering_is_lexicographic():
    rep = check_identity(corpus.malcev7_corrupt(), "sagle", max_witnesses=None)
    idx = [w.indices for w in rep.witnesses]
    assert idx == sorted(idx) and len(idx) == rep.failing


def test_polarized_witness_labels():
    rep = check_identity(corpus.nonalt3(), "alternative_weak", max_witnesses=None)
    labels = [w.at for w in rep.witnesses]
    assert "x=2*e1, y=e1" in labels[0]
    assert any("x=e1+e2" in s for s in labels)


def test_stop_at_first():
    rep = check_identity(corpus.malcev7_corrupt(), "sagle", stop_at_first=True)
    assert not rep.passed and len(rep.witnesses) == 1


def test_binding_rules():
    p = corpus.load("corpus:printed_rhd")
    with pytest.raises(AlgebraError):
        check_identity(corpus.sl2(), "jacobi", {"B": "mul"})
    alg = direct_sum(corpus.sl2(), corpus.heis3(), "bracket")
    assert check_identity(alg, "jacobi").passed
    assert p.dim == 7


def test_lie_algebras_satisfy_jacobi_and_malcev():
    for alg in gen.lie_algebras():
        assert all(r.passed for r in check_all(alg, ["anticommutativity", "jacobi", "malcev", "sagle"]))


def test_alternative_examples():
    assert all(r.passed for r in check_all(corpus.emit_octonions(), ["alternative", "alternative_weak"]))
    assert not check_identity(corpus.emit_octonions(), "associativity").passed
    assert check_identity(corpus.mat2(), "associativity").passed
    # the commutator algebra of an alternative algebra is Malcev
    assert check_identity(commutator_algebra(corpus.emit_octonions(), "mul"), "sagle").passed


def _sagle_malcev_corpus():
    rng = random.Random(7)
    algs = gen.lie_algebras()
    algs += [gen.transport(a, "bracket", rng) for a in gen.lie_algebras()]
    algs += [corpus.malcev7(), gen.transport(corpus.malcev7(), "bracket", rng), corpus.malcev7_corrupt(),
             commutator_algebra(corpus.emit_octonions(), "mul"),
             direct_sum(corpus.malcev7(), corpus.aff2(), "bracket")]
    algs += [gen.random_anticommutative(rng, n) for n in (3, 3, 4, 4, 4, 5)]
    return algs


def test_sagle_iff_malcev_on_many_algebras():
    algs = _sagle_malcev_corpus()
    assert len(algs) >= 20
    verdicts = [(check_identity(a, "sagle", max_witnesses=1).passed, check_identity(a, "malcev", max_witnesses=1).passed)
                for a in algs]
    assert all(s == m for s, m in verdicts)
    assert any(s for s, _ in verdicts) and not all(s for s, _ in verdicts)


def test_weak_iff_left_and_right():
    rng = random.Random(11)
    algs = [corpus.emit_octonions(), corpus.mat2(), corpus.nonalt3(), corpus.square_zero_extension(corpus.mat2()),
            gen.transport(corpus.emit_octonions(), "mul", rng)]
    algs += [gen.random_algebra(rng, n, 0.3) for n in (2, 2, 3, 3, 3)]
    for a in algs:
        weak = check_identity(a, "alternative_weak", max_witnesses=1).passed
        both = all(r.passed for r in check_all(a, ["alternative"], max_witnesses=1))
        assert weak == both, a.name


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(7)))
def test_basis_permutation_invariance(perm):
    a = gen.permuted(corpus.malcev7(), list(perm))
    assert check_identity(a, "sagle", max_witnesses=1).passed
    bad = gen.permuted(corpus.malcev7_corrupt(), list(perm))
    assert check_identity(bad, "sagle", max_witnesses=None).failing == \
        check_identity(corpus.malcev7_corrupt(), "sagle", max_witnesses=None).failing


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_random_anticommutative_verdicts_agree(seed, n):
    a = gen.random_anticommutative(random.Random(seed), n)
    assert check_identity(a, "sagle", max_witnesses=1).passed == check_identity(a, "malcev", max_witnesses=1).passed
    if check_identity(a, "jacobi", max_witnesses=1).passed:
        assert check_identity(a, "sagle", max_witnesses=1).passed
