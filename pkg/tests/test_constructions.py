import random
from fractions import Fraction

import pytest

import generators as gen
from malcevlab import corpus
from malcevlab.algebra import StructureTensor, commutator_algebra, commutator_tensor
from malcevlab.constructions import (CertificationError, PostMalcevAlgebra, admissible_product, certify,
                                     compatible_post_malcev_from_invertible_rb, double_bracket, modified_post_malcev,
                                     post_alt_from_oop, post_malcev_from_oop, post_malcev_from_post_alt,
                                     post_malcev_from_rb, random_points, subadjacent_malcev, subadjacent_tensor,
                                     sum_alternative, transposed_bracket_post_malcev)
from malcevlab.identities import check_identity
from malcevlab.operators import LinearMap, OOperator, OperatorError
from malcevlab.scalar import parse

LAM = ("lam",)


def aff2_post(weight=Fraction(1), mode=None):
    R = LinearMap([[-weight, 0], [0, 0]])
    return post_malcev_from_rb(corpus.aff2(), R, weight, mode=mode)


def test_post_from_rb_tables():
    p = aff2_post()
    assert p.certified and p.certificate.mode == "symbolic"
    # x > y = [Rx, y]: e1 > e2 = -[e1,e2] = -e2
    assert p.rhd.product(0, 1) == {1: -1}
    assert p.bracket.product(0, 1) == {1: 1}
    assert any(r.identity == "T_homomorphism" for r in p.certificate.reports)


def test_subadjacent_is_malcev_and_derived_structures():
    p = aff2_post()
    sub = subadjacent_malcev(p)
    assert check_identity(sub, "sagle").passed
    adm = admissible_product(p)
    assert commutator_tensor(adm.tensor("mul")) == subadjacent_tensor(p)
    q = modified_post_malcev(p)
    assert q.certified and subadjacent_tensor(q) == subadjacent_tensor(p)
    d = double_bracket(p)
    assert d.dim == 4 and d.basis == ["e1", "e2", "f1", "f2"]
    assert check_identity(d, "sagle").passed


def test_from_malcev7_operator():
    rep = corpus.get("malcev7_adjoint")
    o = OOperator(rep, LinearMap.zero(7, 7), 0)
    p = post_malcev_from_oop(o)
    assert p.rhd.rows == {} and p.certified  # the zero operator gives the trivial structure


def test_parametric_weight_symbolic_and_sampled():
    lam = parse("lam", LAM)
    R = LinearMap([[-lam, 0], [0, 0]])
    p = post_malcev_from_rb(corpus.aff2(), R, lam)
    assert p.certificate.mode == "symbolic" and p.algebra.params == LAM
    s = post_malcev_from_rb(corpus.aff2(), R, lam, mode="sampled", seed=4)
    assert s.certificate.mode == "sampled" and s.certificate.seed == 4
    assert s.certificate.points == random_points(LAM, len(s.certificate.points), 4)
    assert "sampled" in s.certificate.describe()


def test_fixed_specialization():
    lam = parse("lam", LAM)
    p = post_malcev_from_rb(corpus.aff2(), LinearMap([[0, 0], [0, 1]]), lam, fixed={"lam": Fraction(-1)})
    assert p.certificate.fixed == {"lam": Fraction(-1)}
    assert "lam=-1" in p.certificate.describe()
    with pytest.raises(OperatorError):
        post_malcev_from_rb(corpus.aff2(), LinearMap([[0, 0], [0, 1]]), lam, fixed={"lam": Fraction(2)})


def test_refuses_uncertified_input():
    alg = aff2_post().algebra
    raw = PostMalcevAlgebra(alg)
    for fn in (subadjacent_malcev, admissible_product, modified_post_malcev, double_bracket):
        with pytest.raises(CertificationError):
            fn(raw)


def test_refuses_non_operator():
    with pytest.raises(OperatorError):
        post_malcev_from_rb(corpus.aff2(), LinearMap.identity(2), 0)
    with pytest.raises(OperatorError):
        post_alt_from_oop(corpus.rb7_param())


def test_certify_raises_with_reports():
    with pytest.raises(CertificationError) as err:
        certify(corpus.malcev7_corrupt(), ["sagle"])
    assert err.value.reports and not err.value.reports[0].passed


def test_compatible_structure_from_invertible_rb():
    a = corpus.aff2()
    p = compatible_post_malcev_from_invertible_rb(a, "bracket", LinearMap.identity(2).scaled(-1), 1)
    assert p.certified and subadjacent_tensor(p) == a.tensor("bracket")
    with pytest.raises(OperatorError, match="invertible"):
        compatible_post_malcev_from_invertible_rb(a, "bracket", LinearMap([[-1, 0], [0, 0]]), 1)
    with pytest.raises(OperatorError):
        compatible_post_malcev_from_invertible_rb(a, "bracket", LinearMap.identity(2), 1)


def test_transposed_bracket():
    for alg in (corpus.sl2(), corpus.malcev7()):
        p = transposed_bracket_post_malcev(alg)
        assert p.certified
        sub = subadjacent_tensor(p)
        assert sub == alg.tensor("bracket").scaled(-1)


def test_transposed_bracket_refuses_non_malcev():
    with pytest.raises(CertificationError):
        transposed_bracket_post_malcev(corpus.malcev7_corrupt())


@pytest.mark.parametrize("entry", ["oct_neg_id", "mat2_upper", "mat2_square_zero"])
def test_post_alternative_instances(entry):
    o = corpus.get(entry)
    p = post_alt_from_oop(o)
    assert p.certified
    star = sum_alternative(p)
    assert check_identity(star, "alternative_weak", max_witnesses=1).passed
    q = post_malcev_from_post_alt(p)
    assert q.certified
    assert subadjacent_tensor(q) == commutator_algebra(star, "mul").tensor("bracket")


def test_rank_one_operators_give_post_malcev():
    rng = random.Random(6)
    for _ in range(5):
        _, o, _ = gen.random_oop_pair(rng)
        p = post_malcev_from_oop(o)
        assert p.certified and check_identity(subadjacent_malcev(p), "sagle", max_witnesses=1).passed
