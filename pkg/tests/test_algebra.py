from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from malcevlab import corpus
from malcevlab.algebra import (SKEW, Algebra, AlgebraError, StructureTensor, SymmetryError, apply, associator,
                               commutator_algebra, direct_sum, jacobian)
from malcevlab.scalar import format_scalar


def unit(i, n):
    return [1 if k == i else 0 for k in range(n)]


def text(vec):
    return [format_scalar(v) if hasattr(v, "terms") else str(v) for v in vec]


def test_sl2_brackets():
    a = corpus.sl2()
    assert a.basis == ["e", "h", "f"]
    assert text(apply(a, "bracket", unit(1, 3), unit(0, 3))) == ["2", "0", "0"]  # [h,e] = 2e
    assert text(apply(a, "bracket", unit(0, 3), unit(2, 3))) == ["0", "1", "0"]  # [e,f] = h
    assert text(apply(a, "bracket", unit(1, 3), unit(2, 3))) == ["0", "0", "-2"]  # [h,f] = -2f


def test_malcev7_is_not_lie():
    a = corpus.malcev7()
    # hand computation: [[e2,e3],e4] + [[e4,e2],e3] + [[e3,e4],e2] = 2e4 + 4e4 + 0
    assert text(jacobian(a, "bracket", unit(1, 7), unit(2, 7), unit(3, 7))) == ["0", "0", "0", "6", "0", "0", "0"]
    assert not any(jacobian(a, "bracket", unit(0, 7), unit(1, 7), unit(2, 7)))


def test_octonion_table():
    o = corpus.emit_octonions()
    assert o.basis[0] == "e0"
    for i in range(1, 8):
        sq = apply(o, "mul", unit(i, 8), unit(i, 8))
        assert text(sq) == ["-1"] + ["0"] * 7
        assert text(apply(o, "mul", unit(0, 8), unit(i, 8))) == text(unit(i, 8))
    assert text(apply(o, "mul", unit(1, 8), unit(2, 8)))[3] == "1"
    assert text(apply(o, "mul", unit(2, 8), unit(1, 8)))[3] == "-1"
    assert text(associator(o, "mul", unit(1, 8), unit(2, 8), unit(4, 8))) == ["0"] * 7 + ["2"]


def test_cayley_dickson_doubling_of_complex_numbers():
    # (a + bi)(c + di) with tuples of length 2
    x, y = (Fraction(1), Fraction(2)), (Fraction(3), Fraction(-1))
    assert corpus.cayley_dickson_mul(x, y) == (Fraction(5), Fraction(5))


def test_symmetry_flag_is_verified():
    t = StructureTensor.from_entries(2, [(0, 0, 1, 1)])
    with pytest.raises(SymmetryError):
        Algebra(2, {"bracket": t}, {"bracket": SKEW})
    t = StructureTensor.from_entries(2, [(0, 1, 0, 1)])
    with pytest.raises(SymmetryError, match=r"c\[1\]\[2\]\[1\]"):
        Algebra(2, {"bracket": t}, {"bracket": SKEW})


def test_index_and_shape_errors():
    with pytest.raises(AlgebraError, match="out of range"):
        StructureTensor.from_entries(2, [(1, 1, 3, 1)], one_based=True)
    with pytest.raises(AlgebraError):
        Algebra(3, {"mul": StructureTensor(2)})
    with pytest.raises(AlgebraError):
        Algebra(2, {"mul": StructureTensor(2)}, basis=["a"])
    with pytest.raises(AlgebraError, match="unknown operation"):
        corpus.sl2().tensor("mul")


def test_repeated_entries_accumulate():
    t = StructureTensor.from_entries(1, [(0, 0, 0, 1), (0, 0, 0, Fraction(1, 2))])
    assert t.get(0, 0, 0) == Fraction(3, 2)


def test_commutator_of_mat2_is_gl2():
    assert commutator_algebra(corpus.mat2(), "mul").tensor("bracket") == corpus.gl2().tensor("bracket")


def test_direct_sum_blocks():
    s = direct_sum(corpus.sl2(), corpus.heis3(), "bracket")
    assert s.dim == 6 and s.is_skew("bracket")
    t = s.tensor("bracket")
    assert all((i < 3) == (j < 3) for (i, j) in t.rows)


def test_substitute_and_evaluate():
    p = corpus.printed_curly()
    assert "lam" in p.params
    half = p.substitute({"lam": Fraction(1, 2)})
    assert half.params == p.params
    ev = p.evaluate({"lam": 2})
    assert ev.params == ()
    assert ev.tensor(next(iter(ev.ops))).get(1, 2, 0) == 2  # {e2,e3} = lam e1


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)), st.integers(0, 10 ** 6))
def test_transport_preserves_products(perm, seed):
    import random

    rng = random.Random(seed)
    a = gen.random_algebra(rng, 4)
    b = gen.permuted(a, list(perm))
    for i in range(4):
        for j in range(4):
            x = a.tensor("mul").product(i, j)
            y = b.tensor("mul").product(perm[i], perm[j])
            assert {perm[k]: v for k, v in x.items()} == y
