import random
from fractions import Fraction

import pytest

from superdeform.deformation import (SymbolModule, build_infinitesimal, emit_ideal, engine_factor, example_module,
                                     expected_example, homomorphism_defect, obstruction_summary, run,
                                     second_order)
from superdeform.densities import Weight
from superdeform.params import RelationIdeal, span_equal
from superdeform.scalars import RatFunc

LAM = Weight.lam()


def _bottom_module(n):
    return SymbolModule(LAM + Fraction(n, 2), n)


def test_module_weights():
    m = SymbolModule(LAM + 3, 3)
    assert [w.render() for w in m.weights] == ["lam+3", "lam+5/2", "lam+2", "lam+3/2"]
    assert m.blocks(Fraction(3, 2)) == [LAM + Fraction(3, 2)]
    with pytest.raises(ValueError):
        SymbolModule(LAM, -1)


@pytest.mark.parametrize("which,count", [("n0", 1), ("n1", 2), ("n3", 5), ("n4", 8)])
def test_first_order_parameter_count(which, count):
    st = build_infinitesimal(example_module(which))
    assert len(st.parameters()) == count


@pytest.mark.parametrize("which", ["n0", "n1"])
def test_small_modules_are_unobstructed(which):
    st = run(example_module(which), order=3)
    assert len(emit_ideal(st)) == 0
    assert span_equal([g for g in emit_ideal(st).generators], expected_example(which))


@pytest.mark.parametrize("which", ["n3", "n4"])
def test_engine_relations_give_a_homomorphism(which):
    st = second_order(build_infinitesimal(example_module(which)))
    assert len(st.relations) > 0
    ok, info = homomorphism_defect(st, degree=3, fdegree=3)
    assert ok, info


def test_defect_detects_missing_relations():
    st = second_order(build_infinitesimal(example_module("n3")))
    st.relations = RelationIdeal()
    ok, info = homomorphism_defect(st, degree=3, fdegree=3)
    assert not ok and info["defect"]


def test_displayed_n3_relation_alone_is_insufficient():
    st = second_order(build_infinitesimal(example_module("n3")))
    R = RelationIdeal()
    for g in expected_example("n3"):
        R.add(g, st.relations.provenance[0])
    st.relations = R
    ok, _ = homomorphism_defect(st, degree=3, fdegree=3)
    assert not ok


def test_relations_are_upward_closed_in_n():
    small = emit_ideal(second_order(build_infinitesimal(_bottom_module(5))))
    big = emit_ideal(second_order(build_infinitesimal(_bottom_module(7))))
    assert len(small) > 0
    for g in small.generators:
        assert big.contains(g), g.render()


def test_shift_72_factor_specializes_like_psi():
    rep = obstruction_summary(Fraction(7, 2))
    assert rep["verdict"] == "trivial" and rep["pattern_matches"]
    rng = random.Random(72)
    for _ in range(10):
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        if 2 * x + 3 == 0:
            continue
        assert engine_factor(Fraction(7, 2))(x) == (2 * x * x + x) / (x + Fraction(3, 2))
