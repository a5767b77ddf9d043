from __future__ import annotations

import pytest

from a1bordism import steenrod as st
from a1bordism.steenrod import A1Element


def test_rewriting_confluent_all_orders_up_to_length_six():
    assert st.rewriting_is_confluent(6)


def test_defining_relations():
    assert (st.SQ1 * st.SQ1).is_zero()
    assert st.SQ2 * st.SQ2 == A1Element.from_word("121")


def test_sq2_times_sq2sq1_is_zero():
    # oracle: all reduction orders of the concatenated word agree on zero
    assert st.all_reductions("2" + "21") == {None}
    assert (st.SQ2 * A1Element.from_word("21")).is_zero()


def test_degree_six_words_coincide():
    assert st.reduce_word("1212") == st.reduce_word("2121") == "1212"


def test_graded_dimensions():
    assert st.graded_dimensions() == (1, 1, 1, 2, 1, 1, 1)


def test_associativity_exhaustive():
    basis = st.basis()
    for a in basis:
        for b in basis:
            ab = a * b
            for c in basis:
                assert (ab) * c == a * (b * c)


def test_unital():
    for b in st.basis():
        assert st.ONE * b == b == b * st.ONE


def test_milnor_primitives():
    q0 = st.milnor_primitive(0)
    q1 = st.milnor_primitive(1)
    assert q0 == st.SQ1
    assert q1 == A1Element.from_words(["12", "21"])
    assert (q0 * q0).is_zero()
    assert (q1 * q1).is_zero()
    assert (q0 * q1 + q1 * q0).is_zero()
    with pytest.raises(ValueError):
        st.milnor_primitive(2)


def test_top_class_is_sq2_cubed():
    # oracle: rewrite Sq2Sq2Sq2 through every reduction order
    assert st.all_reductions("222") == {"1212"}
    top = st.top_class()
    assert top == A1Element.from_word("1212")
    assert top.degree() == 6
    assert (st.SQ1 * top).is_zero()
    assert (top * st.SQ1).is_zero()
    assert (st.SQ2 * top).is_zero()
    assert (top * st.SQ2).is_zero()


def test_degree_errors():
    mixed = st.SQ1 + st.SQ2
    assert not mixed.is_homogeneous()
    with pytest.raises(ValueError):
        mixed.degree()


def test_coefficient_reduces_first():
    top = st.top_class()
    assert top.coefficient("2121") == 1
    assert top.coefficient("222") == 1
    assert top.coefficient("11") == 0
