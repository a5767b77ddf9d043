from __future__ import annotations

import pytest

from a1bordism import obstruction as ob
from a1bordism import spaces as sp


def test_pullback_sends_fundamental_class_to_thom_class():
    pb = ob.pullback_along_thom_class(2)
    assert pb.thom.format(pb.images["B"]) == "(1)*U"
    pb3 = ob.pullback_along_thom_class(3)
    assert pb3.thom.format(pb3.images["C"]) == "(1)*U"


def test_pullback_of_sq2sq1_matches_wu_formula_value():
    pb = ob.pullback_along_thom_class(2)
    assert pb.thom.format(pb.images["S21B"]) == "(w1*w2 + w1^3)*U"
    pb3 = ob.pullback_along_thom_class(3)
    assert pb3.thom.format(pb3.images["S21C"]) == "(w1*w2 + w1^3)*U"


def test_pullback_is_multiplicative_where_defined():
    for n in (2, 3):
        pb = ob.pullback_along_thom_class(n)
        km = pb.kmodel
        for d1 in range(n, n + 4):
            for m1 in km.basis(d1):
                for d2 in range(n, n + 4):
                    if d1 + d2 > n + 3:
                        continue
                    for m2 in km.basis(d2):
                        pass  # products in window are only the square cases below
        # the only in-window product is the fundamental-class square for n = 3
    pb3 = ob.pullback_along_thom_class(3)
    csq_prod = pb3.thom.multiply(pb3.images["C"], pb3.images["C"])
    csq_word = pb3.thom.apply_word("3", frozenset([pb3.thom.base.unit()]))
    assert csq_prod == csq_word == pb3.thom.base.parse_poly("w3")


def test_pullback_commutes_with_sq_on_generators():
    pb = ob.pullback_along_thom_class(2)
    km, th = pb.kmodel, pb.thom
    # Sq1(B) = SB upstairs; downstairs Sq1(U) = w1 U
    img_sq1_b = th.apply_word("1", pb.images["B"])
    assert img_sq1_b == pb.images["SB"]
    img_sq2_sb = th.apply_word("2", pb.images["SB"])
    assert img_sq2_sb == pb.images["S21B"]


def test_pullback_window_refusal():
    pb = ob.pullback_along_thom_class(2)
    with pytest.raises(ob.ObstructionError):
        pb.matrix(6)
    with pytest.raises(ob.ObstructionError):
        ob.pullback_along_thom_class(4)


def test_oneform_representative_and_quotient():
    one = ob.primary_obstruction_oneform()
    assert one.expression.startswith("Sq2Sq1 B")
    assert one.degree == 5
    # H^5(K(Z/2,2)) is 2-dimensional, Im Sq1 vanishes there
    assert one.sq1_image_dim == 0
    assert one.quotient_dim == 2
    assert one.class_vector != 0


def test_oneform_kernel_wrinkle_is_surfaced():
    # ker(Sq1: H^5 -> H^6) is spanned by Sq2Sq1B + B·Sq1B in the model; the
    # published representative differs by the decomposable, and the record
    # says so rather than patching either side.
    one = ob.primary_obstruction_oneform()
    assert len(one.kernel_vectors) == 1
    assert one.kernel_vectors[0] != one.class_vector
    assert not one.kernel_matches_representative
    assert "B*Sq1B" in one.note


def test_sq1_of_representative_lands_in_im_sq1():
    # Sq1(Sq2Sq1B) = (Sq1B)^2 = Sq1(B·Sq1B): zero in H^6 modulo Im Sq1
    K = sp.space("KZ2_2", 6)
    rep = K.gen_mono("S21B")
    sq1_rep = K.sq_k_mono(rep, 1)
    assert sq1_rep == K.parse_poly("SB^2")
    from a1bordism.gf2 import in_span, span_rref

    vec = K.poly_vector(sq1_rep, 6)
    im = [K.sq_matrix(1, 5).column(j) for j in range(len(K.basis(5)))]
    basis, _ = span_rref(im, len(K.basis(6)))
    assert in_span(vec, list(basis), len(K.basis(6)))


def test_wu_manifold_evaluation_nonzero():
    v = ob.evaluate_obstruction_on("WuManifold", "21", "z2")
    assert v.value == "z2*z3"
    assert v.nonzero_mod_sq1


def test_wu_manifold_sq1():
    v = ob.evaluate_obstruction_on("WuManifold", "1", "z2")
    assert v.value == "z3"


def test_spin_placeholder_vanishes():
    v = ob.evaluate_obstruction_on("SpinPlaceholder")
    assert v.value == "0"
    assert not v.nonzero_mod_sq1


def test_unknown_space_refused():
    with pytest.raises(ob.ObstructionError):
        ob.evaluate_obstruction_on("BO2")


def test_twoform_degree6_injective():
    two = ob.twoform_degree6_injectivity()
    assert two.injective
    assert two.images == ("(w1*w2 + w1^3)*U", "(w3)*U")
    assert two.matrix.rank() == 2


def test_twoform_sensitive_to_wu_corruption():
    two = ob.twoform_degree6_injectivity(corrupt_sq1_u=True)
    assert not two.injective


def test_verdict_records_shape():
    recs = ob.verdict_records()
    assert len(recs) == 2
    for rec in recs:
        assert set(rec) == {"degree", "class", "pullback", "verdict"}
    assert recs[1]["verdict"] == "injective"
