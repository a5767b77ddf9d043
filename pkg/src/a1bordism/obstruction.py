"""Primary obstructions to spontaneously breaking n-form Z/2 symmetries.

The background field of a broken n-form symmetry is a map to K(Z/2, n+1);
the broken phase needs a Poincaré-dual defect, i.e. a lift across the
Thom-class map from MO_{n+1}.  The primary obstruction is evaluated
through its mod-2 avatar: a class in H^{n+3}(K(Z/2, n+1)) modulo the
image of Sq1, pulled back along the Thom class and evaluated on cataloged
cohomology rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .gf2 import BitMatrix, in_span, span_rref
from . import spaces as sp
from .spaces import Poly, SpacePresentation


class ObstructionError(ValueError):
    pass


# -- the MO_n side ------------------------------------------------------------


class ThomClassModel:
    """H^*(MO_n) as U·H^*(BO_n) with the Wu-formula Steenrod action."""

    def __init__(self, n: int, cutoff_above: int = 3):
        self.n = n
        self.base = sp.space(f"BO{n}", cutoff_above + 1)
        self.max_degree = n + cutoff_above + 1
        self._euler = frozenset([self.base.gen_mono(self.base.gens[n - 1].label)])
        self._sq_u_total = frozenset(
            [self.base.unit()] + [self.base.gen_mono(g.label) for g in self.base.gens]
        )

    def u_degree(self, p: Poly) -> int:
        degs = {self.base.mono_degree(m) for m in p}
        if len(degs) != 1:
            raise ObstructionError("inhomogeneous Thom coefficient")
        return degs.pop() + self.n

    def sq(self, k: int, p: Poly) -> Poly:
        """Coefficient of Sq^k(pU) = (...)U via the Cartan formula and Sq^i U = w_i U."""
        acc: set = set()
        for m in p:
            prod = self.base.poly_mul(self.base.total_sq_mono(m), self._sq_u_total)
            d = self.base.mono_degree(m) + k
            for x in prod:
                if self.base.mono_degree(x) == d:
                    if x in acc:
                        acc.discard(x)
                    else:
                        acc.add(x)
        return frozenset(acc)

    def apply_word(self, word: str, p: Poly) -> Poly:
        """Apply a word in Sq1/Sq2/Sq3 letters (left letter outermost)."""
        for letter in reversed(word):
            k = int(letter)
            if k == 3:
                p = self.sq(1, self.sq(2, p))
            else:
                p = self.sq(k, p)
        return p

    def multiply(self, p: Poly, q: Poly) -> Poly:
        """(pU)(qU) = (p q e)U with e the mod-2 Euler class w_n."""
        return self.base.poly_mul(self.base.poly_mul(p, q), self._euler)

    def vector(self, p: Poly, d: int) -> int:
        return self.base.poly_vector(p, d - self.n)

    def basis_labels(self, d: int) -> Tuple[str, ...]:
        return tuple(
            ("U" if self.base.mono_label(m) == "1" else self.base.mono_label(m) + "*U")
            for m in self.base.basis(d - self.n)
        )

    def format(self, p: Poly) -> str:
        if not p:
            return "0"
        return "(" + self.base.format_poly(p) + ")*U"


@dataclass
class PullbackMap:
    n: int
    kmodel: SpacePresentation
    thom: ThomClassModel
    matrices: Dict[int, BitMatrix]
    images: Dict[str, Poly]

    def matrix(self, d: int) -> BitMatrix:
        if d not in self.matrices:
            raise ObstructionError(
                f"pullback degree {d} exceeds the modeled window (d <= {self.n + 3})")
        return self.matrices[d]


def pullback_along_thom_class(n: int) -> PullbackMap:
    """The GF(2)-linear map H^d(K(Z/2,n)) -> H^d(MO_n) for d <= n+3.

    Sends the fundamental class to U, Sq^I classes to Sq^I U, and products
    to products (one U absorbed per extra factor via U·U = w_n U).
    """
    if n not in (2, 3):
        raise ObstructionError("the K(Z/2,n) model covers n in {2, 3}")
    kmodel = sp.space(f"KZ2_{n}", n + 3)
    thom = ThomClassModel(n, cutoff_above=3)
    unit_u: Poly = frozenset([thom.base.unit()])
    images: Dict[str, Poly] = {}
    for g in kmodel.gens:
        word = kmodel.sq_words[g.label]
        images[g.label] = thom.apply_word(word, unit_u)
    matrices: Dict[int, BitMatrix] = {}
    for d in range(n, n + 4):
        cols = []
        for mono in kmodel.basis(d):
            img: Optional[Poly] = None
            for e, g in zip(mono, kmodel.gens):
                for _ in range(e):
                    img = images[g.label] if img is None else thom.multiply(img, images[g.label])
            if img is None:
                cols.append(0)
            else:
                cols.append(thom.vector(img, d))
        matrices[d] = BitMatrix.from_columns(cols, len(thom.base.basis(d - n)))
    return PullbackMap(n, kmodel, thom, matrices, images)


# -- one-form symmetry ---------------------------------------------------------


@dataclass
class OneFormObstruction:
    expression: str                  # the conventional representative, mod Im Sq1
    class_vector: int                # in the degree-5 basis of the K(Z/2,2) model
    degree: int
    kernel_vectors: Tuple[int, ...]  # ker(Sq1: H^5 -> H^6) in the same basis
    sq1_image_dim: int               # dim Im(Sq1: H^4 -> H^5)
    quotient_dim: int
    kernel_matches_representative: bool
    note: str


def primary_obstruction_oneform() -> OneFormObstruction:
    """The mod-2 primary obstruction to breaking a one-form Z/2 symmetry.

    Returns Sq2Sq1 B, the conventional representative modulo Im Sq1.  The
    derivation record also reports ker(Sq1: H^5 -> H^6) from the model; in
    the model that kernel is spanned by Sq2Sq1 B + B·Sq1 B, which differs
    from the representative by the decomposable B·Sq1 B.  The discrepancy
    is surfaced, not patched.
    """
    K = sp.space("KZ2_2", 6)
    sq1_5 = K.sq_matrix(1, 5)
    kernel = sq1_5.kernel_basis()
    im_sq1 = [K.sq_matrix(1, 4).column(j) for j in range(len(K.basis(4)))]
    im_basis, _ = span_rref(im_sq1, len(K.basis(5)))
    rep_mono = K.gen_mono("S21B")
    rep_vec = K.poly_vector(frozenset([rep_mono]), 5)
    matches = any(
        (rep_vec ^ v) == 0 or in_span(rep_vec ^ v, list(im_basis), len(K.basis(5)))
        for v in kernel
    )
    note = (
        "conventional representative Sq2Sq1B; the Sq1-closed line in H^5 is spanned by "
        "Sq2Sq1B + B*Sq1B (they differ by the decomposable B*Sq1B); "
        "reported as found, not patched"
    )
    return OneFormObstruction(
        expression="Sq2Sq1 B (mod Im Sq1)",
        class_vector=rep_vec,
        degree=5,
        kernel_vectors=kernel,
        sq1_image_dim=len(im_basis),
        quotient_dim=len(K.basis(5)) - len(im_basis),
        kernel_matches_representative=matches,
        note=note,
    )


# -- evaluation on cataloged spaces ---------------------------------------------


@dataclass
class EvaluationVerdict:
    space: str
    expression: str
    value: str
    nonzero_mod_sq1: bool
    detail: str


EVALUATION_SPACES = ("WuManifold", "SpinPlaceholder")


def evaluate_obstruction_on(space_name: str, word: str = "21",
                            generator: str = "z2") -> EvaluationVerdict:
    """Evaluate Sq^word(generator) modulo Im Sq1 on a cataloged space.

    The spin placeholder is handled by the documented rule that a vanishing
    second Wu class forces Sq2 to vanish on degree-(dim-2) classes of a
    closed spin 5-manifold, so Sq2Sq1 B = (w2 + w1^2) Sq1 B = 0.
    """
    expr = "Sq" + " Sq".join(word) + f" {generator}" if word else generator
    if space_name == "SpinPlaceholder":
        return EvaluationVerdict(
            space_name, expr, "0", False,
            "spin placeholder: v2 = w2 + w1^2 = 0, so Sq2 kills degree-3 classes "
            "of a closed spin 5-manifold and the obstruction class vanishes")
    if space_name != "WuManifold":
        raise ObstructionError(f"unknown evaluation space {space_name!r}; "
                               f"choose from {EVALUATION_SPACES}")
    wu = sp.space("WuManifold", 5)
    mono = wu.gen_mono(generator)
    p: Poly = frozenset([mono])
    deg = wu.mono_degree(mono)
    for letter in reversed(word):
        k = int(letter)
        acc: set = set()
        for m in p:
            for x in wu.sq_k_mono(m, k):
                if x in acc:
                    acc.discard(x)
                else:
                    acc.add(x)
        p = frozenset(acc)
        deg += k
    if deg > wu.cutoff:
        raise ObstructionError(f"degree {deg} exceeds the Wu-manifold window")
    vec = wu.poly_vector(p, deg)
    im = [wu.sq_matrix(1, deg - 1).column(j) for j in range(len(wu.basis(deg - 1)))]
    im_basis, _ = span_rref(im, len(wu.basis(deg)))
    nonzero = vec != 0 and not in_span(vec, list(im_basis), len(wu.basis(deg)))
    return EvaluationVerdict(
        space_name, expr, wu.format_poly(p), nonzero,
        f"value {wu.format_poly(p)} in H^{deg}; Im(Sq1) there has dimension {len(im_basis)}")


# -- two-form symmetry -----------------------------------------------------------


@dataclass
class TwoFormVerdict:
    injective: bool
    matrix: BitMatrix
    images: Tuple[str, ...]
    basis: Tuple[str, ...]
    conclusion: str


def twoform_degree6_injectivity(corrupt_sq1_u: bool = False) -> TwoFormVerdict:
    """Pull back the degree-6 classes of K(Z/2,3) to MO_3 and test injectivity.

    H^6(K(Z/2,3)) is spanned by Sq2Sq1 C and C^2; their pullbacks are
    (w2 w1 + w1^3)U and w3 U, which are independent, so there is no
    degree-6 primary obstruction for 2-form Z/2 symmetries.  The
    ``corrupt_sq1_u`` switch deliberately zeroes Sq1 U to demonstrate that
    the verdict is sensitive to the Wu formula (for negative controls).
    """
    thom = ThomClassModel(3, cutoff_above=3)
    unit_u: Poly = frozenset([thom.base.unit()])
    if corrupt_sq1_u:
        orig_sq = thom.sq

        def sq(k: int, p: Poly, _orig=orig_sq) -> Poly:
            if k == 1:
                # drop the w1·U Wu term, keep only Sq1 of the coefficient
                acc: set = set()
                for m in p:
                    for x in thom.base.sq_k_mono(m, 1):
                        acc.symmetric_difference_update([x])
                return frozenset(acc)
            return _orig(k, p)

        thom.sq = sq  # type: ignore[assignment]
    img_sq2sq1 = thom.apply_word("21", unit_u)
    img_csq = thom.apply_word("3", unit_u)  # C^2 = Sq3 C pulls back to Sq3 U = w3 U
    cols = [thom.vector(img_sq2sq1, 6), thom.vector(img_csq, 6)]
    mat = BitMatrix.from_columns(cols, len(thom.base.basis(3)))
    inj = mat.rank() == 2
    conclusion = (
        "injective: no degree-6 primary obstruction for 2-form Z/2 symmetries"
        if inj else "not injective: a degree-6 obstruction class would be invisible")
    return TwoFormVerdict(inj, mat,
                          (thom.format(img_sq2sq1), thom.format(img_csq)),
                          ("Sq2Sq1C", "C^2"), conclusion)


def verdict_records() -> List[Dict[str, str]]:
    """Machine-readable verdicts for the CLI (degree, class, pullback, verdict)."""
    one = primary_obstruction_oneform()
    wu = evaluate_obstruction_on("WuManifold", "21", "z2")
    spin = evaluate_obstruction_on("SpinPlaceholder")
    two = twoform_degree6_injectivity()
    pb2 = pullback_along_thom_class(2)
    rep_img = pb2.thom.format(pb2.thom.apply_word("21", frozenset([pb2.thom.base.unit()])))
    return [
        {"degree": "5", "class": one.expression, "pullback": rep_img,
         "verdict": f"nonzero on WuManifold: {wu.nonzero_mod_sq1}; zero on spin: "
                    f"{not spin.nonzero_mod_sq1}"},
        {"degree": "6", "class": "Sq2Sq1C, C^2", "pullback": ", ".join(two.images),
         "verdict": "injective" if two.injective else "not injective"},
    ]
