"""The 8-dimensional algebra A(1) generated by Sq1 and Sq2.

Basis monomials are alternating words in the letters {1, 2}, written with
the outermost operation on the left ("12" is Sq1Sq2, i.e. Sq1 applied
after Sq2).  The defining relations are Sq1Sq1 = 0 and Sq2Sq2 = Sq1Sq2Sq1;
these force the two degree-6 words to coincide, and we use "1212" as the
normal form of the top class.  Multiplication goes through a once-built
8x8 table produced by string rewriting.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Set, Tuple

WORDS: Tuple[str, ...] = ("", "1", "2", "12", "21", "121", "212", "1212")
DEGREES: Tuple[int, ...] = (0, 1, 2, 3, 3, 4, 5, 6)
WORD_INDEX: Dict[str, int] = {w: i for i, w in enumerate(WORDS)}
DIM = len(WORDS)
TOP_DEGREE = 6

# Rewriting rules, each mapping a factor to its replacement (None = zero).
_RULES: Tuple[Tuple[str, Optional[str]], ...] = (
    ("11", None),
    ("22", "121"),
    ("2121", "1212"),
)


def reduce_word(word: str) -> Optional[str]:
    """Normal form of a word in the letters {1,2}; None means the word is 0."""
    while True:
        if word_degree(word) > TOP_DEGREE:
            return None
        for pat, rep in _RULES:
            pos = word.find(pat)
            if pos >= 0:
                if rep is None:
                    return None
                word = word[:pos] + rep + word[pos + len(pat):]
                break
        else:
            return word


def word_degree(word: str) -> int:
    return sum(int(c) for c in word)


def all_reductions(word: str) -> Set[Optional[str]]:
    """Normal forms reachable by applying rules at every position, any order."""
    if word_degree(word) > TOP_DEGREE:
        return {None}
    redexes = []
    for pat, rep in _RULES:
        start = 0
        while True:
            pos = word.find(pat, start)
            if pos < 0:
                break
            redexes.append((pos, pat, rep))
            start = pos + 1
    if not redexes:
        return {word}
    out: Set[Optional[str]] = set()
    for pos, pat, rep in redexes:
        if rep is None:
            out.add(None)
        else:
            out |= all_reductions(word[:pos] + rep + word[pos + len(pat):])
    return out


def rewriting_is_confluent(max_len: int = 6) -> bool:
    """Exhaustively check that every word of length <= max_len has one normal form."""
    words = [""]
    for _ in range(max_len):
        words = [w + c for w in words for c in "12"] + words
    for w in set(words):
        if len(all_reductions(w)) != 1:
            return False
    return True


def _build_table() -> Tuple[Tuple[Optional[int], ...], ...]:
    table = []
    for a in WORDS:
        row: List[Optional[int]] = []
        for b in WORDS:
            nf = reduce_word(a + b)
            row.append(None if nf is None else WORD_INDEX[nf])
        table.append(tuple(row))
    return tuple(table)


MUL_TABLE = _build_table()


class A1Element:
    """GF(2) linear combination of the 8 normal-form basis monomials."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits >> DIM:
            raise ValueError("coefficient vector has more than 8 bits")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("A1Element is immutable")

    @classmethod
    def from_word(cls, word: str) -> "A1Element":
        nf = reduce_word(word)
        return cls(0 if nf is None else 1 << WORD_INDEX[nf])

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "A1Element":
        out = cls(0)
        for w in words:
            out = out + cls.from_word(w)
        return out

    def __add__(self, other: "A1Element") -> "A1Element":
        return A1Element(self.bits ^ other.bits)

    def __mul__(self, other: "A1Element") -> "A1Element":
        out = 0
        a = self.bits
        while a:
            i = (a & -a).bit_length() - 1
            a &= a - 1
            b = other.bits
            row = MUL_TABLE[i]
            while b:
                j = (b & -b).bit_length() - 1
                b &= b - 1
                k = row[j]
                if k is not None:
                    out ^= 1 << k
        return A1Element(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, A1Element) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("A1", self.bits))

    def is_zero(self) -> bool:
        return self.bits == 0

    def words(self) -> Tuple[str, ...]:
        return tuple(WORDS[i] for i in range(DIM) if (self.bits >> i) & 1)

    def is_homogeneous(self) -> bool:
        degs = {DEGREES[i] for i in range(DIM) if (self.bits >> i) & 1}
        return len(degs) <= 1

    def degree(self) -> int:
        degs = sorted({DEGREES[i] for i in range(DIM) if (self.bits >> i) & 1})
        if len(degs) != 1:
            raise ValueError(f"degree of a non-homogeneous element: {self}")
        return degs[0]

    def coefficient(self, word: str) -> int:
        nf = reduce_word(word)
        if nf is None:
            return 0
        return (self.bits >> WORD_INDEX[nf]) & 1

    def __repr__(self) -> str:
        if self.bits == 0:
            return "0"
        return " + ".join("Sq" + "·Sq".join(w) if w else "1" for w in self.words())


ZERO = A1Element(0)
ONE = A1Element.from_word("")
SQ1 = A1Element.from_word("1")
SQ2 = A1Element.from_word("2")


def basis() -> Tuple[A1Element, ...]:
    return tuple(A1Element(1 << i) for i in range(DIM))


def graded_dimensions() -> Tuple[int, ...]:
    dims = [0] * (TOP_DEGREE + 1)
    for d in DEGREES:
        dims[d] += 1
    return tuple(dims)


def milnor_primitive(i: int) -> A1Element:
    """Q0 = Sq1 and Q1 = Sq1Sq2 + Sq2Sq1."""
    if i == 0:
        return SQ1
    if i == 1:
        return A1Element.from_words(["12", "21"])
    raise ValueError(f"milnor_primitive expects i in {{0,1}}, got {i}")


def top_class() -> A1Element:
    """The unique nonzero degree-6 element, Sq2Sq2Sq2 in normal form."""
    return A1Element.from_word("222")


def words_of_degree(d: int) -> Tuple[int, ...]:
    return tuple(i for i in range(DIM) if DEGREES[i] == d)
