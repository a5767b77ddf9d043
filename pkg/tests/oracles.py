"""Independent oracles used to pin expected values before testing the engine.

Everything here deliberately avoids the library's module/resolution code
paths: the bar-complex Ext computation works with raw word tuples and the
multiplication table only, the ideal closures work with word sets, and the
brute-force GF(2) helpers enumerate vectors directly.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set, Tuple

from a1bordism.steenrod import DEGREES, MUL_TABLE, WORDS

NONUNIT = [i for i, w in enumerate(WORDS) if w]


# -- brute-force GF(2) ---------------------------------------------------------


def brute_rowspace(rows: Sequence[int]) -> Set[int]:
    space = set()
    for mask in range(1 << len(rows)):
        acc = 0
        for i, r in enumerate(rows):
            if (mask >> i) & 1:
                acc ^= r
        space.add(acc)
    return space


def brute_kernel(rows: Sequence[int], ncols: int) -> Set[int]:
    out = set()
    for v in range(1 << ncols):
        if all(bin(r & v).count("1") % 2 == 0 for r in rows):
            out.add(v)
    return out


def brute_solutions(rows: Sequence[int], b: int, ncols: int) -> Set[int]:
    out = set()
    for v in range(1 << ncols):
        img = 0
        for i, r in enumerate(rows):
            if bin(r & v).count("1") % 2:
                img |= 1 << i
        if img == b:
            out.add(v)
    return out


# -- word-level A(1) helpers ----------------------------------------------------


def word_mul(i: int, j: int) -> Optional[int]:
    return MUL_TABLE[i][j]


def left_ideal_word_span(generators: Sequence[Set[int]]) -> Dict[int, Set[frozenset]]:
    """Degreewise GF(2) span of A(1)·(sums of words), as sets of word-sets."""
    by_degree: Dict[int, List[frozenset]] = {}
    for gen in generators:
        for a in range(len(WORDS)):
            acc: Set[int] = set()
            for g in gen:
                p = word_mul(a, g)
                if p is not None:
                    acc.symmetric_difference_update([p])
            if acc:
                degs = {DEGREES[i] for i in acc}
                assert len(degs) == 1
                by_degree.setdefault(degs.pop(), []).append(frozenset(acc))
    spans: Dict[int, Set[frozenset]] = {}
    for d, elts in by_degree.items():
        span: Set[frozenset] = {frozenset()}
        for e in elts:
            if e in span:
                continue
            span |= {frozenset(set(x) ^ set(e)) for x in list(span)}
        spans[d] = span
    return spans


def quotient_dims_by_left_ideal(generators: Sequence[Set[int]]) -> Dict[int, int]:
    """Graded dims of A(1)/(A(1)·gens), by brute-force closure over words."""
    spans = left_ideal_word_span(generators)
    dims = {}
    for d in range(0, 7):
        total = sum(1 for i in range(len(WORDS)) if DEGREES[i] == d)
        span = spans.get(d, {frozenset()})
        # |span| = 2^rank
        rank = (len(span) - 1).bit_length()
        dims[d] = total - rank
    return dims


# -- bar-complex Ext over A(1) ---------------------------------------------------


def bar_basis(s: int, t: int) -> List[Tuple[int, ...]]:
    """Tuples of non-unit basis words of length s with total degree t."""
    out: List[Tuple[int, ...]] = []

    def rec(remaining: int, slots: int, acc: Tuple[int, ...]):
        if slots == 0:
            if remaining == 0:
                out.append(acc)
            return
        for i in NONUNIT:
            d = DEGREES[i]
            if d <= remaining - (slots - 1):
                rec(remaining - d, slots - 1, acc + (i,))

    rec(t, s, ())
    return out


def bar_differential(tup: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """Images of the bar differential, as a mod-2 list of tuples."""
    acc: Dict[Tuple[int, ...], int] = {}
    for i in range(len(tup) - 1):
        p = word_mul(tup[i], tup[i + 1])
        if p is None or not WORDS[p]:
            continue
        merged = tup[:i] + (p,) + tup[i + 2:]
        acc[merged] = acc.get(merged, 0) ^ 1
    return [k for k, v in acc.items() if v]


class BarExt:
    """Ext_{A(1)}^{s,t}(F2, F2) dims and h0-structure from the bar complex."""

    def __init__(self, max_s: int, max_t: int):
        self.max_s = max_s
        self.max_t = max_t
        self._basis: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}
        self._index: Dict[Tuple[int, int], Dict[Tuple[int, ...], int]] = {}
        self._homology: Dict[Tuple[int, int], Tuple[List[int], List[int]]] = {}
        for s in range(0, max_s + 2):
            for t in range(0, max_t + 2):
                b = bar_basis(s, t)
                self._basis[(s, t)] = b
                self._index[(s, t)] = {x: k for k, x in enumerate(b)}

    def _d_matrix_rows(self, s: int, t: int) -> List[int]:
        """Differential C_{s,t} -> C_{s-1,t} as row masks over the source basis."""
        src = self._basis[(s, t)]
        tgt_index = self._index[(s - 1, t)]
        rows = [0] * len(tgt_index)
        for j, tup in enumerate(src):
            for img in bar_differential(tup):
                rows[tgt_index[img]] ^= 1 << j
        return rows

    def _rank(self, rows: List[int]) -> int:
        work = [r for r in rows if r]
        rank = 0
        while work:
            pivot = work.pop()
            if pivot == 0:
                continue
            low = pivot & -pivot
            rank += 1
            work = [(w ^ pivot) if (w & low) else w for w in work]
        return rank

    def homology_basis(self, s: int, t: int) -> List[int]:
        """Vectors in C_{s,t} spanning cycles, with boundaries first."""
        key = (s, t)
        if key in self._homology:
            return self._homology[key][0]
        n = len(self._basis[key])
        if n == 0:
            self._homology[key] = ([], [])
            return []
        out_rows = self._d_matrix_rows(s, t) if s >= 1 else []
        from a1bordism.gf2 import BitMatrix

        cyc = list(BitMatrix(out_rows, n).kernel_basis()) if s >= 1 else [1 << j for j in range(n)]
        bnd: List[int] = []
        if s + 1 <= self.max_s + 1:
            up = self._basis[(s + 1, t)]
            for j, tup in enumerate(up):
                img = 0
                for x in bar_differential(tup):
                    img ^= 1 << self._index[key][x]
                if img:
                    bnd.append(img)
        self._homology[key] = (cyc, bnd)
        return cyc

    def ext_dim(self, s: int, t: int) -> int:
        cyc = self.homology_basis(s, t)
        _, bnd = self._homology[(s, t)]
        from a1bordism.gf2 import span_rref

        n = len(self._basis[(s, t)])
        rank_c = len(span_rref(cyc, n)[0])
        rank_b = len(span_rref(bnd, n)[0])
        return rank_c - rank_b

    def h0_nonzero(self, s: int, n: int) -> bool:
        """Whether h0: Ext^{s, n+s} -> Ext^{s+1, n+s+1} is nonzero.

        h0 is concatenation by [Sq1] on the bar complex, a chain map; its
        induced action on homology is computed on a cycle representative.
        """
        from a1bordism.gf2 import span_rref

        sq1 = WORDS.index("1")
        t = n + s
        cyc = self.homology_basis(s, t)
        _, bnd = self._homology[(s, t)]
        nn = len(self._basis[(s, t)])
        bnd_basis = list(span_rref(bnd, nn)[0])
        src = self._basis[(s, t)]
        tgt_index = self._index[(s + 1, t + 1)]
        up_cyc = self.homology_basis(s + 1, t + 1)
        _, up_bnd = self._homology[(s + 1, t + 1)]
        up_n = len(self._basis[(s + 1, t + 1)])
        up_bnd_basis = list(span_rref(up_bnd, up_n)[0])
        for v in cyc:
            from a1bordism.gf2 import in_span

            if in_span(v, bnd_basis, nn):
                continue
            img = 0
            vv = v
            while vv:
                j = (vv & -vv).bit_length() - 1
                vv &= vv - 1
                img ^= 1 << tgt_index[(sq1,) + src[j]]
            if not in_span(img, up_bnd_basis, up_n):
                return True
        return False

    def groups_by_stem(self, max_n: int) -> Dict[int, Tuple[int, List[int]]]:
        """(free_rank, torsion orders) per stem for multiplicity-one columns.

        Every (s, n) of Ext(F2) in this window has dimension <= 1, so
        strands are maximal runs of nonzero dots linked by nonzero h0; a
        run reaching the window top is a 2-adic Z.
        """
        out: Dict[int, Tuple[int, List[int]]] = {}
        for n in range(0, max_n + 1):
            s_top = min(self.max_s, self.max_t - n - 1)
            dims = {s: self.ext_dim(s, n + s) for s in range(0, s_top + 1)}
            assert all(d <= 1 for d in dims.values()), "column has multiplicity > 1"
            free = 0
            torsion: List[int] = []
            s = 0
            while s <= s_top:
                if dims.get(s, 0) == 0:
                    s += 1
                    continue
                length = 1
                while s + length <= s_top and dims.get(s + length, 0) and \
                        self.h0_nonzero(s + length - 1, n):
                    length += 1
                if s + length > s_top:
                    free += 1
                else:
                    torsion.append(2 ** length)
                s += length
            out[n] = (free, sorted(torsion, reverse=True))
        return out


# -- Serre-basis dimensions for K(Z/2, n) ----------------------------------------


def admissible_sequences(max_sum: int) -> List[Tuple[int, ...]]:
    """All admissible sequences (a1 >= 2 a2 >= ...) with positive entries, sum <= max_sum."""
    out: List[Tuple[int, ...]] = [()]
    frontier: List[Tuple[int, ...]] = [()]
    while frontier:
        new: List[Tuple[int, ...]] = []
        for seq in frontier:
            lo = 2 * seq[0] if seq else 1
            for a in range(lo, max_sum - sum(seq) + 1):
                ext = (a,) + seq
                new.append(ext)
                out.append(ext)
        frontier = new
    return out


def admissible_generator_degrees(n: int, max_degree: int) -> List[int]:
    """Degrees of the polynomial generators Sq^I ι of H^*(K(Z/2,n)).

    Serre: I admissible with excess(I) = 2 a1 - sum(I) < n (the empty I
    giving ι itself), in degree n + sum(I).
    """
    degs = []
    for seq in admissible_sequences(max_degree - n):
        if seq and 2 * seq[0] - sum(seq) >= n:
            continue
        degs.append(n + sum(seq))
    return sorted(degs)


def kzn_dims(n: int, max_degree: int) -> Dict[int, int]:
    """Graded dims of H^*(K(Z/2,n)) from the Serre polynomial generators."""
    gens = admissible_generator_degrees(n, max_degree)
    dims = {0: 1}
    for g in gens:
        new = dict(dims)
        for d, c in dims.items():
            k = 1
            while d + k * g <= max_degree:
                new[d + k * g] = new.get(d + k * g, 0) + c
                k += 1
        dims = new
    return {d: c for d, c in dims.items() if d <= max_degree}
