"""Dense bit-packed linear algebra over GF(2).

Rows are Python ints used as bit vectors (bit j = column j), so row
operations are single XORs and everything stays exact.  Matrices act on
column vectors, which are also ints: ``(M @ x)_i = parity(rows[i] & x)``.
All operations are deterministic: pivots are chosen leftmost-column,
lowest-row-index.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def vector_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b & 1:
            v |= 1 << j
    return v


def vector_to_bits(v: int, n: int) -> Tuple[int, ...]:
    return tuple((v >> j) & 1 for j in range(n))


class BitMatrix:
    """Immutable GF(2) matrix with bit-packed rows."""

    __slots__ = ("rows", "nrows", "ncols", "_rref")

    def __init__(self, rows: Iterable[int], ncols: int):
        rows = tuple(int(r) for r in rows)
        if ncols < 0:
            raise ValueError("ncols must be nonnegative")
        mask = (1 << ncols) - 1
        for r in rows:
            if r & ~mask:
                raise ValueError("row has bits outside [0, ncols)")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_rref", None)

    def __setattr__(self, *a):  # pragma: no cover - guard rail
        raise AttributeError("BitMatrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls([vector_from_bits(row) for row in entries], ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        rows = []
        for i in range(nrows):
            r = 0
            for j, c in enumerate(columns):
                if (c >> i) & 1:
                    r |= 1 << j
            rows.append(r)
        return cls(rows, len(columns))

    # -- basic access --------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.rows[i]

    def column(self, j: int) -> int:
        c = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def columns(self) -> List[int]:
        return [self.column(j) for j in range(self.ncols)]

    def to_entries(self) -> List[List[int]]:
        return [list(vector_to_bits(r, self.ncols)) for r in self.rows]

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.ncols))

    def __repr__(self) -> str:
        body = ";".join("".join(str(b) for b in vector_to_bits(r, self.ncols)) for r in self.rows)
        return f"BitMatrix({self.nrows}x{self.ncols}:{body})"

    # -- algebra -------------------------------------------------------

    def matvec(self, v: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if _parity(r & v):
                out |= 1 << i
        return out

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Composition self∘other (apply ``other`` first)."""
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        rows = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                k = (rr & -rr).bit_length() - 1
                acc ^= other.rows[k]
                rr &= rr - 1
            rows.append(acc)
        return BitMatrix(rows, other.ncols)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return self.matmul(other)

    def add(self, other: "BitMatrix") -> "BitMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in add")
        return BitMatrix([a ^ b for a, b in zip(self.rows, other.rows)], self.ncols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        return BitMatrix(
            [a | (b << self.ncols) for a, b in zip(self.rows, other.rows)],
            self.ncols + other.ncols,
        )

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch in vstack")
        return BitMatrix(self.rows + other.rows, self.ncols)

    # -- elimination ----------------------------------------------------

    def rref(self) -> Tuple["BitMatrix", Tuple[int, ...]]:
        """Reduced row-echelon form and the strictly increasing pivot columns."""
        cached = object.__getattribute__(self, "_rref")
        if cached is not None:
            return cached
        work = list(self.rows)
        pivots: List[int] = []
        r = 0
        for col in range(self.ncols):
            sel = None
            for i in range(r, len(work)):
                if (work[i] >> col) & 1:
                    sel = i
                    break
            if sel is None:
                continue
            work[r], work[sel] = work[sel], work[r]
            for i in range(len(work)):
                if i != r and ((work[i] >> col) & 1):
                    work[i] ^= work[r]
            pivots.append(col)
            r += 1
            if r == len(work):
                break
        result = (BitMatrix(work, self.ncols), tuple(pivots))
        object.__setattr__(self, "_rref", result)
        return result

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> Tuple[int, ...]:
        """Deterministic basis of {v : M·v = 0}, one vector per free column."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free_cols = [j for j in range(self.ncols) if j not in pivot_set]
        basis = []
        for f in free_cols:
            v = 1 << f
            for i, p in enumerate(pivots):
                if (red.rows[i] >> f) & 1:
                    v |= 1 << p
            basis.append(v)
        return tuple(basis)

    def solve(self, b: int) -> Optional[int]:
        """Some x with M·x = b, or None when inconsistent (free vars set to 0)."""
        if b >> self.nrows:
            raise ValueError("rhs has bits beyond nrows")
        aug = BitMatrix(
            [r | (((b >> i) & 1) << self.ncols) for i, r in enumerate(self.rows)],
            self.ncols + 1,
        )
        red, pivots = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        x = 0
        for i, p in enumerate(pivots):
            if (red.rows[i] >> self.ncols) & 1:
                x |= 1 << p
        return x

    def image_contains(self, b: int) -> bool:
        return self.solve(b) is not None


class ColumnSolver:
    """Express vectors in the span of a fixed list of columns, many times.

    Builds a Gaussian basis keyed by lowest set bit once; each solve is a
    single reduction pass.  solve(b) returns a combination mask m with
    XOR_{j in m} columns[j] = b, or None when b is outside the span.
    """

    __slots__ = ("table",)

    def __init__(self, columns: Sequence[int]):
        self.table = {}
        for j, c in enumerate(columns):
            v, m = c, 1 << j
            while v:
                low = v & -v
                hit = self.table.get(low)
                if hit is None:
                    self.table[low] = (v, m)
                    break
                v ^= hit[0]
                m ^= hit[1]

    def solve(self, b: int) -> Optional[int]:
        v, m = b, 0
        while v:
            hit = self.table.get(v & -v)
            if hit is None:
                return None
            v ^= hit[0]
            m ^= hit[1]
        return m

    def contains(self, b: int) -> bool:
        return self.solve(b) is not None


def span_rref(vectors: Iterable[int], ncols: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Canonical (rref) basis of the span of the given vectors, with pivots."""
    m, pivots = BitMatrix(vectors, ncols).rref()
    return tuple(r for r in m.rows if r), pivots


def in_span(v: int, vectors: Sequence[int], ncols: int) -> bool:
    basis, _ = span_rref(vectors, ncols)
    return len(span_rref(list(basis) + [v], ncols)[0]) == len(basis)


def complement_coords(vectors: Sequence[int], ncols: int) -> Tuple[int, ...]:
    """Coordinates j such that {e_j} extends a basis of span(vectors) to F2^ncols."""
    _, pivots = span_rref(vectors, ncols)
    pivot_set = set(pivots)
    return tuple(j for j in range(ncols) if j not in pivot_set)


def solve_linear_system(rows: Sequence[int], rhs: Sequence[int], nvars: int) -> Optional[int]:
    """Solve a stacked GF(2) system (one row per equation) for an assignment."""
    mat = BitMatrix(rows, nvars)
    b = vector_from_bits(rhs)
    return mat.solve(b)
