"""Minimal free resolutions over A(1) and the resulting Ext charts.

The E2 page of the (Baker-Lazarev form) Adams spectral sequence for a
ko-module is Ext over A(1) of its ko-linear cohomology; we compute it from
a minimal resolution, read h0 (and h1) off the Sq1 (Sq2) coefficients of
the boundary matrices, certify collapse where the standard arguments
apply, and assemble 2-complete abelian groups from h0-towers.  Anything
the window cannot justify is reported uncertified, never guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .gf2 import BitMatrix, ColumnSolver
from . import steenrod
from .modules import GradedA1Module
from .steenrod import A1Element, WORDS, WORD_INDEX


class ResolutionError(ValueError):
    pass


@dataclass
class ResolutionStage:
    s: int
    gen_degrees: List[int]
    # boundary[i] = list of (target generator index in stage s-1, A(1) element)
    boundary: List[List[Tuple[int, A1Element]]]
    # stage 0 only: augmentation vectors into the module, per generator
    augmentation: List[Tuple[int, int]] = field(default_factory=list)


@dataclass
class Resolution:
    module: GradedA1Module
    max_s: int
    max_t: int
    stages: List[ResolutionStage]

    def gens(self, s: int) -> List[int]:
        return self.stages[s].gen_degrees if s < len(self.stages) else []


def _free_basis(gen_degrees: Sequence[int], d: int) -> List[Tuple[int, int]]:
    """Basis of the degree-d part of the free module on the given generators."""
    out = []
    for i, t in enumerate(gen_degrees):
        if 0 <= d - t <= steenrod.TOP_DEGREE:
            for widx in steenrod.words_of_degree(d - t):
                out.append((i, widx))
    return out


def minimal_resolution(M: GradedA1Module, max_s: int, max_t: int, jobs: int = 1) -> Resolution:
    """Stages 0..max_s of the minimal free resolution, exact for t <= max_t.

    ``jobs`` parallelizes the independent per-degree kernel computations
    inside a stage; results are assembled in degree order, so the output
    is identical for every worker count.
    """
    if not M.complete and M.hi < max_t:
        raise ResolutionError(
            f"module {M.name or '<anon>'} is truncated at {M.hi}; "
            f"resolving to internal degree {max_t} needs cutoff >= {max_t}")
    lo = M.lo if M.dims else 0

    # current kernel K, with deg -> list of vectors embedding K into the parent
    K = M
    emb: Optional[Dict[int, List[int]]] = None
    prev_fbasis: Dict[int, List[Tuple[int, int]]] = {}
    stages: List[ResolutionStage] = []

    for s in range(max_s + 1):
        gens: List[Tuple[int, int]] = []
        for d in sorted(K.dims):
            if d > max_t:
                continue
            for j in K.generator_coords(d):
                gens.append((d, j))
        gen_degrees = [t for t, _ in gens]
        stage = ResolutionStage(s, gen_degrees, [])
        if s == 0:
            stage.augmentation = [(t, 1 << j) for t, j in gens]
        else:
            for t, j in gens:
                vec = emb[t][j] if emb is not None else (1 << j)
                entries: Dict[int, int] = {}
                for p, (gi, widx) in enumerate(prev_fbasis.get(t, [])):
                    if (vec >> p) & 1:
                        entries[gi] = entries.get(gi, 0) ^ (1 << widx)
                stage.boundary.append(
                    sorted(((gi, A1Element(bits)) for gi, bits in entries.items()),
                           key=lambda e: e[0])
                )
        stages.append(stage)
        if s == max_s:
            break

        # kernel of F_s -> K, degreewise
        fbasis: Dict[int, List[Tuple[int, int]]] = {}
        for d in range(lo, max_t + 1):
            fb = _free_basis(gen_degrees, d)
            if fb:
                fbasis[d] = fb
        def kernel_at(d: int) -> Tuple[int, List[int]]:
            fb = fbasis[d]
            cols = []
            for i, widx in fb:
                t_i, j_i = gens[i]
                cols.append(K.act_word(WORDS[widx], t_i).matvec(1 << j_i))
            mat = BitMatrix.from_columns(cols, K.dim(d))
            return d, list(mat.kernel_basis())

        ker_vecs: Dict[int, List[int]] = {}
        if jobs > 1 and len(fbasis) > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(kernel_at, sorted(fbasis)))
        else:
            results = [kernel_at(d) for d in sorted(fbasis)]
        for d, kb in results:
            if kb:
                ker_vecs[d] = kb

        dims = {d: len(v) for d, v in ker_vecs.items()}
        ker_solvers = {d: ColumnSolver(v) for d, v in ker_vecs.items()}
        sq1: Dict[int, BitMatrix] = {}
        sq2: Dict[int, BitMatrix] = {}
        for shift, store, letter in ((1, sq1, 1), (2, sq2, 2)):
            lw = WORD_INDEX[str(letter)]
            for d, vecs in ker_vecs.items():
                if d + shift > max_t or (d + shift) not in ker_vecs:
                    continue
                src_fb = fbasis[d]
                tgt_index = {bw: p for p, bw in enumerate(fbasis[d + shift])}
                solver = ker_solvers[d + shift]
                cols = []
                for v in vecs:
                    w_img = 0
                    vv = v
                    while vv:
                        p = (vv & -vv).bit_length() - 1
                        vv &= vv - 1
                        gi, widx = src_fb[p]
                        prod = steenrod.MUL_TABLE[lw][widx]
                        if prod is not None:
                            w_img ^= 1 << tgt_index[(gi, prod)]
                    x = solver.solve(w_img)
                    if x is None:
                        raise ResolutionError("kernel not closed under the action")
                    cols.append(x)
                store[d] = BitMatrix.from_columns(cols, dims[d + shift])
        K = GradedA1Module(dims, sq1, sq2, max_t, None, complete=False,
                           name=f"K{s}({M.name})")
        emb = ker_vecs
        prev_fbasis = fbasis

    return Resolution(M, max_s, max_t, stages)


def verify_resolution(res: Resolution) -> None:
    """Assert boundary∘boundary = 0 and minimality (no unit coefficients)."""
    for s, stage in enumerate(res.stages):
        for i, entries in enumerate(stage.boundary):
            for gi, elt in entries:
                if elt.coefficient(""):
                    raise ResolutionError(f"non-minimal boundary at stage {s}")
        if s < 1:
            continue
        prev = res.stages[s - 1]
        for i, entries in enumerate(stage.boundary):
            if s == 1:
                acc: Dict[int, int] = {}
                for gi, elt in entries:
                    t_gi, vec = prev.augmentation[gi]
                    img = res.module.act_element(elt, t_gi).matvec(vec) if not elt.is_zero() else 0
                    d = t_gi + elt.degree() if not elt.is_zero() else None
                    if d is not None and (res.module.complete or d <= res.module.hi):
                        acc[d] = acc.get(d, 0) ^ img
                if any(v for v in acc.values()):
                    raise ResolutionError(f"d∘d ≠ 0 at stage 1, generator {i}")
            else:
                acc2: Dict[int, A1Element] = {}
                for gi, elt in entries:
                    for gj, elt2 in prev.boundary[gi]:
                        prodelt = elt * elt2
                        acc2[gj] = acc2.get(gj, A1Element(0)) + prodelt
                if any(not v.is_zero() for v in acc2.values()):
                    raise ResolutionError(f"d∘d ≠ 0 at stage {s}, generator {i}")


# -- charts -------------------------------------------------------------------


@dataclass
class ExtChart:
    max_s: int
    max_t: int
    dims: Dict[Tuple[int, int], int]
    h0: Dict[Tuple[int, int], BitMatrix]
    h1: Dict[Tuple[int, int], BitMatrix]

    def dim(self, s: int, n: int) -> int:
        return self.dims.get((s, n), 0)

    def reliable(self, s: int, n: int) -> bool:
        return s + n <= self.max_t

    def h0_map(self, s: int, n: int) -> BitMatrix:
        m = self.h0.get((s, n))
        if m is None:
            return BitMatrix.zeros(self.dim(s + 1, n), self.dim(s, n))
        return m

    def h0_power(self, s: int, n: int, k: int) -> BitMatrix:
        out = BitMatrix.identity(self.dim(s, n))
        for j in range(k):
            out = self.h0_map(s + j, n) @ out
        return out

    def columns(self) -> List[int]:
        return sorted({n for (_, n) in self.dims})

    def add(self, other: "ExtChart") -> "ExtChart":
        max_s = min(self.max_s, other.max_s)
        max_t = min(self.max_t, other.max_t)
        dims: Dict[Tuple[int, int], int] = {}
        h0: Dict[Tuple[int, int], BitMatrix] = {}
        h1: Dict[Tuple[int, int], BitMatrix] = {}
        keys = {k for k in self.dims if k[0] <= max_s} | {k for k in other.dims if k[0] <= max_s}
        for s, n in keys:
            dims[(s, n)] = self.dim(s, n) + other.dim(s, n)

        def block(a: BitMatrix, b: BitMatrix) -> BitMatrix:
            rows = list(a.rows) + [r << a.ncols for r in b.rows]
            return BitMatrix(rows, a.ncols + b.ncols)

        for s, n in keys:
            if dims.get((s + 1, n)):
                h0[(s, n)] = block(self.h0_map(s, n), other.h0_map(s, n))
            if dims.get((s + 1, n + 1)):
                a = self.h1.get((s, n), BitMatrix.zeros(self.dim(s + 1, n + 1), self.dim(s, n)))
                b = other.h1.get((s, n), BitMatrix.zeros(other.dim(s + 1, n + 1), other.dim(s, n)))
                h1[(s, n)] = block(a, b)
        return ExtChart(max_s, max_t, dims, h0, h1)

    def suspend(self, k: int) -> "ExtChart":
        return ExtChart(
            self.max_s, self.max_t + k,
            {(s, n + k): v for (s, n), v in self.dims.items()},
            {(s, n + k): v for (s, n), v in self.h0.items()},
            {(s, n + k): v for (s, n), v in self.h1.items()},
        )


def ext_chart(res: Resolution) -> ExtChart:
    dims: Dict[Tuple[int, int], int] = {}
    index: Dict[Tuple[int, int], List[int]] = {}
    for s, stage in enumerate(res.stages):
        for i, t in enumerate(stage.gen_degrees):
            key = (s, t - s)
            dims[key] = dims.get(key, 0) + 1
            index.setdefault(key, []).append(i)
    h0: Dict[Tuple[int, int], BitMatrix] = {}
    h1: Dict[Tuple[int, int], BitMatrix] = {}
    for s in range(1, len(res.stages)):
        stage = res.stages[s]
        prev = res.stages[s - 1]
        # h0 = Sq1 coefficient: (s-1, n) -> (s, n); h1 = Sq2: (s-1, n) -> (s, n+1)
        for word, store, dshift in (("1", h0, 1), ("2", h1, 2)):
            for tprime in sorted(set(prev.gen_degrees)):
                src_key = (s - 1, tprime - (s - 1))
                src = index.get(src_key, [])
                tgt = index.get((s, tprime + dshift - s), [])
                if not src or not tgt:
                    continue
                rows = []
                for ti in tgt:
                    r = 0
                    entries = dict(stage.boundary[ti])
                    for cpos, si in enumerate(src):
                        elt = entries.get(si)
                        if elt is not None and elt.coefficient(word):
                            r |= 1 << cpos
                    rows.append(r)
                store[src_key] = BitMatrix(rows, len(src))
    return ExtChart(res.max_s, res.max_t, dims, h0, h1)


# -- collapse certification ----------------------------------------------------


@dataclass
class Certificate:
    report_max_s: int
    certified: Dict[Tuple[int, int], bool]
    threats: List[str]

    def column_ok(self, chart: ExtChart, n: int) -> bool:
        return all(
            self.certified.get((s, n), True)
            for s in range(self.report_max_s + 1)
            if chart.dim(s, n)
        )


def collapse_certificate(chart: ExtChart, report_max_s: int,
                         columns: Optional[Sequence[int]] = None) -> Certificate:
    """Certify permanence of chart classes within the reported window.

    A differential d_r moves (s, n) -> (s+r, n-1), so all differentials
    into a column come from the column one to its right.  A class is
    certified when every in-window threat on its column pair is excluded,
    either because the target bidegree vanishes or by h0-linearity:
    h0-nilpotent sources cannot hit a zone where a power of h0 is
    injective.  Everything else is reported uncertified, never assumed.
    """
    cols = sorted(columns if columns is not None else chart.columns())
    certified: Dict[Tuple[int, int], bool] = {}
    threats: List[str] = []

    def col_top(n: int) -> int:
        return min(chart.max_s, chart.max_t - n)

    def nilpotence(s: int, n: int) -> Optional[int]:
        for k in range(1, col_top(n) - s + 1):
            if chart.h0_power(s, n, k).is_zero():
                return k
        return None

    def pair_excluded(n_src: int) -> Tuple[bool, List[str]]:
        """No differentials (any page) from column n_src to n_src - 1, in-window."""
        notes = []
        ok = True
        for s in range(0, report_max_s + 1):
            if chart.dim(s, n_src) == 0:
                continue
            for r in range(2, report_max_s - s + 1):
                tgt = (s + r, n_src - 1)
                if chart.dim(*tgt) == 0:
                    continue
                if not (chart.reliable(s, n_src) and chart.reliable(*tgt)):
                    ok = False
                    notes.append(f"d{r}: ({s},{n_src})→{tgt} beyond reliable window")
                    continue
                k = nilpotence(s, n_src)
                if k is None:
                    ok = False
                    notes.append(f"d{r}: ({s},{n_src})→{tgt} source not h0-nilpotent in window")
                    continue
                if tgt[0] + k > col_top(n_src - 1):
                    ok = False
                    notes.append(f"d{r}: ({s},{n_src})→{tgt} h0-kernel check exceeds window")
                    continue
                power = chart.h0_power(tgt[0], tgt[1], k)
                if power.rank() != chart.dim(*tgt):
                    ok = False
                    notes.append(f"d{r}: ({s},{n_src})→{tgt} not excluded (h0^{k} has kernel)")
        return ok, notes

    pair_cache: Dict[int, Tuple[bool, List[str]]] = {}

    def pair(n_src: int) -> Tuple[bool, List[str]]:
        if n_src not in pair_cache:
            pair_cache[n_src] = pair_excluded(n_src)
        return pair_cache[n_src]

    for n in cols:
        for s in range(report_max_s + 1):
            if chart.dim(s, n) == 0:
                continue
            ok = True
            # outgoing: needs the (n -> n-1) pair unless no in-window target exists
            if any(chart.dim(s + r, n - 1) for r in range(2, report_max_s - s + 1)):
                p_ok, notes = pair(n)
                if not p_ok:
                    ok = False
                    threats.extend(notes)
            # incoming: from column n+1
            if any(chart.dim(s - r, n + 1) for r in range(2, s + 1)):
                p_ok, notes = pair(n + 1)
                if not p_ok:
                    ok = False
                    threats.extend(notes)
            certified[(s, n)] = ok
    return Certificate(report_max_s, certified, sorted(set(threats)))


# -- group assembly -------------------------------------------------------------


@dataclass
class DegreeReport:
    degree: int
    free_rank: int
    torsion: Tuple[int, ...]  # 2-power orders, descending
    certified: bool
    warnings: Tuple[str, ...] = ()

    def group_str(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def same_group(self, free_rank: int, torsion: Sequence[int]) -> bool:
        return self.free_rank == free_rank and tuple(sorted(torsion, reverse=True)) == self.torsion


def assemble_column(chart: ExtChart, n: int, certified: bool,
                    report_max_s: int) -> DegreeReport:
    """Read the 2-complete group of one column from its h0-strands."""
    # only trust bidegrees with t = s + n inside the resolved range
    s_top = min(chart.max_s, chart.max_t - n)

    def rank_power(s: int, j: int) -> int:
        if s < 0 or chart.dim(s, n) == 0:
            return 0
        if s + j > s_top:
            return 0
        return chart.h0_power(s, n, j).rank()

    free_rank = 0
    torsion: List[int] = []
    warnings: List[str] = []
    high_starts = 0
    for s in range(0, s_top + 1):
        if chart.dim(s, n) == 0 and rank_power(s, 0) == 0:
            continue
        lmax = s_top - s + 1
        reach_top = rank_power(s, lmax - 1) - rank_power(s - 1, lmax)
        starts_here = rank_power(s, 0) - rank_power(s - 1, 1)
        if s > report_max_s and starts_here > 0:
            high_starts += starts_here
        if reach_top:
            free_rank += reach_top
        for ell in range(1, lmax):
            cnt_ge = rank_power(s, ell - 1) - rank_power(s - 1, ell)
            cnt_gt = rank_power(s, ell) - rank_power(s - 1, ell + 1)
            exact = cnt_ge - cnt_gt
            for _ in range(max(exact, 0)):
                torsion.append(2 ** ell)
    torsion.sort(reverse=True)
    if high_starts:
        certified = False
        warnings.append(
            f"{high_starts} strand(s) begin above the certified filtration "
            f"window (s > {report_max_s}); their differentials are unchecked")
    if free_rank:
        warnings.append(f"tower reaches window boundary (s={s_top}); reported as 2-adic Z")
    if len(torsion) > 1:
        warnings.append("extensions unresolved beyond h0 between summands")
    return DegreeReport(n, free_rank, tuple(torsion), certified, tuple(warnings))


def assemble_groups(chart: ExtChart, cert: Certificate, max_n: int) -> List[DegreeReport]:
    out = []
    for n in range(0, max_n + 1):
        ok = cert.column_ok(chart, n)
        out.append(assemble_column(chart, n, ok, cert.report_max_s))
    return out


# -- rendering -------------------------------------------------------------------


def chart_tsv(chart: ExtChart, max_n: int, max_s: int) -> str:
    lines = ["s\tn\tdim\th0rank"]
    for n in range(0, max_n + 1):
        for s in range(0, max_s + 1):
            d = chart.dim(s, n)
            if d == 0:
                continue
            lines.append(f"{s}\t{n}\t{d}\t{chart.h0_map(s, n).rank()}")
    return "\n".join(lines) + "\n"


def chart_ascii(chart: ExtChart, max_n: int, max_s: int) -> str:
    """Adams-chart style grid: one column per n, dots stacked by s, '|' for h0."""
    colw = 4
    lines = []
    for s in range(max_s, -1, -1):
        cells = []
        for n in range(0, max_n + 1):
            d = chart.dim(s, n)
            link = "|" if s > 0 and chart.h0_map(s - 1, n).rank() > 0 else " "
            if d == 0:
                cells.append("   ".ljust(colw))
            else:
                dot = "." if d == 1 else str(d)
                cells.append(f"{link}{dot}".ljust(colw))
        lines.append(f"{s:>3} " + "".join(cells))
    lines.append("    " + "".join(str(n).ljust(colw) for n in range(0, max_n + 1)))
    return "\n".join(lines) + "\n"
