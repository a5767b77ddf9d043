from __future__ import annotations

import random

import pytest

from a1bordism import ext as ex
from a1bordism import modules as md
from a1bordism import spaces as sp
from a1bordism.ext import (assemble_groups, chart_ascii, chart_tsv,
                           collapse_certificate, ext_chart, minimal_resolution,
                           verify_resolution)
from a1bordism.modules import catalog, free_module
from oracles import BarExt


# the hand-built minimal-resolution fixture for F2 over A(1): Ext is
# F2[h0, h1, v, w]/(h0 h1, h1^3, h1 v, v^2 = h0^2 w) with |h0| = (1,1),
# |h1| = (1,2), |v| = (3,7), |w| = (4,12); in the window n <= 8, s <= 12
# the basis monomials give exactly the bidegrees below.
F2_FIXTURE_DIMS = (
    {(s, 0): 1 for s in range(0, 13)}
    | {(1, 1): 1, (2, 2): 1}
    | {(s, 4): 1 for s in range(3, 13)}
    | {(s, 8): 1 for s in range(4, 13)}
)


def f2_chart(max_s=16, max_t=26):
    # resolve past the reported window so kernel checks near the top close
    res = minimal_resolution(md.f2_module(), max_s=max_s, max_t=max_t)
    verify_resolution(res)
    return ext_chart(res)


def test_resolution_of_free_module_is_stage_zero():
    res = minimal_resolution(free_module(), max_s=6, max_t=12)
    assert res.gens(0) == [0]
    for s in range(1, 7):
        assert res.gens(s) == []


def test_question_mark_resolution_low_stages():
    # hand computation: the kernel of A(1) -> Q is generated by Sq1 (t=1)
    # and Sq2Sq1Sq2 (t=5); the stage-2 generators sit at t = 2, 6, 7
    res = minimal_resolution(catalog("Q"), max_s=4, max_t=12)
    verify_resolution(res)
    assert res.gens(0) == [0]
    assert res.gens(1) == [1, 5]
    assert res.gens(2) == [2, 6, 7]


def test_verify_resolution_on_random_sums():
    rng = random.Random(404)
    for _ in range(12):
        m = catalog(rng.choice(["M0", "M1", "J", "Q", "R2"]))
        m = m.direct_sum(catalog(rng.choice(["F2", "J", "Q"])).suspend(rng.randint(0, 2)))
        res = minimal_resolution(m, max_s=6, max_t=12)
        verify_resolution(res)  # boundary∘boundary = 0 and minimality


def test_resolution_refuses_truncated_module():
    P = md.pin_minus_cell(8)
    with pytest.raises(ex.ResolutionError, match="cutoff >= 12"):
        minimal_resolution(P, max_s=4, max_t=12)


def test_f2_resolution_matches_handbuilt_fixture():
    chart = f2_chart()
    got = {(s, n): v for (s, n), v in chart.dims.items()
           if v and s <= 12 and 0 <= n <= 8 and s + n <= 20}
    assert got == F2_FIXTURE_DIMS


def test_f2_resolution_matches_bar_complex_oracle():
    # independent oracle: homology of the reduced bar complex of A(1)
    bx = BarExt(max_s=8, max_t=12)
    chart = f2_chart(max_s=8, max_t=12)
    for s in range(0, 9):
        for t in range(0, 13):
            assert chart.dim(s, t - s) == bx.ext_dim(s, t), (s, t)


def test_f2_groups_match_bar_complex_oracle():
    bx = BarExt(max_s=9, max_t=13)
    oracle = bx.groups_by_stem(4)
    chart = f2_chart()
    cert = collapse_certificate(chart, report_max_s=12)
    rows = assemble_groups(chart, cert, max_n=4)
    for n in range(5):
        free, torsion = oracle[n]
        assert rows[n].free_rank == free, n
        assert list(rows[n].torsion) == torsion, n


def test_f2_groups_through_eight():
    chart = f2_chart()
    cert = collapse_certificate(chart, report_max_s=12)
    rows = assemble_groups(chart, cert, max_n=8)
    expect = [(1, ()), (0, (2,)), (0, (2,)), (0, ()), (1, ()),
              (0, ()), (0, ()), (0, ()), (1, ())]
    for n, (fr, tors) in enumerate(expect):
        assert rows[n].free_rank == fr and rows[n].torsion == tors, n
        assert rows[n].certified, n


def test_chart_additivity_and_suspension():
    rng = random.Random(31)
    for _ in range(8):
        a = catalog(rng.choice(["F2", "M0", "J", "Q"]))
        b = catalog(rng.choice(["F2", "M0", "J", "Q"])).suspend(rng.randint(0, 2))
        k = rng.randint(1, 3)
        ca = ext_chart(minimal_resolution(a, 6, 12))
        cb = ext_chart(minimal_resolution(b, 6, 12))
        csum = ext_chart(minimal_resolution(a.direct_sum(b), 6, 12))
        for s in range(7):
            for n in range(0, 7):
                assert csum.dim(s, n) == ca.dim(s, n) + cb.dim(s, n)
        csusp = ext_chart(minimal_resolution(a.suspend(k), 6, 12 + k))
        for s in range(7):
            for n in range(0, 7):
                assert csusp.dim(s, n + k) == ca.dim(s, n)


def test_assemble_on_suspension_shifts_degrees():
    a = catalog("Q")
    ca = ext_chart(minimal_resolution(a, 10, 16))
    cs = ext_chart(minimal_resolution(a.suspend(2), 10, 16))
    certa = collapse_certificate(ca, report_max_s=8)
    certs = collapse_certificate(cs, report_max_s=8)
    ra = assemble_groups(ca, certa, max_n=4)
    rs = assemble_groups(cs, certs, max_n=6)
    for n in range(5):
        assert (ra[n].free_rank, ra[n].torsion) == (rs[n + 2].free_rank, rs[n + 2].torsion)


def test_h0_consistency_with_known_towers():
    # pin^c: Z/4 in degree 2 and Z/8 + Z/2 in degree 4 force the h0-links
    m = sp.named_structure("FKO", 24)
    dec = md.split_free(m, max_gen_degree=5)
    res = minimal_resolution(dec.remainder, max_s=16, max_t=20)
    chart = ext_chart(res)
    cert = collapse_certificate(chart, report_max_s=12)
    rows = assemble_groups(chart, cert, max_n=4)
    assert rows[2].torsion == (4,)
    assert rows[4].torsion == (8, 2)


def test_certificate_free_chart_fully_certified():
    dec = md.split_free(sp.named_structure("KTminus", 20), max_gen_degree=5)
    res = minimal_resolution(dec.remainder, max_s=14, max_t=16)
    chart = ext_chart(res)
    cert = collapse_certificate(chart, report_max_s=10)
    for n in range(5):
        assert cert.column_ok(chart, n)


def test_certificate_flags_synthetic_dense_chart():
    # a module whose chart has a class one column left and two filtrations up:
    # (0, n) dots with a possible d2 target must come back uncertified
    from a1bordism.gf2 import BitMatrix

    dims = {(0, 5): 1, (2, 4): 1}
    chart = ex.ExtChart(max_s=12, max_t=30, dims=dims, h0={}, h1={})
    cert = collapse_certificate(chart, report_max_s=10)
    assert not cert.certified[(0, 5)]
    assert not cert.certified[(2, 4)]
    assert cert.threats


def test_certificate_h0_tower_targets_are_excluded():
    # single h0-torsion dot next to a clean infinite tower: certified
    from a1bordism.gf2 import BitMatrix

    dims = {(s, 0): 1 for s in range(13)} | {(0, 1): 1}
    h0 = {(s, 0): BitMatrix([1], 1) for s in range(12)}
    chart = ex.ExtChart(max_s=12, max_t=30, dims=dims, h0=h0, h1={})
    cert = collapse_certificate(chart, report_max_s=8)
    assert cert.certified[(0, 1)]
    assert all(cert.certified[(s, 0)] for s in range(9))


def test_chart_exports():
    chart = f2_chart(max_s=8, max_t=12)
    tsv = chart_tsv(chart, max_n=4, max_s=8)
    assert tsv.splitlines()[0] == "s\tn\tdim\th0rank"
    assert "0\t0\t1\t1" in tsv
    art = chart_ascii(chart, max_n=4, max_s=8)
    assert "|" in art and "." in art


def test_jobs_do_not_change_resolution():
    m = sp.named_structure("SpinO2", 16)
    r1 = minimal_resolution(m, max_s=8, max_t=12, jobs=1)
    r8 = minimal_resolution(m, max_s=8, max_t=12, jobs=8)
    for s in range(9):
        assert r1.gens(s) == r8.gens(s)
    c1, c8 = ext_chart(r1), ext_chart(r8)
    assert c1.dims == c8.dims and c1.h0 == c8.h0
