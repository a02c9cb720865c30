"""Single surgery stages: obstruction selection, corrections, extensions."""
from fractions import Fraction

import pytest

import oracles
from pdcdga import corpus
from pdcdga.cdga import CDGA, InternalCheckError
from pdcdga.cohomology import CohomologyRing, cocycle_space, is_quasi_iso
from pdcdga.duality import (OrientedCDGA, Orientation, orphan_betti, orphans,
                            pairing_matrix)
from pdcdga.exactfield import Matrix, PrimeField, QQ
from pdcdga.surgery import (bound_alphas, correct_gammas, dual_cocycles,
                            select_alphas, surgery_step)


def _oriented(name):
    inst = corpus.build(name)
    return OrientedCDGA(inst.algebra, inst.orientation), inst.n


def q(x):
    return Fraction(x)


def test_no_obstruction_on_sphere():
    oa, n = _oriented("sphere7")
    o = orphans(oa)
    assert select_alphas(oa, o, 5) == []
    res = surgery_step(oa, 5)
    assert res.data.l == 0
    assert res.inclusion.is_identity()
    assert res.a_hat.algebra is oa.algebra


def test_select_alphas_rejects_out_of_range_degree():
    oa, n = _oriented("sphere7")
    o = orphans(oa)
    with pytest.raises(ValueError):
        select_alphas(oa, o, 4)  # below n/2 + 1
    with pytest.raises(ValueError):
        select_alphas(oa, o, 9)  # above n + 1


def test_dual_cocycles_surgery_8():
    oa, n = _oriented("surgery-8")
    h_basis, h_duals = dual_cocycles(oa)
    assert h_basis == [(0, (q(1),)), (4, (q(1), q(0))), (8, (q(1),))]
    assert h_duals == [(8, (q(1),)), (4, (q(1), q(0))), (0, (q(1),))]
    # Kronecker property under eps
    for i, (di, bi) in enumerate(h_basis):
        for j, (dj, sj) in enumerate(h_duals):
            if di + dj != n:
                continue
            val = oa.eps(oa.algebra.mul_vec(dj, sj, di, bi))
            assert val == (q(1) if i == j else q(0))


def test_obstruction_count_matches_reference():
    inst = corpus.build("surgery-8")
    oa = OrientedCDGA(inst.algebra, inst.orientation)
    eps_row = list(inst.orientation.functional)
    l, _, _ = oracles.stage_obstruction(inst.algebra, eps_row, inst.n, 5)
    assert l == 1
    assert len(select_alphas(oa, orphans(oa), 5)) == 1


def test_gamma_correction_surgery_8():
    oa, n = _oriented("surgery-8")
    o = orphans(oa)
    alphas = select_alphas(oa, o, 5)
    assert alphas == [(q(1),)]  # the exact orphan al spans degree 5
    gps = bound_alphas(oa, alphas, 5)
    assert gps == [(q(0), q(1))]  # gp, with the free h-coordinate zero
    h_basis, h_duals = dual_cocycles(oa)
    gammas = correct_gammas(oa, gps, h_basis, h_duals, 5)
    assert gammas == [(q(-1), q(1))]  # gp - h
    # the corrected gamma pairs to zero with every cocycle of degree n-k+1
    a = oa.algebra
    kerd = cocycle_space(a, n - 4)
    for z in kerd.basis.rows:
        assert oa.eps_pair(4, gammas[0], z) == q(0)
    # while the uncorrected one does not
    assert any(oa.eps_pair(4, gps[0], z) != q(0) for z in kerd.basis.rows)


def test_surgery_step_surgery_8_full_walkthrough():
    oa, n = _oriented("surgery-8")
    res = surgery_step(oa, 5)
    data = res.data
    assert data.l == 1
    assert data.alphas == [(q(1),)]
    assert data.gamma_primes == [(q(0), q(1))]
    assert data.gammas == [(q(-1), q(1))]

    ext = res.a_hat.algebra
    assert ext.dims == (1, 0, 0, 1, 3, 1, 0, 3, 5, 1, 0)
    assert ext.gen_names == ("c5_1", "w5_1")
    assert ext.gen_degrees == (4, 3)
    assert ext.names[8] == ("x", "al*w5_1", "h*c5_1", "gp*c5_1", "c5_1^2")
    assert ext.validate() == []

    # d(c) = alpha and d(w) = c - gamma, read back from the tables
    dc, ci = ext.index_of("c5_1")
    dw, wi = ext.index_of("w5_1")
    assert (dc, dw) == (4, 3)
    c_vec = ext.basis_vec(4, ci)
    w_vec = ext.basis_vec(3, wi)
    d_c = ext.d_vec(4, c_vec)
    assert d_c == (q(1),)  # al embeds as the whole of degree 5
    d_w = ext.d_vec(3, w_vec)
    expect = [q(0)] * ext.dim(4)
    expect[ci] = q(1)            # + c
    _, hi = ext.index_of("h")
    _, gpi = ext.index_of("gp")
    expect[hi] += q(1)           # - gamma = -(gp - h) = h - gp
    expect[gpi] -= q(1)
    assert d_w == tuple(expect)

    # the extended orientation: eps_hat on degree 8 and eps_hat(c*c)
    eps8 = res.a_hat.orientation.functional
    assert eps8 == (q(1), q(-1), q(0), q(0), q(1))
    cc = ext.mul_vec(4, c_vec, 4, c_vec)
    assert res.a_hat.eps(cc) == q(1)

    # the inclusion is a chain algebra quasi-isomorphism
    assert res.inclusion.check() == []
    assert is_quasi_iso(res.inclusion, n + 1)
    # and the new orphans are acyclic everywhere
    assert all(b == 0 for b in orphan_betti(res.a_hat))


def test_surgery_step_restores_orientation_on_old_part():
    oa, n = _oriented("surgery-8")
    res = surgery_step(oa, 5)
    ext = res.a_hat.algebra
    # eps_hat restricted along the inclusion equals eps
    a = oa.algebra
    for t in range(a.dim(n)):
        img = res.inclusion.apply(n, a.basis_vec(n, t))
        assert res.a_hat.eps(img) == oa.eps(a.basis_vec(n, t))


def test_case_two_generators_even_stage_char_2():
    oa, n = _oriented("even-stage-8-f2")
    f = oa.algebra.field
    res = surgery_step(oa, 6)
    data = res.data
    assert data.l == 1
    ext = res.a_hat.algebra
    assert ext.gen_names == ("c6_1", "w6_1", "u6_1", "v6_1")
    assert ext.gen_degrees == (5, 4, 7, 8)
    assert ext.validate() == []  # includes d^2 = 0 on u and v

    _, ci = ext.index_of("c6_1")
    _, wi = ext.index_of("w6_1")
    _, ui = ext.index_of("u6_1")
    _, vi = ext.index_of("v6_1")
    w_vec = ext.basis_vec(4, wi)
    c_vec = ext.basis_vec(5, ci)

    # d(u) = w^p with p = 2
    du = ext.d_vec(7, ext.basis_vec(7, ui))
    assert du == ext.mul_vec(4, w_vec, 4, w_vec)

    # d(v) = (c - gamma) * w^(p-1); gamma embeds via the inclusion
    gam = res.inclusion.apply(5, data.gammas[0])
    cmg = tuple(f.sub(x, y) for x, y in zip(c_vec, gam))
    dv = ext.d_vec(8, ext.basis_vec(8, vi))
    assert dv == ext.mul_vec(5, cmg, 4, w_vec)

    assert is_quasi_iso(res.inclusion, n + 1)


def test_case_two_generators_even_stage_char_3():
    oa, n = _oriented("even-stage-10-f3")
    f = oa.algebra.field
    res = surgery_step(oa, 6)
    data = res.data
    assert data.l == 2
    ext = res.a_hat.algebra
    # two surgered classes, each with the full character-p tail; u sits in
    # degree p(k-2) - 1 = 11 and v in degree 12 = trunc
    assert ext.gen_names == ("c6_1", "w6_1", "c6_2", "w6_2",
                             "u6_1", "v6_1", "u6_2", "v6_2")
    assert ext.gen_degrees == (5, 4, 5, 4, 11, 12, 11, 12)
    assert ext.validate() == []

    for i in ("1", "2"):
        _, ui = ext.index_of("u6_" + i)
        _, wi = ext.index_of("w6_" + i)
        w_vec = ext.basis_vec(4, wi)
        du = ext.d_vec(11, ext.basis_vec(11, ui))
        w2 = ext.mul_vec(4, w_vec, 4, w_vec)
        assert du == ext.mul_vec(8, w2, 4, w_vec)  # w^3
    # v sits at the truncation edge, so d(v) is the zero map into nothing
    assert ext.dim(13) == 0
    assert is_quasi_iso(res.inclusion, n + 1)


def test_unreduced_inputs_are_rejected():
    # degree-1 generator
    names = [["1"], ["y"], ["z"], [], [], [], [], ["x"], [], []]
    diff = [Matrix.zeros(QQ, len(names[i + 1]), len(names[i]))
            for i in range(9)]
    diff[1] = Matrix.from_rows(QQ, [[QQ.one]])
    a = CDGA(QQ, 9, names, diff, {})
    assert a.validate() == []
    oa = OrientedCDGA(a, Orientation(7, (QQ.one,)))
    with pytest.raises(InternalCheckError) as exc:
        surgery_step(oa, 5)
    assert any(f.axiom == "reduced" and f.degrees == (1,)
               for f in exc.value.findings)

    # non-closed degree-2 generator
    names = [["1"], [], ["t"], ["s"], [], [], [], ["x"], [], []]
    diff = [Matrix.zeros(QQ, len(names[i + 1]), len(names[i]))
            for i in range(9)]
    diff[2] = Matrix.from_rows(QQ, [[QQ.one]])
    a = CDGA(QQ, 9, names, diff, {})
    assert a.validate() == []
    oa = OrientedCDGA(a, Orientation(7, (QQ.one,)))
    with pytest.raises(InternalCheckError) as exc:
        surgery_step(oa, 5)
    assert any(f.axiom == "reduced" and f.degrees == (2,)
               for f in exc.value.findings)


def test_stage_obstruction_reference_cross_check():
    # the reference counts of closed orphans mod d(orphans) agree with the
    # library in every stage degree of every runnable instance
    for name in ("surgery-8", "surgery-8-f2", "product-3-5",
                 "even-stage-8-f2", "even-stage-10-f3"):
        inst = corpus.build(name)
        oa = OrientedCDGA(inst.algebra, inst.orientation)
        o = orphans(oa)
        eps_row = list(inst.orientation.functional)
        first = inst.n // 2 + 1 if inst.n % 2 == 0 else (inst.n + 1) // 2 + 1
        for k in range(first, inst.n + 2):
            l, _, _ = oracles.stage_obstruction(inst.algebra, eps_row,
                                                inst.n, k)
            assert len(select_alphas(oa, o, k)) == l, (name, k)
