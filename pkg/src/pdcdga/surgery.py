"""One surgery stage: kill the orphan cohomology obstruction in degree k.

A stage selects cocycles alpha_1..alpha_l completing d(orphans^(k-1)) to
orphans^k intersect ker d, bounds them by corrected elements gamma_i whose
eps-pairing with every cocycle vanishes, freely adjoins generators
c_i (d c_i = alpha_i) and w_i (d w_i = c_i - gamma_i) -- plus u_i, v_i in
characteristic p with k even -- and extends the orientation by an explicit
rule on monomials.  Every property the construction relies on is re-checked
on the spot; a failed check raises InternalCheckError rather than
propagating a silently wrong algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cdga import (
    CDGA,
    ChainAlgebraMap,
    Finding,
    GradedSubspaceFamily,
    InternalCheckError,
    _sign_to_scalar,
)
from .cohomology import (
    CohomologyRing,
    boundary_space,
    cocycle_space,
    quasi_iso_failures,
)
from .duality import (
    Orientation,
    OrientedCDGA,
    OrphanIdeal,
    half_acyclic_violations,
    orphans,
)
from .exactfield import Matrix, Subspace, Vector, complement, vec_sub, vec_scale


@dataclass
class SurgeryData:
    """Everything one stage chose, for reporting and re-verification."""

    k: int
    alphas: list[Vector]
    gamma_primes: list[Vector]
    h_basis: list[tuple[int, Vector]]
    h_duals: list[tuple[int, Vector]]
    gammas: list[Vector]
    gamma_space: Optional[GradedSubspaceFamily]
    z_space: Optional[GradedSubspaceFamily]
    u_space: Optional[GradedSubspaceFamily]
    t_space: Optional[GradedSubspaceFamily]

    @property
    def l(self) -> int:
        return len(self.alphas)


@dataclass
class ExtensionResult:
    a_hat: OrientedCDGA
    inclusion: ChainAlgebraMap
    data: SurgeryData


def _identity_data(k: int) -> SurgeryData:
    return SurgeryData(k, [], [], [], [], [], None, None, None, None)


# ---------------------------------------------------------------------------
# stage ingredients


def select_alphas(oa: OrientedCDGA, o: OrphanIdeal, k: int) -> list[Vector]:
    """Deterministic complement of d(orphans^(k-1)) in orphans^k cap ker d."""
    a, f = oa.algebra, oa.algebra.field
    if 2 * k < oa.n + 2 or k > oa.n + 1:
        raise ValueError("stage degree must satisfy n/2+1 <= k <= n+1")
    zk = o[k].intersect(cocycle_space(a, k))
    bk = Subspace.from_rows(f, a.dim(k),
                            [a.d_vec(k - 1, row) for row in o[k - 1].basis.rows])
    if not zk.contains_space(bk):
        raise InternalCheckError(
            "d(orphans) not inside closed orphans in degree %d" % k,
            [Finding("orphan-subcomplex", (k,), (), "")])
    return list(complement(bk, zk).basis.rows)


def bound_alphas(oa: OrientedCDGA, alphas: Sequence[Vector], k: int
                 ) -> list[Vector]:
    """Preimages gamma' with d gamma' = alpha, free coordinates zero.

    Orphan cocycles in the surgery range are exact whenever the cohomology
    is a Poincare duality algebra; failure here means that hypothesis was
    violated upstream.
    """
    a = oa.algebra
    out: list[Vector] = []
    for t, al in enumerate(alphas):
        sol = a.diff[k - 1].solve(al)
        if sol is None:
            raise InternalCheckError(
                "obstruction cocycle is not exact (degree %d, index %d); "
                "the Poincare duality hypothesis on cohomology fails" % (k, t),
                [Finding("alpha-not-exact", (k,), (t,), "")])
        out.append(sol)
    return out


def dual_cocycles(oa: OrientedCDGA, h: Optional[CohomologyRing] = None
                  ) -> tuple[list[tuple[int, Vector]], list[tuple[int, Vector]]]:
    """Cocycle representatives of H and their eps-Kronecker duals.

    Returns flat lists of (degree, vector): h_basis[i] paired with
    h_duals[i] so that eps(dual_j * basis_i) is 1 exactly when i = j.
    Duals come from inverting the pairing blocks; a singular block means
    the cohomology is not PD and raises InternalCheckError.
    """
    a, n, f = oa.algebra, oa.n, oa.algebra.field
    hh = h if h is not None else CohomologyRing(a)
    basis: list[tuple[int, Vector]] = []
    duals: list[tuple[int, Vector]] = []
    for i in range(n + 1):
        m = hh.dim(i)
        if m == 0:
            continue
        if hh.dim(n - i) != m:
            raise InternalCheckError(
                "cohomology pairing block not square in degree %d" % i,
                [Finding("h-pd-dims", (i, n - i), (), "")])
        rows = []
        for r in range(m):
            hr = hh.rep_vec(i, r)
            rows.append(tuple(oa.eps_pair(n - i, hh.rep_vec(n - i, t), hr)
                              for t in range(m)))
        try:
            minv = Matrix(f, m, m, rows).invert()
        except ValueError:
            raise InternalCheckError(
                "cohomology pairing block singular in degree %d" % i,
                [Finding("h-pd-pairing", (i,), (), "")])
        for s in range(m):
            basis.append((i, hh.rep_vec(i, s)))
            acc = [f.zero] * a.dim(n - i)
            for t in range(m):
                c = minv.rows[t][s]
                if c == f.zero:
                    continue
                for r, v in enumerate(hh.rep_vec(n - i, t)):
                    acc[r] = f.add(acc[r], f.mul(c, v))
            duals.append((n - i, tuple(acc)))
    # Kronecker property, verified across the whole family
    bad = []
    for j, (dj, dv) in enumerate(duals):
        for i, (bi, bv) in enumerate(basis):
            if dj + bi != n:
                continue
            val = oa.eps_pair(dj, dv, bv)
            want = f.one if i == j else f.zero
            if val != want:
                bad.append(Finding("dual-kronecker", (dj, bi), (j, i),
                                   "eps(dual*basis) wrong"))
    if bad:
        raise InternalCheckError("dual cocycle family failed verification", bad)
    return basis, duals


def correct_gammas(oa: OrientedCDGA, gamma_primes: Sequence[Vector],
                   h_basis: Sequence[tuple[int, Vector]],
                   h_duals: Sequence[tuple[int, Vector]],
                   k: int) -> list[Vector]:
    """gamma_i = gamma'_i - sum_j eps(gamma'_i * h_j) dual_j.

    Only h_j in degree n-k+1 pair into degree n, so the sum is finite and
    the correction stays in degree k-1.
    """
    n, f = oa.n, oa.algebra.field
    out: list[Vector] = []
    for gp in gamma_primes:
        acc = gp
        for (dj, hv), (ddj, sv) in zip(h_basis, h_duals):
            if dj != n - (k - 1):
                continue
            coef = oa.eps_pair(k - 1, gp, hv)
            if coef != f.zero:
                acc = vec_sub(f, acc, vec_scale(f, coef, sv))
        out.append(acc)
    return out


def choose_complements(oa: OrientedCDGA, o: OrphanIdeal,
                       gamma_fam: GradedSubspaceFamily
                       ) -> tuple[GradedSubspaceFamily, GradedSubspaceFamily,
                                  GradedSubspaceFamily]:
    """Degreewise Z, U and T = Z + Gamma + U, a complement of im d in A.

    Z complements orphans cap im d inside the orphans.  The direct-sum
    claims (Z cap Gamma = 0, (Z + Gamma) cap im d = 0, T + im d = A) are
    re-verified degreewise; a failure raises with the offending degree.
    """
    a, f = oa.algebra, oa.algebra.field
    zs: list[Subspace] = []
    us: list[Subspace] = []
    ts: list[Subspace] = []
    problems: list[Finding] = []
    for i in range(a.trunc + 1):
        bdry = boundary_space(a, i)
        z = complement(o[i].intersect(bdry), o[i])
        zg = z.add(gamma_fam[i])
        if zg.dim != z.dim + gamma_fam[i].dim:
            problems.append(Finding("z-gamma-overlap", (i,), (),
                                    "Z and Gamma intersect"))
        if zg.intersect(bdry).dim != 0:
            problems.append(Finding("zg-exact-overlap", (i,), (),
                                    "(Z + Gamma) meets im d"))
        u = complement(zg.add(bdry), Subspace.full(f, a.dim(i)))
        t = zg.add(u)
        if t.dim + bdry.dim != a.dim(i) or t.intersect(bdry).dim != 0:
            problems.append(Finding("t-not-complement", (i,), (),
                                    "T + im d is not all of A"))
        zs.append(z)
        us.append(u)
        ts.append(t)
    if problems:
        raise InternalCheckError("complement construction failed", problems)
    return (GradedSubspaceFamily(a, zs), GradedSubspaceFamily(a, us),
            GradedSubspaceFamily(a, ts))


# ---------------------------------------------------------------------------
# the extension and its orientation


def _case_two(field, k: int) -> bool:
    return getattr(field, "characteristic", 0) != 0 and k % 2 == 0


def build_extension(oa: OrientedCDGA, k: int, data: SurgeryData
                    ) -> tuple[CDGA, ChainAlgebraMap, dict]:
    """Adjoin c_i, w_i (and u_i, v_i in characteristic p with k even).

    Returns the extended algebra, the inclusion, and a map from generator
    role ("c", i) / ("w", i) / ... to its position in the generator list.
    Generators whose degree exceeds the truncation are not instantiated;
    for n >= 7 that silently drops only u/v generators beyond the first.
    """
    a, n, f = oa.algebra, oa.n, oa.algebra.field
    N = a.trunc
    l = data.l
    gens: list[tuple[str, int, dict]] = []
    roles: dict = {}

    def gen_exps(pos: int, e: int) -> tuple[int, ...]:
        # exponent tuples are over the final gens list; sized afterwards
        return (pos, e)

    # first pass: c_i, w_i with placeholder exponent markers
    raw: list[tuple[str, int, list]] = []
    for i in range(l):
        roles[("c", i)] = len(raw)
        raw.append(("c%d_%d" % (k, i + 1), k - 1,
                    [(("base", t, ()), v)
                     for t, v in enumerate(data.alphas[i]) if v != f.zero]))
        roles[("w", i)] = len(raw)
        c_pos = roles[("c", i)]
        img = [(("base", 0, ((c_pos, 1),)), f.one)]
        for t, v in enumerate(data.gammas[i]):
            if v != f.zero:
                img.append((("base", t, ()), f.neg(v)))
        raw.append(("w%d_%d" % (k, i + 1), k - 2, img))
    if _case_two(f, k):
        p = f.characteristic
        du, dv = p * (k - 2) - 1, p * (k - 2)
        for i in range(l):
            w_pos, c_pos = roles[("w", i)], roles[("c", i)]
            if du <= N:
                roles[("u", i)] = len(raw)
                raw.append(("u%d_%d" % (k, i + 1), du,
                            [(("base", 0, ((w_pos, p),)), f.one)]))
            if dv <= N:
                roles[("v", i)] = len(raw)
                img = [(("base", 0, ((c_pos, 1), (w_pos, p - 1))), f.one)]
                for t, v in enumerate(data.gammas[i]):
                    if v != f.zero:
                        img.append((("base", t, ((w_pos, p - 1),)), f.neg(v)))
                raw.append(("v%d_%d" % (k, i + 1), dv, img))

    ngen = len(raw)

    def expand(markers: tuple) -> tuple[int, ...]:
        e = [0] * ngen
        for pos, exp in markers:
            e[pos] = exp
        return tuple(e)

    for name, deg, img in raw:
        gens.append((name, deg,
                     {(t, expand(markers)): v
                      for (_, t, markers), v in img}))
    ext, incl = a.free_extension(gens)
    return ext, incl, roles


def build_orientation_hat(ext: CDGA, oa: OrientedCDGA, k: int,
                          data: SurgeryData, roles: dict) -> Orientation:
    """The extended orientation, on the degree-n monomial basis of ext.

    Rules: pure base elements keep their eps value; a monomial c_i c_j with
    trivial base part gets -eps(gamma_i gamma_j); a monomial a * w_i splits
    a = t + d(xi) along T and gets the sign-adjusted eps(gamma_i xi); every
    other monomial shape gets zero.
    """
    a, n, f = oa.algebra, oa.n, oa.algebra.field
    gdegs = ext.gen_degrees
    ngen = len(gdegs)
    c_of = {roles[("c", i)]: i for i in range(data.l)}
    w_of = {roles[("w", i)]: i for i in range(data.l)}

    # split A^(n-k+2) = T + im d once; xi is the deterministic d-preimage
    wdeg = n - (k - 2)
    split = None
    if 0 <= wdeg <= a.trunc and a.dim(wdeg) > 0:
        t_sp = data.t_space[wdeg]
        bd = boundary_space(a, wdeg)
        cols = list(t_sp.basis.rows) + list(bd.basis.rows)
        if len(cols) != a.dim(wdeg):
            raise InternalCheckError("T + im d does not fill degree %d" % wdeg)
        smat = Matrix(f, a.dim(wdeg), a.dim(wdeg),
                      [tuple(cols[c][r] for c in range(a.dim(wdeg)))
                       for r in range(a.dim(wdeg))])
        split = (smat.invert(), t_sp.dim, bd)

    def exact_part_preimage(vec: Vector) -> Vector:
        sinv, tdim, bd = split
        coords = sinv.apply(vec)
        acc = [f.zero] * a.dim(wdeg)
        for t, c in enumerate(coords[tdim:]):
            if c == f.zero:
                continue
            for r, v in enumerate(bd.basis.rows[t]):
                acc[r] = f.add(acc[r], f.mul(c, v))
        xi = a.diff[wdeg - 1].solve(tuple(acc))
        if xi is None:
            raise InternalCheckError("boundary basis lost its preimage")
        return xi

    functional = []
    for a_idx, exps in _degree_n_monomials(ext, n):
        adeg = n - sum(d * e for d, e in zip(gdegs, exps))
        used = [(s, e) for s, e in enumerate(exps) if e]
        if not used:
            functional.append(oa.eps(a.basis_vec(n, a_idx)))
            continue
        csupp = [(s, e) for s, e in used if s in c_of]
        wsupp = [(s, e) for s, e in used if s in w_of]
        if (len(used) == len(csupp) and sum(e for _, e in csupp) == 2
                and adeg == 0):
            if len(csupp) == 2:
                i, jj = c_of[csupp[0][0]], c_of[csupp[1][0]]
            else:
                i = jj = c_of[csupp[0][0]]
            val = f.neg(oa.eps_pair(k - 1, data.gammas[i], data.gammas[jj]))
            functional.append(val)
            continue
        if (len(used) == 1 and wsupp and wsupp[0][1] == 1 and adeg == wdeg
                and adeg > 0):
            i = w_of[wsupp[0][0]]
            xi = exact_part_preimage(a.basis_vec(adeg, a_idx))
            sgn = _sign_to_scalar(f, adeg * (k - 2) + k)
            functional.append(f.mul(sgn, oa.eps_pair(k - 1, data.gammas[i], xi)))
            continue
        functional.append(f.zero)
    return Orientation(n, tuple(functional))


def _degree_n_monomials(ext: CDGA, n: int):
    """(base index, exponents) for the degree-n basis, in basis order."""
    if not hasattr(ext, "basis_decomposition"):
        raise InternalCheckError("extension lacks monomial bookkeeping")
    return ext.basis_decomposition[n]


# ---------------------------------------------------------------------------
# one full stage


def surgery_step(oa: OrientedCDGA, k: int) -> ExtensionResult:
    """Run one stage at degree k, verifying every intermediate claim.

    Preconditions (checked): A^1 = 0, A^2 consists of cocycles, and
    n/2+1 <= k <= n+1.  On l = 0 the input passes through unchanged with
    an identity inclusion.  Postconditions (checked): the inclusion is a
    quasi-isomorphism up to n+1, the new orientation extends the old one,
    and the new orphan set is k-half-acyclic.
    """
    a, n, f = oa.algebra, oa.n, oa.algebra.field
    pre: list[Finding] = []
    if a.dim(1) != 0:
        pre.append(Finding("reduced", (1,), (), "degree 1 must vanish"))
    for t in range(a.dim(2)):
        dv = a.d_vec(2, a.basis_vec(2, t))
        if dv and any(x != f.zero for x in dv):
            pre.append(Finding("reduced", (2,), (t,),
                               "degree 2 must consist of cocycles"))
    if pre:
        raise InternalCheckError("surgery input is not reduced", pre)

    o = orphans(oa)
    alphas = select_alphas(oa, o, k)
    l = len(alphas)
    if l == 0:
        viol = half_acyclic_violations(oa, k, o)
        if viol:
            raise InternalCheckError(
                "no obstruction found yet orphans not %d-half-acyclic" % k,
                [Finding("half-acyclic", (i,), (), "") for i in viol])
        return ExtensionResult(oa, ChainAlgebraMap.identity(a),
                               _identity_data(k))

    # the selected alphas complete d(orphans) to the closed orphans
    zk = o[k].intersect(cocycle_space(a, k))
    bk = Subspace.from_rows(f, a.dim(k),
                            [a.d_vec(k - 1, r) for r in o[k - 1].basis.rows])
    span = Subspace.from_rows(f, a.dim(k), alphas)
    stage_checks: list[Finding] = []
    if span.dim != l:
        stage_checks.append(Finding("alpha-independent", (k,), (),
                                    "alphas linearly dependent"))
    if span.intersect(bk).dim != 0:
        stage_checks.append(Finding("alpha-decomposition", (k,), (),
                                    "alphas meet d(orphans)"))
    if span.add(bk) != zk:
        stage_checks.append(Finding("alpha-decomposition", (k,), (),
                                    "alphas + d(orphans) miss closed orphans"))

    gamma_primes = bound_alphas(oa, alphas, k)
    hh = CohomologyRing(a)
    h_basis, h_duals = dual_cocycles(oa, hh)
    gammas = correct_gammas(oa, gamma_primes, h_basis, h_duals, k)

    # d gamma = alpha and eps(gamma * ker d) = 0
    kerd = cocycle_space(a, n - (k - 1))
    for i, g in enumerate(gammas):
        if a.d_vec(k - 1, g) != alphas[i]:
            stage_checks.append(Finding("gamma-bounds", (k - 1,), (i,),
                                        "d(gamma) != alpha"))
        for t, z in enumerate(kerd.basis.rows):
            if oa.eps_pair(k - 1, g, z) != f.zero:
                stage_checks.append(Finding("gamma-kerd", (k - 1,), (i, t),
                                            "eps(gamma * cocycle) != 0"))

    gamma_spaces = [Subspace.zero(f, a.dim(i)) for i in range(a.trunc + 1)]
    gamma_spaces[k - 1] = Subspace.from_rows(f, a.dim(k - 1), gammas)
    gamma_fam = GradedSubspaceFamily(a, gamma_spaces)
    if gamma_spaces[k - 1].dim != l:
        stage_checks.append(Finding("gamma-independent", (k - 1,), (),
                                    "gammas linearly dependent"))

    # middle dimension: the Gamma pairing must be nondegenerate
    if n % 2 == 0 and k == n // 2 + 1:
        rows = [tuple(oa.eps_pair(k - 1, gi, gj) for gj in gammas)
                for gi in gammas]
        if not Matrix(f, l, l, rows).is_nondegenerate():
            stage_checks.append(Finding("gamma-pairing", (k - 1,), (),
                                        "middle-case Gamma form degenerate"))
    if stage_checks:
        raise InternalCheckError("stage %d ingredient checks failed" % k,
                                 stage_checks)

    z_fam, u_fam, t_fam = choose_complements(oa, o, gamma_fam)
    data = SurgeryData(k, alphas, gamma_primes, h_basis, h_duals, gammas,
                       gamma_fam, z_fam, u_fam, t_fam)
    ext, incl, roles = build_extension(oa, k, data)
    ori = build_orientation_hat(ext, oa, k, data, roles)
    a_hat = OrientedCDGA(ext, ori)

    post: list[Finding] = list(a_hat.check_orientation())
    for t in range(a.dim(n)):
        e = a.basis_vec(n, t)
        if a_hat.eps(incl.apply(n, e)) != oa.eps(e):
            post.append(Finding("orientation-extends", (n,), (t,),
                                "eps_hat(j(x)) != eps(x)"))
    post.extend(quasi_iso_failures(incl, up_to=n + 1))
    if ext.dim(1) != 0:
        post.append(Finding("reduced", (1,), (), "extension gained degree 1"))
    o_hat = orphans(a_hat)
    viol = half_acyclic_violations(a_hat, k, o_hat)
    post.extend(Finding("half-acyclic", (i,), (), "orphan cohomology nonzero")
                for i in viol)
    if post:
        raise InternalCheckError("stage %d output failed verification" % k, post)
    return ExtensionResult(a_hat, incl, data)
