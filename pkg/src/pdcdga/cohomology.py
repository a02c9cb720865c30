"""Cohomology of a truncated CDGA as a ring with chosen representatives.

Degrees strictly below the truncation carry the honest cohomology of the
untruncated object.  In the top degree every element is closed by fiat, so
that betti number overshoots; callers that care stay below the truncation.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .cdga import CDGA, ChainAlgebraMap, Finding, MulTable
from .exactfield import Matrix, Subspace, Vector, complement, is_zero_vec


def cocycle_space(algebra: CDGA, i: int) -> Subspace:
    """ker d in degree i; the top degree is all cocycles by truncation."""
    if i < 0 or i > algebra.trunc:
        raise ValueError("degree out of range")
    if i == algebra.trunc:
        return Subspace.full(algebra.field, algebra.dim(i))
    return algebra.diff[i].kernel()


def boundary_space(algebra: CDGA, i: int) -> Subspace:
    """im d in degree i."""
    if i < 0 or i > algebra.trunc:
        raise ValueError("degree out of range")
    if i == 0:
        return Subspace.zero(algebra.field, algebra.dim(0))
    return algebra.diff[i - 1].image()


class CohomologyRing:
    """H(A) with a fixed cocycle representative per class.

    Per degree: cocycles Z, coboundaries B, and a complement of B inside Z
    whose rows represent the classes.  A cached change-of-basis inverse turns
    an arbitrary cocycle into class coordinates.  The input algebra is
    assumed valid; run ``algebra.validate()`` first when in doubt.
    """

    def __init__(self, algebra: CDGA):
        f = algebra.field
        self.algebra = algebra
        self.cocycles: list[Subspace] = []
        self.boundaries: list[Subspace] = []
        self.reps: list[Subspace] = []
        self._sinv: list[Matrix] = []
        for i in range(algebra.trunc + 1):
            n_i = algebra.dim(i)
            z = cocycle_space(algebra, i)
            b = boundary_space(algebra, i)
            reps = complement(b, z)
            rest = complement(z, Subspace.full(f, n_i))
            cols = (list(b.basis.rows) + list(reps.basis.rows)
                    + list(rest.basis.rows))
            s = Matrix(f, n_i, n_i,
                       [tuple(cols[c][r] for c in range(n_i))
                        for r in range(n_i)])
            self.cocycles.append(z)
            self.boundaries.append(b)
            self.reps.append(reps)
            self._sinv.append(s.invert())

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.reps)

    def dim(self, i: int) -> int:
        if i < 0 or i > self.algebra.trunc:
            return 0
        return self.reps[i].dim

    def rep_vec(self, i: int, t: int) -> Vector:
        """Chosen cocycle representing the t-th class in degree i."""
        return self.reps[i].basis.rows[t]

    def lift(self, i: int, cls: Sequence) -> Vector:
        """Cocycle representing a class given in H^i coordinates."""
        f = self.algebra.field
        acc = [f.zero] * self.algebra.dim(i)
        for t, c in enumerate(cls):
            if c == f.zero:
                continue
            for r, v in enumerate(self.rep_vec(i, t)):
                acc[r] = f.add(acc[r], f.mul(c, v))
        return tuple(acc)

    def class_of(self, i: int, vec: Sequence) -> Vector:
        """H^i coordinates of a cocycle; rejects non-cocycles."""
        a = self.algebra
        if i < 0 or i > a.trunc:
            raise ValueError("degree out of range")
        if len(vec) != a.dim(i):
            raise ValueError("vector length does not match degree %d" % i)
        dv = a.d_vec(i, vec)
        if dv and not is_zero_vec(a.field, dv):
            raise ValueError("class_of applied to a non-cocycle in degree %d" % i)
        coords = self._sinv[i].apply(vec)
        lo = self.boundaries[i].dim
        return tuple(coords[lo:lo + self.reps[i].dim])

    def class_functional(self, i: int, t: int) -> Vector:
        """Functional on A^i returning the t-th class coordinate.

        Kills coboundaries by construction, so it descends to H^i.
        """
        lo = self.boundaries[i].dim
        return self._sinv[i].rows[lo + t]

    def product(self, i: int, x: Sequence, j: int, y: Sequence) -> Vector:
        """Cup product in H coordinates."""
        a = self.algebra
        if i + j > a.trunc:
            return ()
        prod = a.mul_vec(i, self.lift(i, x), j, self.lift(j, y))
        return self.class_of(i + j, prod)

    def as_cdga(self) -> CDGA:
        """H(A) as a CDGA with zero differential.

        Basis class t in degree i is named after its representative when the
        representative is a basis element of A, else h<i>_<t>.
        """
        a = self.algebra
        f = a.field
        names: list[list[str]] = []
        for i in range(a.trunc + 1):
            row = []
            for t in range(self.dim(i)):
                v = self.rep_vec(i, t)
                ones = [c for c, x in enumerate(v) if x != f.zero]
                if len(ones) == 1 and v[ones[0]] == f.one:
                    row.append(a.names[i][ones[0]])
                else:
                    row.append("h%d_%d" % (i, t))
            names.append(row)
        diff = [Matrix.zeros(f, len(names[i + 1]), len(names[i]))
                for i in range(a.trunc)]
        mul: MulTable = {}
        for i in range(1, a.trunc + 1):
            for j in range(i, a.trunc + 1 - i):
                for t1 in range(self.dim(i)):
                    e1 = [f.zero] * self.dim(i)
                    e1[t1] = f.one
                    for t2 in range(self.dim(j)):
                        if i == j and t1 > t2:
                            continue
                        e2 = [f.zero] * self.dim(j)
                        e2[t2] = f.one
                        entry = {c: v
                                 for c, v in enumerate(self.product(i, e1, j, e2))
                                 if v != f.zero}
                        if entry:
                            mul[(i, t1, j, t2)] = entry
        return CDGA(f, a.trunc, names, diff, mul)


def induced_on_cohomology(
    f: ChainAlgebraMap,
    source_h: Optional[CohomologyRing] = None,
    target_h: Optional[CohomologyRing] = None,
) -> list[Matrix]:
    """Matrices of H(f) per degree; f must be a verified chain map."""
    hs = source_h if source_h is not None else CohomologyRing(f.source)
    ht = target_h if target_h is not None else CohomologyRing(f.target)
    k = f.source.field
    out = []
    for i in range(f.source.trunc + 1):
        cols = [ht.class_of(i, f.apply(i, hs.rep_vec(i, t)))
                for t in range(hs.dim(i))]
        out.append(Matrix(k, ht.dim(i), hs.dim(i),
                          [tuple(col[r] for col in cols)
                           for r in range(ht.dim(i))]))
    return out


def quasi_iso_failures(
    f: ChainAlgebraMap,
    source_h: Optional[CohomologyRing] = None,
    target_h: Optional[CohomologyRing] = None,
    up_to: Optional[int] = None,
) -> list[Finding]:
    """Degrees where H(f) is not an isomorphism, with the failure mode.

    ``up_to`` bounds the degrees checked (inclusive); by default the top
    truncation degree is skipped because its betti number is an artifact.
    """
    hs = source_h if source_h is not None else CohomologyRing(f.source)
    ht = target_h if target_h is not None else CohomologyRing(f.target)
    top = up_to if up_to is not None else f.source.trunc - 1
    mats = induced_on_cohomology(f, hs, ht)
    out: list[Finding] = []
    for i in range(top + 1):
        m = mats[i]
        if m.nrows != m.ncols:
            out.append(Finding("h-iso", (i,), (),
                               "betti %d vs %d" % (m.ncols, m.nrows)))
        elif m.rank() != m.nrows:
            out.append(Finding("h-iso", (i,), (),
                               "H^%d matrix rank %d < %d" % (i, m.rank(), m.nrows)))
    return out


def is_quasi_iso(f: ChainAlgebraMap, up_to: Optional[int] = None) -> bool:
    return not quasi_iso_failures(f, up_to=up_to)


def check_H_PD(h: CohomologyRing, n: int) -> list[Finding]:
    """Is H a simply-connected Poincare duality algebra in dimension n?

    Clean means: betti 1, 0, ..., 1 at degrees 0, 1, n; zero betti in
    degrees n+1..trunc-1 (the trunc degree itself is a truncation artifact
    and is not judged here); and each pairing on H^k x H^(n-k) into the
    fundamental-class coordinate is nondegenerate.
    """
    a = h.algebra
    f = a.field
    out: list[Finding] = []
    if n < 0 or n > a.trunc - 2:
        out.append(Finding("h-dimension", (n,), (),
                           "dimension must lie in 0..trunc-2"))
        return out
    if h.dim(0) != 1:
        out.append(Finding("h-connected", (0,), (), "betti_0 = %d" % h.dim(0)))
    if h.dim(1) != 0:
        out.append(Finding("h-simply-connected", (1,), (),
                           "betti_1 = %d" % h.dim(1)))
    if h.dim(n) != 1:
        out.append(Finding("h-top", (n,), (), "betti_n = %d" % h.dim(n)))
    for i in range(n + 1, a.trunc):
        if h.dim(i) != 0:
            out.append(Finding("h-support", (i,), (),
                               "betti_%d = %d above dimension" % (i, h.dim(i))))
    if out:
        return out
    for i in range(n + 1):
        if h.dim(i) != h.dim(n - i):
            out.append(Finding("h-pd-dims", (i, n - i), (),
                               "betti %d vs %d" % (h.dim(i), h.dim(n - i))))
            continue
        m = h.dim(i)
        rows = []
        for s in range(m):
            es = [f.zero] * h.dim(n - i)
            es[s] = f.one
            row = []
            for t in range(m):
                et = [f.zero] * m
                et[t] = f.one
                row.append(h.product(i, et, n - i, es)[0])
            rows.append(tuple(row))
        if not Matrix(f, m, m, rows).is_nondegenerate():
            out.append(Finding("h-pd-pairing", (i,), (),
                               "degenerate cohomology pairing"))
    return out


def subcomplex_betti(algebra: CDGA, spaces: Sequence[Subspace]) -> tuple[int, ...]:
    """Betti numbers of a d-stable graded subspace family, as a complex.

    Raises ValueError when the family is not closed under d.
    """
    f = algebra.field
    if len(spaces) != algebra.trunc + 1:
        raise ValueError("need one subspace per degree")
    zs: list[Subspace] = []
    bs: list[Subspace] = []
    for i in range(algebra.trunc + 1):
        full_ker = (algebra.diff[i].kernel() if i < algebra.trunc
                    else Subspace.full(f, algebra.dim(i)))
        zs.append(spaces[i].intersect(full_ker))
        if i == 0:
            bs.append(Subspace.zero(f, algebra.dim(0)))
        else:
            imgs = [algebra.d_vec(i - 1, row) for row in spaces[i - 1].basis.rows]
            bs.append(Subspace.from_rows(f, algebra.dim(i), imgs))
        if not zs[i].contains_space(bs[i]):
            raise ValueError("family is not a subcomplex in degree %d" % i)
    return tuple(z.dim - b.dim for z, b in zip(zs, bs))
