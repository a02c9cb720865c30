"""Finite-type commutative differential graded algebras with exact scalars.

An algebra lives in degrees 0..trunc with a named basis per degree, a
degree +1 differential given by one matrix per degree, and a sparse table
of structure constants.  Structure constants are stored only for
deg_a < deg_b, or deg_a == deg_b with a_idx <= b_idx; every other product
is derived from the stored one by the Koszul sign rule, so graded
commutativity holds by construction and cannot be mis-stated.  The one
commutativity clause that storage cannot force, a*a = 0 in odd degree
(in every characteristic, including 2), is checked by ``validate``.

Degrees above trunc are identically zero: products landing there vanish
and the differential out of the top degree is not represented.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exactfield import (
    Field,
    Matrix,
    Subspace,
    Vector,
    complement,
    is_zero_vec,
    vec_add,
    vec_scale,
)


@dataclass(frozen=True)
class Finding:
    """One violated axiom with the basis tuple that witnesses it."""

    axiom: str
    degrees: tuple[int, ...]
    indices: tuple[int, ...]
    detail: str = ""

    def __str__(self) -> str:
        bits = []
        if self.degrees:
            bits.append("deg " + ",".join(str(d) for d in self.degrees))
        if self.indices:
            bits.append("idx " + ",".join(str(i) for i in self.indices))
        loc = " ".join(bits)
        return "[%s] %s%s" % (self.axiom, loc, (": " + self.detail) if self.detail else "")


class InternalCheckError(Exception):
    """A construction produced output that fails its own verification."""

    def __init__(self, message: str, findings: Optional[list[Finding]] = None):
        super().__init__(message)
        self.findings = findings or []


def _sign_to_scalar(field: Field, exponent: int):
    return field.one if exponent % 2 == 0 else field.neg(field.one)


MulTable = dict


class CDGA:
    """A connected CDGA of finite type, truncated at degree ``trunc``."""

    def __init__(
        self,
        field: Field,
        trunc: int,
        names: Sequence[Sequence[str]],
        diff: Sequence[Matrix],
        mul: MulTable,
    ):
        if trunc < 0:
            raise ValueError("negative truncation")
        if len(names) != trunc + 1:
            raise ValueError("need basis names for degrees 0..%d" % trunc)
        names = tuple(tuple(row) for row in names)
        if len(names[0]) != 1:
            raise ValueError("degree 0 must be spanned by the unit alone")
        flat = [nm for row in names for nm in row]
        if len(set(flat)) != len(flat):
            raise ValueError("duplicate basis name")
        if len(diff) != trunc:
            raise ValueError("need %d differential matrices, got %d" % (trunc, len(diff)))
        for i, m in enumerate(diff):
            if m.field != field or m.nrows != len(names[i + 1]) or m.ncols != len(names[i]):
                raise ValueError("differential in degree %d has wrong shape" % i)
        table: MulTable = {}
        for (i, a, j, b), vec in mul.items():
            if not (0 <= i <= j and i + j <= trunc):
                raise ValueError("product key out of range: %r" % ((i, a, j, b),))
            if i == j and a > b:
                raise ValueError("equal-degree product stored with a_idx > b_idx: %r"
                                 % ((i, a, j, b),))
            if not (0 <= a < len(names[i]) and 0 <= b < len(names[j])):
                raise ValueError("product index out of range: %r" % ((i, a, j, b),))
            clean = {c: v for c, v in vec.items() if v != field.zero}
            for c in clean:
                if not (0 <= c < len(names[i + j])):
                    raise ValueError("product value index out of range in %r" % ((i, a, j, b),))
            if clean:
                table[(i, a, j, b)] = clean
        self.field = field
        self.trunc = trunc
        self.names = names
        self.diff = tuple(diff)
        self.mul = table

    # -- plumbing -----------------------------------------------------------

    def dim(self, i: int) -> int:
        if i < 0 or i > self.trunc:
            return 0
        return len(self.names[i])

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.names)

    def basis_vec(self, i: int, idx: int) -> Vector:
        v = [self.field.zero] * self.dim(i)
        v[idx] = self.field.one
        return tuple(v)

    def unit_vec(self) -> Vector:
        return (self.field.one,)

    def index_of(self, name: str) -> tuple[int, int]:
        for i, row in enumerate(self.names):
            if name in row:
                return i, row.index(name)
        raise KeyError(name)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CDGA)
            and self.field == other.field
            and self.trunc == other.trunc
            and self.names == other.names
            and self.diff == other.diff
            and self.mul == other.mul
        )

    def __repr__(self) -> str:
        return "CDGA(%s, deg<=%d, dims %s)" % (self.field, self.trunc, list(self.dims))

    # -- differential and products --------------------------------------------

    def d_vec(self, i: int, x: Sequence) -> Vector:
        """d on a degree-i coordinate vector; empty above the truncation."""
        if i >= self.trunc:
            return ()
        return self.diff[i].apply(x)

    def mul_basis(self, i: int, a: int, j: int, b: int) -> dict:
        """Sparse product of basis elements, Koszul-derived outside storage."""
        f = self.field
        if i + j > self.trunc:
            return {}
        if i == 0:
            stored = self.mul.get((0, a, j, b))
            return dict(stored) if stored is not None else {b: f.one}
        if j == 0:
            stored = self.mul.get((0, b, i, a))
            return dict(stored) if stored is not None else {a: f.one}
        if i < j or (i == j and a <= b):
            return dict(self.mul.get((i, a, j, b), {}))
        stored = self.mul.get((j, b, i, a), {})
        if not stored:
            return {}
        sgn = _sign_to_scalar(f, i * j)
        return {c: f.mul(sgn, v) for c, v in stored.items()}

    def mul_vec(self, i: int, x: Sequence, j: int, y: Sequence) -> Vector:
        """Product of a degree-i vector with a degree-j vector."""
        f = self.field
        if i + j > self.trunc:
            return ()
        acc = [f.zero] * self.dim(i + j)
        for a, xa in enumerate(x):
            if xa == f.zero:
                continue
            for b, yb in enumerate(y):
                if yb == f.zero:
                    continue
                prod = self.mul_basis(i, a, j, b)
                if not prod:
                    continue
                coeff = f.mul(xa, yb)
                for c, v in prod.items():
                    acc[c] = f.add(acc[c], f.mul(coeff, v))
        return tuple(acc)

    # -- axioms ------------------------------------------------------------------

    def validate(self) -> list[Finding]:
        """Check every CDGA axiom; one finding per violated instance."""
        f = self.field
        out: list[Finding] = []
        # d squared
        for i in range(self.trunc - 1):
            m = self.diff[i + 1] @ self.diff[i]
            for a in range(self.dim(i)):
                col = tuple(m.rows[r][a] for r in range(m.nrows))
                if not is_zero_vec(f, col):
                    out.append(Finding("d-squared", (i,), (a,), "d(d(basis)) nonzero"))
        # explicitly stored unit rows must agree with 1*x = x
        for (i, a, j, b), vec in self.mul.items():
            if i == 0 and vec != {b: f.one}:
                out.append(Finding("unit", (0, j), (a, b), "1*x differs from x"))
        # odd squares vanish in every characteristic
        for (i, a, j, b), vec in self.mul.items():
            if i == j and a == b and i % 2 == 1 and vec:
                out.append(Finding("odd-square", (i, i), (a, a),
                                   "a*a nonzero in odd degree"))
        # Leibniz on all basis pairs with room for the differential
        for i in range(self.trunc + 1):
            for j in range(i, self.trunc + 1 - i):
                if i + j >= self.trunc:
                    continue
                for a in range(self.dim(i)):
                    ea = self.basis_vec(i, a)
                    da = self.d_vec(i, ea)
                    sgn = _sign_to_scalar(f, i)
                    for b in range(self.dim(j)):
                        eb = self.basis_vec(j, b)
                        db = self.d_vec(j, eb)
                        prod = [f.zero] * self.dim(i + j)
                        for c, v in self.mul_basis(i, a, j, b).items():
                            prod[c] = v
                        lhs = self.d_vec(i + j, tuple(prod))
                        rhs = vec_add(f, self.mul_vec(i + 1, da, j, eb),
                                      vec_scale(f, sgn, self.mul_vec(i, ea, j + 1, db)))
                        if lhs != rhs:
                            out.append(Finding("leibniz", (i, j), (a, b),
                                               "d(ab) != (da)b + (-1)^|a| a(db)"))
        # associativity: two orderings per sorted degree triple close the
        # orbit graph; every other ordering then follows from commutativity
        for i in range(1, self.trunc + 1):
            for j in range(i, self.trunc + 1 - i):
                for k in range(j, self.trunc + 1 - i - j):
                    for a in range(self.dim(i)):
                        ea = self.basis_vec(i, a)
                        for b in range(self.dim(j)):
                            eb = self.basis_vec(j, b)
                            for c in range(self.dim(k)):
                                ec = self.basis_vec(k, c)
                                checks = (
                                    ((i, a, ea), (j, b, eb), (k, c, ec)),
                                    ((i, a, ea), (k, c, ec), (j, b, eb)),
                                )
                                for (p, ai, x), (q, bi, y), (r, ci, z) in checks:
                                    lhs = self.mul_vec(p + q, self.mul_vec(p, x, q, y), r, z)
                                    rhs = self.mul_vec(p, x, q + r, self.mul_vec(q, y, r, z))
                                    if lhs != rhs:
                                        out.append(Finding("associativity",
                                                           (p, q, r), (ai, bi, ci),
                                                           "(xy)z != x(yz)"))
        return out

    # -- constructions --------------------------------------------------------

    def truncate(self, bound: int) -> "CDGA":
        """Quotient by everything above ``bound``."""
        if bound < 0 or bound > self.trunc:
            raise ValueError("truncation bound out of range")
        mul = {k: dict(v) for k, v in self.mul.items() if k[0] + k[2] <= bound}
        return CDGA(self.field, bound, self.names[: bound + 1], self.diff[:bound], mul)

    def free_extension(self, gens: Sequence[tuple[str, int, dict]]
                       ) -> tuple["CDGA", "ChainAlgebraMap"]:
        """Adjoin free graded-commutative generators with prescribed d-images.

        Each generator is (name, degree, d_image) where d_image is a sparse
        element of the *extended* algebra in degree degree+1, written as
        {(a_idx, exponents): coeff} with exponents indexing into ``gens``.
        The result is truncated at self.trunc.  Raises ValueError when a
        d_image breaks the grading and InternalCheckError when the extended
        differential fails d^2 = 0 (i.e. some d_image is not a cocycle).
        """
        return _free_extension(self, gens)

    def quotient_by_ideal(self, ideal: "GradedSubspaceFamily"
                          ) -> tuple["CDGA", "ChainAlgebraMap"]:
        """Quotient by a d-stable graded ideal; returns (quotient, projection)."""
        return _quotient_by_ideal(self, ideal)


# ---------------------------------------------------------------------------
# graded subspace families


class GradedSubspaceFamily:
    """One subspace of A^i per degree i = 0..trunc."""

    def __init__(self, algebra: CDGA, spaces: Sequence[Subspace]):
        if len(spaces) != algebra.trunc + 1:
            raise ValueError("need one subspace per degree")
        for i, s in enumerate(spaces):
            if s.ambient_dim != algebra.dim(i):
                raise ValueError("ambient mismatch in degree %d" % i)
        self.algebra = algebra
        self.spaces = tuple(spaces)

    def __getitem__(self, i: int) -> Subspace:
        return self.spaces[i]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)

    def is_ideal(self) -> Optional[Finding]:
        """None when the family is a d-stable ideal, else a witness finding."""
        a = self.algebra
        for i in range(a.trunc):
            for t, row in enumerate(self[i].basis.rows):
                if not self[i + 1].contains(a.d_vec(i, row)):
                    return Finding("not-d-stable", (i,), (t,),
                                   "d of ideal vector leaves the ideal")
        for i in range(a.trunc + 1):
            for t, row in enumerate(self[i].basis.rows):
                for j in range(0, a.trunc + 1 - i):
                    for b in range(a.dim(j)):
                        prod = a.mul_vec(i, row, j, a.basis_vec(j, b))
                        if prod and not self[i + j].contains(prod):
                            return Finding("not-an-ideal", (i, j), (t, b),
                                           "ideal vector times basis leaves the ideal")
        return None


# ---------------------------------------------------------------------------
# chain algebra maps


class ChainAlgebraMap:
    """A degreewise linear map meant to commute with d and with products."""

    def __init__(self, source: CDGA, target: CDGA, mats: Sequence[Matrix]):
        if source.trunc != target.trunc:
            raise ValueError("source and target truncation differ")
        if len(mats) != source.trunc + 1:
            raise ValueError("need one matrix per degree")
        for i, m in enumerate(mats):
            if m.nrows != target.dim(i) or m.ncols != source.dim(i):
                raise ValueError("matrix shape mismatch in degree %d" % i)
        self.source = source
        self.target = target
        self.mats = tuple(mats)

    @classmethod
    def identity(cls, a: CDGA) -> "ChainAlgebraMap":
        return cls(a, a, [Matrix.identity(a.field, a.dim(i)) for i in range(a.trunc + 1)])

    def apply(self, i: int, x: Sequence) -> Vector:
        return self.mats[i].apply(x)

    def is_identity(self) -> bool:
        return self.source.dims == self.target.dims and all(
            m == Matrix.identity(m.field, m.nrows) for m in self.mats
        )

    def check(self) -> list[Finding]:
        """Unit, chain, and multiplicativity diagnostics (empty = clean)."""
        s, t, f = self.source, self.target, self.source.field
        out: list[Finding] = []
        if self.apply(0, s.unit_vec()) != t.unit_vec():
            out.append(Finding("map-unit", (0,), (0,), "F(1) != 1"))
        for i in range(s.trunc):
            if self.mats[i + 1] @ s.diff[i] != t.diff[i] @ self.mats[i]:
                out.append(Finding("map-chain", (i,), (), "F d != d F"))
        for i in range(s.trunc + 1):
            for j in range(i, s.trunc + 1 - i):
                for a in range(s.dim(i)):
                    fa = self.apply(i, s.basis_vec(i, a))
                    for b in range(s.dim(j)):
                        prod = [f.zero] * s.dim(i + j)
                        for c, v in s.mul_basis(i, a, j, b).items():
                            prod[c] = v
                        lhs = self.apply(i + j, tuple(prod))
                        rhs = t.mul_vec(i, fa, j, self.apply(j, s.basis_vec(j, b)))
                        if lhs != rhs:
                            out.append(Finding("map-mult", (i, j), (a, b),
                                               "F(ab) != F(a)F(b)"))
        return out


def compose(f: ChainAlgebraMap, g: ChainAlgebraMap) -> ChainAlgebraMap:
    """First f, then g."""
    if f.target is not g.source and f.target != g.source:
        raise ValueError("compose endpoints do not match")
    return ChainAlgebraMap(f.source, g.target,
                           [gm @ fm for fm, gm in zip(f.mats, g.mats)])


def check_map(f: ChainAlgebraMap) -> list[Finding]:
    return f.check()


# ---------------------------------------------------------------------------
# free extension internals


def _mono_degree(gdegs: Sequence[int], exps: Sequence[int]) -> int:
    return sum(d * e for d, e in zip(gdegs, exps))


def _mono_mul(gdegs: Sequence[int], e1: Sequence[int], e2: Sequence[int]
              ) -> Optional[tuple[int, tuple[int, ...]]]:
    """(sign exponent, merged exponents), or None when an odd square appears.

    Each factor from e2 moves left past the e1 factors with larger generator
    index; only odd-degree generator pairs flip the sign.
    """
    sign = 0
    for s in range(len(gdegs)):
        if gdegs[s] % 2 == 1:
            if e1[s] + e2[s] >= 2:
                return None
            if e2[s]:
                for t in range(s + 1, len(gdegs)):
                    if gdegs[t] % 2 == 1:
                        sign += e1[t]
    return sign, tuple(a + b for a, b in zip(e1, e2))


def _enumerate_monomials(gdegs: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= bound, lexicographically."""
    out: list[tuple[int, ...]] = []

    def rec(pos: int, prefix: tuple[int, ...], deg: int):
        if pos == len(gdegs):
            out.append(prefix)
            return
        top = 1 if gdegs[pos] % 2 == 1 else (bound - deg) // gdegs[pos]
        for e in range(top + 1):
            rec(pos + 1, prefix + (e,), deg + e * gdegs[pos])

    rec(0, (), 0)
    out.sort()
    return out


def _mono_name(gnames: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for nm, e in zip(gnames, exps):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append("%s^%d" % (nm, e))
    return "*".join(parts)


class _ExtElems:
    """Sparse elements {(a_idx, exps): coeff} of A tensor the free part."""

    def __init__(self, base: CDGA, gdegs: Sequence[int]):
        self.base = base
        self.gdegs = tuple(gdegs)
        self.f = base.field

    def mul(self, deg1: int, x: dict, deg2: int, y: dict) -> dict:
        """Product of two homogeneous elements; drops degrees above trunc."""
        f, base = self.f, self.base
        out: dict = {}
        if deg1 + deg2 > base.trunc:
            return out
        for (a, e1), ca in x.items():
            adeg = deg1 - _mono_degree(self.gdegs, e1)
            mdeg1 = deg1 - adeg
            for (b, e2), cb in y.items():
                bdeg = deg2 - _mono_degree(self.gdegs, e2)
                m = _mono_mul(self.gdegs, e1, e2)
                if m is None:
                    continue
                sgn_exp, merged = m
                sgn_exp += mdeg1 * bdeg
                coeff = f.mul(ca, cb)
                if sgn_exp % 2:
                    coeff = f.neg(coeff)
                for c, v in base.mul_basis(adeg, a, bdeg, b).items():
                    key = (c, merged)
                    upd = f.add(out.get(key, f.zero), f.mul(coeff, v))
                    if upd == f.zero:
                        out.pop(key, None)
                    else:
                        out[key] = upd
        return out

    def add_scaled(self, acc: dict, coeff, other: dict) -> None:
        f = self.f
        for key, v in other.items():
            upd = f.add(acc.get(key, f.zero), f.mul(coeff, v))
            if upd == f.zero:
                acc.pop(key, None)
            else:
                acc[key] = upd


def _free_extension(base: CDGA, gens: Sequence[tuple[str, int, dict]]
                    ) -> tuple[CDGA, ChainAlgebraMap]:
    f = base.field
    N = base.trunc
    gnames = [g[0] for g in gens]
    gdegs = [g[1] for g in gens]
    taken = {nm for row in base.names for nm in row}
    for nm in gnames:
        if nm in taken:
            raise ValueError("generator name already in use: %s" % nm)
        taken.add(nm)
    if len(set(gnames)) != len(gnames):
        raise ValueError("duplicate generator name")
    for nm, dg, _ in gens:
        if dg < 1 or dg > N:
            raise ValueError("generator %s has degree outside 1..%d" % (nm, N))

    elems = _ExtElems(base, gdegs)
    ngen = len(gens)
    zero_exp = (0,) * ngen

    def exps_single(s: int) -> tuple[int, ...]:
        return tuple(1 if t == s else 0 for t in range(ngen))

    # d-images: check the grading now, the cocycle condition at the end
    d_images: list[dict] = []
    for nm, dg, img in gens:
        if dg + 1 > N:
            d_images.append({})
            continue
        img = {k: v for k, v in img.items() if v != f.zero}
        for (a_idx, exps) in img:
            if len(exps) != ngen or any(e < 0 for e in exps):
                raise ValueError("malformed exponents in d-image of %s" % nm)
            adeg = dg + 1 - _mono_degree(gdegs, exps)
            if adeg < 0 or adeg > N or a_idx >= base.dim(adeg):
                raise ValueError("d-image of %s breaks the grading" % nm)
        d_images.append(img)

    # basis: (a_idx, exps) per degree, monomial-major, zero exponent first
    monos = _enumerate_monomials(gdegs, N)
    basis: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(N + 1)]
    for m in range(N + 1):
        for exps in monos:
            mdeg = _mono_degree(gdegs, exps)
            if mdeg > m:
                continue
            for a_idx in range(base.dim(m - mdeg)):
                basis[m].append((a_idx, exps))
    pos = [{key: t for t, key in enumerate(row)} for row in basis]

    names: list[list[str]] = []
    for m in range(N + 1):
        row = []
        for a_idx, exps in basis[m]:
            mono = _mono_name(gnames, exps)
            adeg = m - _mono_degree(gdegs, exps)
            if not mono:
                row.append(base.names[m][a_idx])
            elif adeg == 0:
                row.append(mono)
            else:
                row.append("%s*%s" % (base.names[adeg][a_idx], mono))
        names.append(row)

    # structure constants
    mul: MulTable = {}
    for i in range(1, N + 1):
        for j in range(i, N + 1 - i):
            for t1, (a, e1) in enumerate(basis[i]):
                x = {(a, e1): f.one}
                for t2, (b, e2) in enumerate(basis[j]):
                    if i == j and t1 > t2:
                        continue
                    prod = elems.mul(i, x, j, {(b, e2): f.one})
                    if prod:
                        mul[(i, t1, j, t2)] = {pos[i + j][key]: v
                                               for key, v in prod.items()}

    # differential via the derivation rule, memoized on pure monomials
    dmono_cache: dict[tuple[int, ...], dict] = {zero_exp: {}}

    def d_mono(exps: tuple[int, ...]) -> dict:
        if exps in dmono_cache:
            return dmono_cache[exps]
        s = next(t for t, e in enumerate(exps) if e)
        rest = list(exps)
        rest[s] -= 1
        rest = tuple(rest)
        mdeg = _mono_degree(gdegs, rest)
        out: dict = {}
        elems.add_scaled(out, f.one,
                         elems.mul(gdegs[s] + 1, d_images[s], mdeg, {(0, rest): f.one}))
        tail = d_mono(rest)
        if tail:
            term = elems.mul(gdegs[s], {(0, exps_single(s)): f.one}, mdeg + 1, tail)
            elems.add_scaled(out, _sign_to_scalar(f, gdegs[s]), term)
        dmono_cache[exps] = out
        return out

    diff: list[Matrix] = []
    for m in range(N):
        cols: list[Vector] = []
        for a_idx, exps in basis[m]:
            adeg = m - _mono_degree(gdegs, exps)
            out: dict = {}
            da = base.d_vec(adeg, base.basis_vec(adeg, a_idx))
            for c, v in enumerate(da):
                if v != f.zero:
                    elems.add_scaled(out, f.one, {(c, exps): v})
            dm = d_mono(exps)
            if dm:
                term = elems.mul(adeg, {(a_idx, zero_exp): f.one},
                                 m - adeg + 1, dm)
                elems.add_scaled(out, _sign_to_scalar(f, adeg), term)
            col = [f.zero] * len(basis[m + 1])
            for key, v in out.items():
                col[pos[m + 1][key]] = v
            cols.append(tuple(col))
        diff.append(Matrix(f, len(basis[m + 1]), len(basis[m]),
                           [tuple(col[r] for col in cols)
                            for r in range(len(basis[m + 1]))]))

    ext = CDGA(f, N, names, diff, mul)

    # prescribed d-images must be cocycles, i.e. d^2 = 0 on pure generators
    for s, (nm, dg, _) in enumerate(gens):
        if dg >= N:
            continue
        idx = pos[dg][(0, exps_single(s))]
        ddv = ext.d_vec(dg + 1, ext.d_vec(dg, ext.basis_vec(dg, idx)))
        if ddv and not is_zero_vec(f, ddv):
            raise InternalCheckError(
                "d-image of generator %s is not a cocycle" % nm,
                [Finding("d-squared", (dg,), (idx,), "generator " + nm)])

    problems = ext.validate()
    if problems:
        raise InternalCheckError("free extension failed validation", problems)

    incl = ChainAlgebraMap(base, ext, [
        Matrix(f, len(basis[m]), base.dim(m),
               [tuple(f.one if basis[m][r] == (c, zero_exp) else f.zero
                      for c in range(base.dim(m)))
                for r in range(len(basis[m]))])
        for m in range(N + 1)
    ])
    bad = incl.check()
    if bad:
        raise InternalCheckError("free extension inclusion is not a map", bad)

    # where each pure generator monomial sits: exponents -> (degree, index)
    ext.gen_monomials = {exps: (m, pos[m][(0, exps)])
                         for m in range(N + 1)
                         for (a_idx, exps) in basis[m]
                         if a_idx == 0 and m == _mono_degree(gdegs, exps)}
    ext.gen_names = tuple(gnames)
    ext.gen_degrees = tuple(gdegs)
    ext.basis_decomposition = tuple(tuple(row) for row in basis)
    return ext, incl


# ---------------------------------------------------------------------------
# quotient by a differential ideal


def _quotient_by_ideal(a: CDGA, ideal: GradedSubspaceFamily
                       ) -> tuple[CDGA, ChainAlgebraMap]:
    if ideal.algebra is not a and ideal.algebra != a:
        raise ValueError("ideal belongs to a different algebra")
    witness = ideal.is_ideal()
    if witness is not None:
        raise ValueError("quotient_by_ideal: %s" % witness)
    if ideal[0].dim != 0:
        raise ValueError("ideal contains the unit degree")
    f = a.field

    reps: list[Subspace] = []
    projs: list[Matrix] = []
    lifts: list[Matrix] = []
    for i in range(a.trunc + 1):
        comp = complement(ideal[i], Subspace.full(f, a.dim(i)))
        reps.append(comp)
        cols = list(ideal[i].basis.rows) + list(comp.basis.rows)
        if len(cols) != a.dim(i):
            raise InternalCheckError("complement failed to complete degree %d" % i)
        bmat = Matrix(f, a.dim(i), a.dim(i),
                      [tuple(cols[c][r] for c in range(a.dim(i)))
                       for r in range(a.dim(i))])
        binv = bmat.invert()
        projs.append(Matrix(f, comp.dim, a.dim(i), binv.rows[ideal[i].dim:]))
        lifts.append(Matrix(f, a.dim(i), comp.dim,
                            [tuple(comp.basis.rows[c][r] for c in range(comp.dim))
                             for r in range(a.dim(i))]))

    names: list[list[str]] = []
    for i in range(a.trunc + 1):
        row = []
        for t, v in enumerate(reps[i].basis.rows):
            ones = [c for c, x in enumerate(v) if x != f.zero]
            if len(ones) == 1 and v[ones[0]] == f.one:
                row.append(a.names[i][ones[0]])
            else:
                row.append("q%d_%d" % (i, t))
        names.append(row)

    diff = [projs[i + 1] @ a.diff[i] @ lifts[i] for i in range(a.trunc)]

    mul: MulTable = {}
    for i in range(1, a.trunc + 1):
        for j in range(i, a.trunc + 1 - i):
            for t1 in range(reps[i].dim):
                x = reps[i].basis.rows[t1]
                for t2 in range(reps[j].dim):
                    if i == j and t1 > t2:
                        continue
                    prod = a.mul_vec(i, x, j, reps[j].basis.rows[t2])
                    red = projs[i + j].apply(prod)
                    entry = {c: v for c, v in enumerate(red) if v != f.zero}
                    if entry:
                        mul[(i, t1, j, t2)] = entry

    quo = CDGA(f, a.trunc, names, diff, mul)
    problems = quo.validate()
    if problems:
        raise InternalCheckError("quotient failed validation", problems)
    proj = ChainAlgebraMap(a, quo, projs)
    bad = proj.check()
    if bad:
        raise InternalCheckError("quotient projection is not a map", bad)
    quo.quotient_lifts = tuple(lifts)
    return quo, proj
