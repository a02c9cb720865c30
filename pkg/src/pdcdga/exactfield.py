"""Exact scalars and deterministic linear algebra over Q and F_p.

Scalars are arbitrary-precision ``fractions.Fraction`` over the rationals
and plain ints in [0, p) over a prime field.  No floats anywhere: every
rank decision is semantic.

Conventions used throughout the package:

* vectors are tuples of scalars;
* a matrix represents a linear map in column convention, i.e. ``m.apply(x)``
  computes m @ x for a coordinate vector x of length ``m.ncols``;
* a :class:`Subspace` stores its basis as the *rows* of a reduced-echelon
  matrix, so equal subspaces compare equal.

All operations are deterministic: same input, same output, bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _modp


# ---------------------------------------------------------------------------
# fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Rationals:
    """The field Q; scalars are ``Fraction`` in lowest terms."""

    characteristic: int = 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def parse(self, s: str) -> Fraction:
        return Fraction(s)

    def format(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p; scalars are ints reduced to [0, p)."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError("not a prime: %r" % (self.p,))
        if self.p >= 1 << 31:
            raise ValueError("prime too large: %d" % self.p)

    @property
    def characteristic(self) -> int:
        return self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 mod %d" % self.p)
        return pow(a, -1, self.p)

    def parse(self, s: str) -> int:
        q = Fraction(s)
        if q.denominator % self.p == 0:
            raise ValueError("denominator of %r vanishes mod %d" % (s, self.p))
        return (q.numerator * pow(q.denominator, -1, self.p)) % self.p

    def format(self, a) -> str:
        return str(a % self.p)

    def __str__(self) -> str:
        return "F%d" % self.p


QQ = Rationals()

Field = Rationals | PrimeField
Vector = tuple


# ---------------------------------------------------------------------------
# vector helpers


def zero_vec(field: Field, n: int) -> Vector:
    return (field.zero,) * n


def vec_add(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.add(a, b) for a, b in zip(u, v))

def vec_sub(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.sub(a, b) for a, b in zip(u, v))

def vec_scale(field: Field, c, v: Sequence) -> Vector:
    return tuple(field.mul(c, a) for a in v)

def vec_dot(field: Field, u: Sequence, v: Sequence):
    acc = field.zero
    for a, b in zip(u, v):
        if a != field.zero and b != field.zero:
            acc = field.add(acc, field.mul(a, b))
    return acc

def is_zero_vec(field: Field, v: Sequence) -> bool:
    z = field.zero
    return all(a == z for a in v)


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable exact matrix; rows are tuples of field scalars."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_rref")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: Iterable[Sequence]):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("row shape mismatch")
        self.rows = rows
        self._rref = None

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "Matrix":
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, nrows, ncols, [(z,) * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, [tuple(o if i == j else z for j in range(n)) for i in range(n)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return "Matrix(%s, %dx%d)" % (self.field, self.nrows, self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      [tuple(self.rows[r][c] for r in range(self.nrows)) for c in range(self.ncols)])

    def apply(self, x: Sequence) -> Vector:
        """m @ x for a coordinate vector x of length ncols."""
        if len(x) != self.ncols:
            raise ValueError("vector length %d, expected %d" % (len(x), self.ncols))
        return tuple(vec_dot(self.field, row, x) for row in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %dx%d @ %dx%d"
                             % (self.nrows, self.ncols, other.nrows, other.ncols))
        f = self.field
        ot = other.transpose()
        return Matrix(f, self.nrows, other.ncols,
                      [tuple(vec_dot(f, row, col) for col in ot.rows) for row in self.rows])

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for row in self.rows for a in row)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      [a + b for a, b in zip(self.rows, other.rows)])

    @classmethod
    def vstack(cls, field: Field, mats: Sequence["Matrix"], ncols: Optional[int] = None) -> "Matrix":
        if ncols is None:
            ncols = mats[0].ncols
        rows: list = []
        for m in mats:
            if m.ncols != ncols:
                raise ValueError("column count mismatch")
            rows.extend(m.rows)
        return cls(field, len(rows), ncols, rows)

    # -- echelon machinery --------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...], int]:
        """(reduced row echelon form, pivot columns, rank)."""
        if self._rref is None:
            if isinstance(self.field, PrimeField) and self.nrows and self.ncols:
                arr = np.array(self.rows, dtype=np.int64)
                red, piv = _modp.rref_mod_p(arr, self.field.p)
                rmat = Matrix(self.field, self.nrows, self.ncols,
                              [tuple(int(v) for v in row) for row in red])
                self._rref = (rmat, tuple(piv), len(piv))
            else:
                self._rref = self._rref_generic()
        return self._rref

    def _rref_generic(self) -> tuple["Matrix", tuple[int, ...], int]:
        f = self.field
        rows = [list(r) for r in self.rows]
        nrows, ncols = self.nrows, self.ncols
        piv: list[int] = []
        rank = 0
        for c in range(ncols):
            sel = next((r for r in range(rank, nrows) if rows[r][c] != f.zero), None)
            if sel is None:
                continue
            rows[rank], rows[sel] = rows[sel], rows[rank]
            inv = f.inv(rows[rank][c])
            rows[rank] = [f.mul(inv, a) for a in rows[rank]]
            for r in range(nrows):
                if r != rank and rows[r][c] != f.zero:
                    factor = rows[r][c]
                    rows[r] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[r], rows[rank])]
            piv.append(c)
            rank += 1
            if rank == nrows:
                break
        return Matrix(f, nrows, ncols, rows), tuple(piv), rank

    def rank(self) -> int:
        return self.rref()[2]

    def kernel(self) -> "Subspace":
        """{x : m @ x = 0} as a subspace of k^ncols."""
        red, piv, rank = self.rref()
        f = self.field
        free = [c for c in range(self.ncols) if c not in piv]
        rows = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for r, pc in enumerate(piv):
                v[pc] = f.neg(red.rows[r][fc])
            rows.append(tuple(v))
        return Subspace.from_rows(f, self.ncols, rows)

    def image(self) -> "Subspace":
        """Column span as a subspace of k^nrows."""
        return Subspace.from_rows(self.field, self.nrows, self.transpose().rows)

    def solve(self, b: Sequence) -> Optional[Vector]:
        """Deterministic solution of m @ x = b (free variables zero), or None."""
        if len(b) != self.nrows:
            raise ValueError("rhs length %d, expected %d" % (len(b), self.nrows))
        aug = self.hstack(Matrix(self.field, self.nrows, 1, [(v,) for v in b]))
        red, piv, rank = aug.rref()
        if self.ncols in piv:
            return None
        f = self.field
        x = [f.zero] * self.ncols
        for r, pc in enumerate(piv):
            x[pc] = red.rows[r][self.ncols]
        return tuple(x)

    def invert(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        aug = self.hstack(Matrix.identity(self.field, self.nrows))
        red, piv, rank = aug.rref()
        # the identity block keeps the augmented rank at nrows no matter
        # what; invertibility shows up as the pivots staying on the left
        if piv[:self.nrows] != tuple(range(self.nrows)):
            raise ValueError("singular matrix")
        return Matrix(self.field, self.nrows, self.nrows,
                      [row[self.nrows:] for row in red.rows])

    def is_nondegenerate(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of k^ambient_dim with a canonical reduced-echelon row basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix, pivots: tuple[int, ...]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_rows(cls, field: Field, ambient_dim: int, rows: Sequence[Sequence]) -> "Subspace":
        m = Matrix(field, len(rows), ambient_dim, rows)
        red, piv, rank = m.rref()
        return cls(field, ambient_dim, Matrix(field, rank, ambient_dim, red.rows[:rank]), piv)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls.from_rows(field, ambient_dim, [])

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls.from_rows(field, ambient_dim, Matrix.identity(field, ambient_dim).rows)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __repr__(self) -> str:
        return "Subspace(dim %d of k^%d)" % (self.dim, self.ambient_dim)

    def reduce(self, v: Sequence) -> Vector:
        """Residue of v after elimination against the echelon basis."""
        f = self.field
        v = list(v)
        for row, pc in zip(self.basis.rows, self.pivots):
            c = v[pc]
            if c != f.zero:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return is_zero_vec(self.field, self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.rows)

    def coords_of(self, v: Sequence) -> Optional[Vector]:
        """Coordinates of v in the echelon basis, or None if v is outside."""
        if not self.contains(v):
            return None
        # Echelon basis: the coordinate on row r is just v[pivot_r], then peel off.
        f = self.field
        v = list(v)
        coords = []
        for row, pc in zip(self.basis.rows, self.pivots):
            c = v[pc]
            coords.append(c)
            if c != f.zero:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(coords)

    def add(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        return Subspace.from_rows(self.field, self.ambient_dim,
                                  self.basis.rows + other.basis.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        f = self.field
        s, t = self.dim, other.dim
        if s == 0 or t == 0:
            return Subspace.zero(f, self.ambient_dim)
        # Solve sum c_i v_i = sum d_j w_j: kernel of [V^T | -W^T].
        cols = []
        for r in self.basis.rows:
            cols.append(r)
        for r in other.basis.rows:
            cols.append(tuple(f.neg(a) for a in r))
        m = Matrix(f, self.ambient_dim, s + t,
                   [tuple(cols[j][i] for j in range(s + t)) for i in range(self.ambient_dim)])
        ker = m.kernel()
        rows = []
        for kv in ker.basis.rows:
            acc = [f.zero] * self.ambient_dim
            for c, row in zip(kv[:s], self.basis.rows):
                if c != f.zero:
                    acc = [f.add(a, f.mul(c, b)) for a, b in zip(acc, row)]
            rows.append(tuple(acc))
        return Subspace.from_rows(f, self.ambient_dim, rows)


def complement(inner: Subspace, outer: Subspace) -> Subspace:
    """Deterministic complement of ``inner`` inside ``outer``.

    Greedy: walk the echelon basis of ``outer`` in order and keep the vectors
    that stay independent from ``inner`` plus the vectors already kept; the
    result is returned re-echelonized.  Raises ValueError when inner is not
    contained in outer.
    """
    if inner.ambient_dim != outer.ambient_dim:
        raise ValueError("ambient mismatch")
    if not outer.contains_space(inner):
        raise ValueError("inner subspace not contained in outer")
    f = inner.field
    acc = list(inner.basis.rows)
    span = Subspace.from_rows(f, inner.ambient_dim, acc)
    kept = []
    for v in outer.basis.rows:
        if not span.contains(v):
            kept.append(v)
            acc.append(v)
            span = Subspace.from_rows(f, inner.ambient_dim, acc)
    return Subspace.from_rows(f, inner.ambient_dim, kept)
