"""Exact text serialization of algebras (JSON documents).

The document carries: a field descriptor ("Q" or {"p": prime}), the
duality dimension n, basis names per degree, sparse differential entries,
sparse products for deg_a <= deg_b only, and an optional orientation row
on degree n.  Scalars travel as decimal strings ("7", "-3/4") so nothing
is lost over the wire.  The reader is strict: out-of-range indices,
duplicate entries, malformed scalars, or products stored on the wrong
side of the diagonal are parse errors, not guesses.
"""
from __future__ import annotations

import json
import re
from typing import Optional

from .cdga import CDGA
from .duality import Orientation
from .exactfield import Field, Matrix, PrimeField, QQ

_SCALAR_RE = re.compile(r"^-?\d+(/\d+)?$")


class ParseError(Exception):
    """The document cannot be read as an algebra; the message says where."""


def _fail(where: str, msg: str):
    raise ParseError("%s: %s" % (where, msg))


def _expect_int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(where, "expected an integer, got %r" % (x,))
    return x


def parse_scalar(field: Field, s, where: str):
    if not isinstance(s, str) or not _SCALAR_RE.match(s):
        _fail(where, "scalar must be a string like '3' or '-3/4', got %r"
              % (s,))
    try:
        return field.parse(s)
    except (ZeroDivisionError, ValueError) as e:
        _fail(where, "bad scalar %r: %s" % (s, e))


def parse_field_desc(desc, where: str = "field") -> Field:
    if desc == "Q":
        return QQ
    if (isinstance(desc, dict) and set(desc) == {"p"}
            and isinstance(desc.get("p"), int)
            and not isinstance(desc.get("p"), bool)):
        try:
            return PrimeField(desc["p"])
        except ValueError as e:
            _fail(where, str(e))
    _fail(where, "expected \"Q\" or {\"p\": prime}, got %r" % (desc,))


def field_desc(field: Field):
    return "Q" if field.characteristic == 0 else {"p": field.characteristic}


def _sparse_vec(field: Field, pairs, length: int, where: str) -> list:
    if not isinstance(pairs, list):
        _fail(where, "expected a list of [index, scalar] pairs")
    out = [field.zero] * length
    seen = set()
    for pos, pair in enumerate(pairs):
        here = "%s[%d]" % (where, pos)
        if not (isinstance(pair, list) and len(pair) == 2):
            _fail(here, "expected [index, scalar], got %r" % (pair,))
        idx = _expect_int(pair[0], here)
        if not 0 <= idx < length:
            _fail(here, "index %d out of range 0..%d" % (idx, length - 1))
        if idx in seen:
            _fail(here, "index %d listed twice" % idx)
        seen.add(idx)
        out[idx] = parse_scalar(field, pair[1], here)
    return out


def algebra_from_doc(doc) -> tuple[CDGA, int, Optional[Orientation]]:
    """Read a document into (algebra, n, orientation or None)."""
    if not isinstance(doc, dict):
        _fail("document", "expected a JSON object")
    allowed = {"field", "n", "basis", "d", "mul", "orientation"}
    extra = set(doc) - allowed
    if extra:
        _fail("document", "unknown keys: %s" % ", ".join(sorted(extra)))
    for key in ("field", "n", "basis"):
        if key not in doc:
            _fail("document", "missing key %r" % key)

    field = parse_field_desc(doc["field"])
    n = _expect_int(doc["n"], "n")
    if n < 0:
        _fail("n", "must be nonnegative")

    basis = doc["basis"]
    if not (isinstance(basis, list) and basis
            and all(isinstance(row, list) for row in basis)):
        _fail("basis", "expected a nonempty list of name lists")
    for i, row in enumerate(basis):
        for nm in row:
            if not isinstance(nm, str) or not nm:
                _fail("basis[%d]" % i, "names must be nonempty strings")
    trunc = len(basis) - 1
    if n > trunc:
        _fail("n", "exceeds the top degree %d of the basis table" % trunc)
    dims = [len(row) for row in basis]

    d_dense = [[[field.zero] * dims[i] for _ in range(dims[i + 1])]
               for i in range(trunc)]
    seen_d = set()
    for pos, ent in enumerate(doc.get("d", [])):
        where = "d[%d]" % pos
        if not (isinstance(ent, dict) and set(ent) == {"deg", "from", "to"}):
            _fail(where, "expected {deg, from, to}")
        deg = _expect_int(ent["deg"], where + ".deg")
        src = _expect_int(ent["from"], where + ".from")
        if not 0 <= deg < trunc:
            _fail(where, "deg %d out of range 0..%d" % (deg, trunc - 1))
        if not 0 <= src < dims[deg]:
            _fail(where, "from %d out of range in degree %d" % (src, deg))
        if (deg, src) in seen_d:
            _fail(where, "duplicate entry for degree %d element %d"
                  % (deg, src))
        seen_d.add((deg, src))
        col = _sparse_vec(field, ent["to"], dims[deg + 1], where + ".to")
        for r, x in enumerate(col):
            d_dense[deg][r][src] = x
    diff = [Matrix.zeros(field, dims[i + 1], dims[i]) if dims[i + 1] == 0
            or dims[i] == 0 else Matrix.from_rows(field, d_dense[i])
            for i in range(trunc)]

    mul = {}
    for pos, ent in enumerate(doc.get("mul", [])):
        where = "mul[%d]" % pos
        if not (isinstance(ent, dict)
                and set(ent) == {"deg_a", "a", "deg_b", "b", "value"}):
            _fail(where, "expected {deg_a, a, deg_b, b, value}")
        i = _expect_int(ent["deg_a"], where + ".deg_a")
        j = _expect_int(ent["deg_b"], where + ".deg_b")
        a = _expect_int(ent["a"], where + ".a")
        b = _expect_int(ent["b"], where + ".b")
        if i > j:
            _fail(where, "products must be stored with deg_a <= deg_b")
        if not 0 <= i <= j <= trunc or i + j > trunc:
            _fail(where, "degrees (%d, %d) out of range" % (i, j))
        if not 0 <= a < dims[i]:
            _fail(where, "a %d out of range in degree %d" % (a, i))
        if not 0 <= b < dims[j]:
            _fail(where, "b %d out of range in degree %d" % (b, j))
        vec = _sparse_vec(field, ent["value"], dims[i + j], where + ".value")
        if i == j and a > b:
            # flip to the canonical side; odd degrees pick up the Koszul sign
            a, b = b, a
            if i % 2 == 1:
                vec = [field.neg(x) for x in vec]
        if (i, a, j, b) in mul:
            _fail(where, "duplicate product entry (%d, %d, %d, %d)"
                  % (i, a, j, b))
        mul[(i, a, j, b)] = {c: x for c, x in enumerate(vec)
                             if x != field.zero}

    ori = None
    if "orientation" in doc:
        row = _sparse_vec(field, doc["orientation"], dims[n], "orientation")
        ori = Orientation(n, tuple(row))

    try:
        algebra = CDGA(field, trunc, basis, diff, mul)
    except ValueError as e:
        raise ParseError("algebra tables: %s" % e) from None
    return algebra, n, ori


def algebra_to_doc(a: CDGA, n: int, ori: Optional[Orientation] = None) -> dict:
    """Write (algebra, n, orientation) as a plain document."""
    f = a.field
    d_entries = []
    for i in range(a.trunc):
        m = a.diff[i]
        for src in range(a.dim(i)):
            pairs = [[r, f.format(m.rows[r][src])] for r in range(m.nrows)
                     if m.rows[r][src] != f.zero]
            if pairs:
                d_entries.append({"deg": i, "from": src, "to": pairs})
    mul_entries = []
    for key in sorted(a.mul):
        i, x, j, y = key
        pairs = [[c, f.format(v)] for c, v in sorted(a.mul[key].items())]
        mul_entries.append({"deg_a": i, "a": x, "deg_b": j, "b": y,
                            "value": pairs})
    doc = {
        "field": field_desc(f),
        "n": n,
        "basis": [list(row) for row in a.names],
        "d": d_entries,
        "mul": mul_entries,
    }
    if ori is not None:
        doc["orientation"] = [[c, f.format(v)]
                              for c, v in enumerate(ori.functional)
                              if v != f.zero]
    return doc


def loads(text: str) -> tuple[CDGA, int, Optional[Orientation]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("not valid JSON: %s" % e) from None
    return algebra_from_doc(doc)


def dumps(a: CDGA, n: int, ori: Optional[Orientation] = None) -> str:
    return json.dumps(algebra_to_doc(a, n, ori), indent=2) + "\n"
