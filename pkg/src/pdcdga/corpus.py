"""Built-in example algebras for the command line and the test suite.

Each instance is tiny (a handful of basis elements) but targets a specific
code path: spheres for the trivial route, acyclic junk for the orphan
quotient, a degenerate degree-4 pairing for a genuine surgery stage, prime
fields for the characteristic-p branch, and a dimension-4 ring for the
formality shortcut.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cdga import CDGA
from .duality import Orientation
from .exactfield import QQ, Field, Matrix, PrimeField


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    description: str
    algebra: CDGA
    n: int
    orientation: Orientation


def _algebra(field: Field, trunc: int, named: dict, d_rows: dict,
             products: dict) -> CDGA:
    """Assemble a CDGA from sparse degree data.

    named: degree -> basis names; d_rows: degree -> dense matrix rows into
    the next degree; products: (deg_a, a, deg_b, b) -> {index: int} with
    integer values converted into the field.
    """
    names = [list(named.get(i, [])) for i in range(trunc + 1)]
    dims = [len(r) for r in names]
    diff = []
    for i in range(trunc):
        if i in d_rows:
            diff.append(Matrix.from_rows(
                field, [[field.from_int(x) for x in row]
                        for row in d_rows[i]]))
        else:
            diff.append(Matrix.zeros(field, dims[i + 1], dims[i]))
    mul = {key: {c: field.from_int(v) for c, v in val.items()}
           for key, val in products.items()}
    return CDGA(field, trunc, names, diff, mul)


def _orient(field: Field, n: int, dim: int, index: int = 0) -> Orientation:
    row = [field.zero] * dim
    row[index] = field.one
    return Orientation(n, tuple(row))


def _sphere7(field: Field) -> CDGA:
    return _algebra(field, 9, {0: ["1"], 7: ["x"]}, {}, {})


def _sphere7_junk(field: Field) -> CDGA:
    # an exact pair y, z glued onto the sphere; every junk product vanishes
    return _algebra(field, 9, {0: ["1"], 3: ["y"], 4: ["z"], 7: ["x"]},
                    {3: [[1]]}, {})


def _surgery8(field: Field) -> CDGA:
    # H is PD with classes 1, [h], [x] but the chain-level degree-4 pairing
    # is degenerate: gp pairs to zero against ker d, yet [h][h] = [h][gp']
    # forces a stage with l = 1
    return _algebra(field, 10,
                    {0: ["1"], 4: ["h", "gp"], 5: ["al"], 8: ["x"]},
                    {4: [[0, 1]]},
                    {(4, 0, 4, 0): {0: 1}, (4, 0, 4, 1): {0: 1}})


def _product35(field: Field) -> CDGA:
    # two odd spheres multiplied together; already a duality algebra
    return _algebra(field, 10, {0: ["1"], 3: ["a"], 5: ["b"], 8: ["ab"]},
                    {}, {(3, 0, 5, 0): {0: 1}})


def _even_stage8_f2() -> CDGA:
    # over F_2 the orphan pair (b, gp) survives to the even stage k = 6,
    # forcing the characteristic-p generators u, v
    return _algebra(PrimeField(2), 10,
                    {0: ["1"], 3: ["b"], 4: ["be"], 5: ["gp"], 6: ["al"],
                     8: ["x"]},
                    {3: [[1]], 5: [[1]]},
                    {(3, 0, 5, 0): {0: 1}})


def _even_stage10_f3() -> CDGA:
    # middle-dimension even stage (n = 10, k = 6) over F_3 with l = 2
    return _algebra(PrimeField(3), 12,
                    {0: ["1"], 5: ["gp", "b"], 6: ["al", "be"], 10: ["x"]},
                    {5: [[1, 0], [0, 1]]},
                    {(5, 0, 5, 1): {0: 1}})


def _cp2_formal4() -> CDGA:
    # truncated polynomial ring on a degree-2 class; n = 4 formality route
    return _algebra(QQ, 6, {0: ["1"], 2: ["t"], 4: ["t2"]},
                    {}, {(2, 0, 2, 0): {0: 1}})


def _instance(name: str) -> CorpusInstance:
    if name == "sphere7":
        a = _sphere7(QQ)
        return CorpusInstance(name, "k in degrees 0 and 7, zero differential",
                              a, 7, _orient(QQ, 7, a.dim(7)))
    if name == "sphere7-acyclic-junk":
        a = _sphere7_junk(QQ)
        return CorpusInstance(name, "sphere7 plus an exact pair dy = z with"
                              " all junk products zero",
                              a, 7, _orient(QQ, 7, a.dim(7)))
    if name == "surgery-8":
        a = _surgery8(QQ)
        return CorpusInstance(name, "degenerate degree-4 pairing over Q;"
                              " exactly one surgery stage fires",
                              a, 8, _orient(QQ, 8, a.dim(8)))
    if name == "surgery-8-f2":
        f = PrimeField(2)
        a = _surgery8(f)
        return CorpusInstance(name, "surgery-8 with scalars in F_2",
                              a, 8, _orient(f, 8, a.dim(8)))
    if name == "product-3-5":
        a = _product35(QQ)
        return CorpusInstance(name, "product of spheres in degrees 3 and 5;"
                              " already a duality algebra",
                              a, 8, _orient(QQ, 8, a.dim(8)))
    if name == "even-stage-8-f2":
        a = _even_stage8_f2()
        return CorpusInstance(name, "even stage k = 6 over F_2 with l = 1;"
                              " adjoins the characteristic-p generators",
                              a, 8, _orient(PrimeField(2), 8, a.dim(8)))
    if name == "even-stage-10-f3":
        a = _even_stage10_f3()
        return CorpusInstance(name, "middle even stage k = 6 over F_3 with"
                              " l = 2", a, 10,
                              _orient(PrimeField(3), 10, a.dim(10)))
    if name == "cp2-formal-4":
        a = _cp2_formal4()
        return CorpusInstance(name, "truncated polynomial ring, n = 4;"
                              " exercises the formality shortcut",
                              a, 4, _orient(QQ, 4, a.dim(4)))
    raise KeyError(name)


NAMES = (
    "sphere7",
    "sphere7-acyclic-junk",
    "surgery-8",
    "surgery-8-f2",
    "product-3-5",
    "even-stage-8-f2",
    "even-stage-10-f3",
    "cp2-formal-4",
)


def build(name: str) -> CorpusInstance:
    """Look up a built-in instance by name; KeyError when unknown."""
    return _instance(name)


def all_instances() -> list[CorpusInstance]:
    return [build(name) for name in NAMES]
