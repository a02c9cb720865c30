"""Seeded random generators shared by the property and acceptance suites.

Three families: random bilinear forms for the orthogonal-complement lemma,
randomly decorated corpus skeletons for the stage property test, and
single-entry perturbations of serialized algebra files for axiom fuzzing.
All randomness flows through a caller-supplied random.Random.
"""
from __future__ import annotations

import random
from typing import Optional

from pdcdga.cdga import CDGA
from pdcdga.duality import Orientation, orthogonal_complement, restrict_form
from pdcdga.exactfield import Matrix, PrimeField, QQ, Subspace

FIELDS = (QQ, PrimeField(2), PrimeField(3), PrimeField(5))


def rand_field(rng: random.Random):
    return rng.choice(FIELDS)


def rand_scalar(rng: random.Random, field, nonzero: bool = False):
    while True:
        x = field.from_int(rng.randint(-3, 3))
        if not nonzero or x != field.zero:
            return x


# ---------------------------------------------------------------------------
# orthogonal-complement lemma trials


def _rand_form(rng: random.Random, field, dim: int, antisym: bool) -> Matrix:
    rows = [[field.zero] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            x = rand_scalar(rng, field)
            rows[i][j] = x
            rows[j][i] = field.neg(x) if antisym else x
        if antisym:
            rows[i][i] = field.zero
    return Matrix(field, dim, dim, rows)


def perp_trial(rng: random.Random) -> Optional[str]:
    """One lemma instance; None on success, a description on failure.

    For a nondegenerate (anti)symmetric form F on V and any subspace W:
    F|_W nondegenerate iff W meets its orthogonal complement trivially,
    and in that case V = W + W-perp with F nondegenerate on both parts.
    """
    field = rand_field(rng)
    antisym = rng.random() < 0.5
    dim = rng.choice((2, 4, 6)) if antisym else rng.randint(1, 7)
    form = _rand_form(rng, field, dim, antisym)
    for _ in range(50):
        if form.is_nondegenerate():
            break
        form = _rand_form(rng, field, dim, antisym)
    else:
        return "could not sample a nondegenerate form"
    wdim = rng.randint(0, dim)
    w = Subspace.from_rows(field, dim,
                           [[rand_scalar(rng, field) for _ in range(dim)]
                            for _ in range(wdim)])
    perp = orthogonal_complement(form, w)
    meets = w.intersect(perp).dim
    restricted_ok = (w.dim == 0) or restrict_form(form, w).is_nondegenerate()
    if restricted_ok != (meets == 0):
        return ("restricted form nondegenerate=%s but W meets W-perp in"
                " dim %d" % (restricted_ok, meets))
    if restricted_ok:
        if w.add(perp).dim != dim:
            return "W + W-perp is not everything"
        if perp.dim and not restrict_form(form, perp).is_nondegenerate():
            return "form degenerate on W-perp"
    return None


# ---------------------------------------------------------------------------
# decorated corpus skeletons


def _skeleton(rng: random.Random, field):
    """(named, d_rows, products, n, trunc): one of four shapes, before junk."""
    kind = rng.randrange(4)
    if kind == 0:  # sphere
        return {0: ["1"], 7: ["x"]}, {}, {}, 7, 9
    if kind == 1:  # product of odd spheres
        return ({0: ["1"], 3: ["a"], 5: ["b"], 8: ["ab"]}, {},
                {(3, 0, 5, 0): {0: field.one}}, 8, 10)
    if kind == 2:  # degenerate degree-4 pairing, one odd stage
        c = rand_scalar(rng, field, nonzero=True)
        e = rand_scalar(rng, field)  # 0 breaks PD cohomology: rejected
        return ({0: ["1"], 4: ["h", "gp"], 5: ["al"], 8: ["x"]},
                {4: [[field.zero, field.one]]},
                {(4, 0, 4, 0): {0: e}, (4, 0, 4, 1): {0: c}}, 8, 10)
    # two exact orphan pairs, one surviving even stage
    c = rand_scalar(rng, field, nonzero=True)
    return ({0: ["1"], 3: ["b"], 4: ["be"], 5: ["gp"], 6: ["al"],
             8: ["x"]},
            {3: [[field.one]], 5: [[field.one]]},
            {(3, 0, 5, 0): {0: c}}, 8, 10)


def decorated_instance(rng: random.Random
                       ) -> Optional[tuple[CDGA, int, Orientation]]:
    """A random valid oriented CDGA, or None when the draw fails the
    entry hypotheses (caller resamples)."""
    from pdcdga.pipeline import check_hypotheses

    field = rand_field(rng)
    named, d_rows, products, n, trunc = _skeleton(rng, field)
    named = {deg: list(row) for deg, row in named.items()}
    dense = {deg: [list(r) for r in rows] for deg, rows in d_rows.items()}

    for q in range(rng.randint(0, 3)):
        lo = rng.randint(3, n - 2)
        named.setdefault(lo, []).append("jy%d" % q)
        named.setdefault(lo + 1, []).append("jz%d" % q)

    dims = {deg: len(row) for deg, row in named.items()}
    mats = []
    for i in range(trunc):
        rows = [[field.zero] * dims.get(i, 0)
                for _ in range(dims.get(i + 1, 0))]
        base = dense.get(i)
        if base:
            for r, row in enumerate(base):
                for cidx, x in enumerate(row):
                    rows[r][cidx] = x
        mats.append(rows)
    # each junk pair jy -> jz is exact with every junk product zero
    for q in range(3):
        tag = "jy%d" % q
        for deg, row in named.items():
            if tag in row:
                src = row.index(tag)
                dst = named[deg + 1].index("jz%d" % q)
                mats[deg][dst][src] = field.one
    diff = [Matrix(field, dims.get(i + 1, 0), dims.get(i, 0), mats[i])
            for i in range(trunc)]
    names = [named.get(i, []) for i in range(trunc + 1)]
    algebra = CDGA(field, trunc, names, diff, products)
    if check_hypotheses(algebra, n):
        return None
    top = [field.zero] * algebra.dim(n)
    top[names[n].index("x" if "x" in names[n] else "ab")] = field.one
    return algebra, n, Orientation(n, tuple(top))


# ---------------------------------------------------------------------------
# single-entry file perturbations


_Q_POOL = ("0", "1", "-1", "2", "3", "1/2", "-2/3", "5")


def _perturb_scalar(rng: random.Random, doc: dict) -> Optional[str]:
    if doc.get("field") == "Q":
        pool = _Q_POOL
    else:
        pool = tuple(str(i) for i in range(doc["field"]["p"]))
    spots = []
    for e, ent in enumerate(doc.get("d", [])):
        for q in range(len(ent["to"])):
            spots.append(("d", e, q))
    for e, ent in enumerate(doc.get("mul", [])):
        for q in range(len(ent["value"])):
            spots.append(("mul", e, q))
    for q in range(len(doc.get("orientation", []))):
        spots.append(("orientation", 0, q))
    if not spots:
        return None
    kind, e, q = rng.choice(spots)
    if kind == "d":
        cell = doc["d"][e]["to"][q]
    elif kind == "mul":
        cell = doc["mul"][e]["value"][q]
    else:
        cell = doc["orientation"][q]
    old = cell[1]
    choices = [s for s in pool if s != old]
    if not choices:
        return None
    new = rng.choice(choices)
    cell[1] = new
    return "%s entry %d slot %d: %s -> %s" % (kind, e, q, old, new)


def _perturb_insert(rng: random.Random, doc: dict) -> Optional[str]:
    # a single inserted product row that breaks an axiom: either a unit row
    # sending 1*e_t somewhere else, or a nonzero square in odd degree
    basis = doc["basis"]
    trunc = len(basis) - 1
    options = []
    for j in range(1, trunc + 1):
        if len(basis[j]) >= 2:
            options.append(("unit", j))
    for i in range(1, trunc + 1, 2):
        if 2 * i <= trunc and basis[i] and basis[2 * i]:
            options.append(("odd-square", i))
    if not options:
        return None
    kind, deg = rng.choice(options)
    if kind == "unit":
        t = rng.randrange(len(basis[deg]))
        s = rng.choice([x for x in range(len(basis[deg])) if x != t])
        doc.setdefault("mul", []).append(
            {"deg_a": 0, "a": 0, "deg_b": deg, "b": t, "value": [[s, "1"]]})
        return "inserted unit row 1*%s -> %s" % (basis[deg][t], basis[deg][s])
    t = rng.randrange(len(basis[deg]))
    r = rng.randrange(len(basis[2 * deg]))
    doc.setdefault("mul", []).append(
        {"deg_a": deg, "a": t, "deg_b": deg, "b": t, "value": [[r, "1"]]})
    return "inserted odd square %s^2 -> %s" % (basis[deg][t],
                                               basis[2 * deg][r])


def perturb_doc(rng: random.Random, doc: dict) -> Optional[tuple[dict, str]]:
    """One-entry corruption of a serialized algebra; (new doc, where).

    Scalar replacements dominate; a minority of draws instead insert one
    axiom-breaking product row so the validator path gets exercised too.
    """
    import copy

    doc = copy.deepcopy(doc)
    if rng.random() < 0.3:
        where = _perturb_insert(rng, doc)
    else:
        where = _perturb_scalar(rng, doc)
    if where is None:
        return None
    return doc, where
