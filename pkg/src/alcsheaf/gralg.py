"""Exact graded linear algebra over S, the symmetric algebra of the
coweight lattice.

S is graded with the coweight space in degree 2.  Modules are graded
submodules of finite direct sums of (shifted) copies of S, presented by
homogeneous generators.  Kernels, images, intersections and rank series
are computed degree by degree with exact field linear algebra; no
Groebner bases.  Completeness of a generator search is certified either
against an expected rank series (pinned by a cofiltration identity) or
by stabilization: no new generator for 2|R+| + 4 consecutive degrees,
followed by a degreewise freeness check.

Flattened vectors: a homogeneous element of degree d in ⊕ S involves the
columns (coordinate, exponent tuple); all linear algebra happens on
sparse dicts over such columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from functools import lru_cache

from .laurent import RankSeries

# ------------------------------------------------------------------ monomials

@lru_cache(maxsize=None)
def monomials(nvars: int, total: int):
    """All exponent tuples with the given total, lexicographically sorted."""
    if nvars == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in monomials(nvars - 1, total - first):
            out.append((first,) + rest)
    return tuple(out)


def n_monomials(nvars: int, total: int) -> int:
    return len(monomials(nvars, total)) if total >= 0 else 0


# ------------------------------------------------------------------ polynomials

def p_zero():
    return {}

def p_one(field, nvars):
    return {(0,) * nvars: field.one}

def p_linear(field, cc):
    """The degree-2 element of S given by a coweight vector."""
    n = len(cc)
    out = {}
    for i, c in enumerate(cc):
        fc = field.of(c)
        if not field.is_zero(fc):
            exp = tuple(1 if j == i else 0 for j in range(n))
            out[exp] = fc
    return out

def p_add(field, a, b):
    out = dict(a)
    for e, c in b.items():
        s = field.add(out.get(e, field.zero), c)
        if field.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out

def p_sub(field, a, b):
    return p_add(field, a, p_scale(field, field.neg(field.one), b))

def p_scale(field, c, a):
    if field.is_zero(c):
        return {}
    return {e: field.mul(c, v) for e, v in a.items()}

def p_mul(field, a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = field.add(out.get(e, field.zero), field.mul(c1, c2))
            if field.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out

def p_eval(field, a, point):
    total = field.zero
    for e, c in a.items():
        v = 1
        for x, k in zip(point, e):
            v *= x ** k
        total = field.add(total, field.mul(c, field.of(v)))
    return total

def p_degree(a):
    """Graded degree (2 per exponent); None for the zero polynomial."""
    if not a:
        return None
    degs = {2 * sum(e) for e in a}
    assert len(degs) == 1, "inhomogeneous polynomial"
    return degs.pop()

def p_reduce_mod_linear(field, a, cc):
    """Residue of a modulo the linear form of cc: substitute the pivot
    variable; zero iff the form divides a."""
    piv = next(i for i, c in enumerate(cc) if not field.is_zero(field.of(c)))
    inv = field.inv(field.of(cc[piv]))
    out = {}
    for e, c in a.items():
        # replace x_piv^k by (-(sum_{i!=piv} cc_i x_i)/cc_piv)^k
        k = e[piv]
        base = {tuple(0 if i == piv else x for i, x in enumerate(e)): c}
        if k:
            subst = {}
            for i, ci in enumerate(cc):
                if i == piv:
                    continue
                fci = field.of(ci)
                if field.is_zero(fci):
                    continue
                exp = tuple(1 if j == i else 0 for j in range(len(cc)))
                subst[exp] = field.neg(field.mul(fci, inv))
            power = p_one(field, len(cc))
            for _ in range(k):
                power = p_mul(field, power, subst)
            base = p_mul(field, base, power)
        out = p_add(field, out, base)
    return out


# ------------------------------------------------------------------ spans

class Span:
    """Row space of sparse vectors with totally ordered column keys.

    Rows keep the invariant support(row) ⊆ {pivot} ∪ {cols > pivot}, the
    pivot entry is 1.  Optionally tracks each vector's expression over an
    auxiliary key space (augmented elimination).
    """

    def __init__(self, field, track=False):
        self.field = field
        self.rows = {}
        self.track = track

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec, aux=None):
        field = self.field
        vec = dict(vec)
        aux = dict(aux) if aux is not None else None
        while True:
            hit = None
            for c in vec:
                if c in self.rows and (hit is None or c < hit):
                    hit = c
            if hit is None:
                break
            coef = vec[hit]
            row, raux = self.rows[hit]
            for c, v in row.items():
                s = field.sub(vec.get(c, field.zero), field.mul(coef, v))
                if field.is_zero(s):
                    vec.pop(c, None)
                else:
                    vec[c] = s
            if aux is not None and raux is not None:
                for c, v in raux.items():
                    s = field.sub(aux.get(c, field.zero), field.mul(coef, v))
                    if field.is_zero(s):
                        aux.pop(c, None)
                    else:
                        aux[c] = s
        return vec, aux

    def insert(self, vec, aux=None):
        """Reduce and store; returns the new pivot or None if absorbed."""
        vec, aux = self.reduce(vec, aux)
        if not vec:
            return None, aux
        piv = min(vec)
        inv = self.field.inv(vec[piv])
        vec = {c: self.field.mul(inv, v) for c, v in vec.items()}
        if aux is not None:
            aux = {c: self.field.mul(inv, v) for c, v in aux.items()}
        self.rows[piv] = (vec, aux)
        return piv, aux

    def contains(self, vec) -> bool:
        r, _ = self.reduce(vec)
        return not r

    def basis(self):
        return [row for row, _ in self.rows.values()]

    def basis_with_aux(self):
        return [(row, aux) for row, aux in self.rows.values()]


def nullspace(field, equations, variables):
    """Basis of the solution space of homogeneous sparse linear equations."""
    span = Span(field)
    for eq in equations:
        span.insert(eq)
    pivots = span.rows
    basis = []
    for f in variables:
        if f in pivots:
            continue
        x = {f: field.one}
        for p in sorted(pivots, reverse=True):
            row, _ = pivots[p]
            s = field.zero
            for c, v in row.items():
                if c == p:
                    continue
                if c in x:
                    s = field.add(s, field.mul(v, x[c]))
            if not field.is_zero(s):
                x[p] = field.neg(s)
        basis.append(x)
    return basis


# ------------------------------------------------------- module slice engine

class ModuleSlices:
    """Degreewise spans of the S-span of homogeneous flattened generators.

    Column keys are (coordinate index, exponent tuple); generator degrees
    are module degrees, entries sit in algebraic degree deg + offset.
    """

    def __init__(self, field, nvars, gens, gen_degs, offset=0, track=False):
        self.field = field
        self.nvars = nvars
        self.gens = list(gens)
        self.gen_degs = list(gen_degs)
        self.offset = offset
        self.track = track
        self._spans = {}

    def span(self, d: int) -> Span:
        if d in self._spans:
            return self._spans[d]
        span = Span(self.field, track=self.track)
        prev = self._spans.get(d - 2)
        if prev is None and any(g <= d - 2 for g in self.gen_degs):
            prev = self.span(d - 2)
        if prev is not None:
            for piv, (vec, aux) in sorted(prev.rows.items()):
                for i in range(self.nvars):
                    span.insert(
                        _shift_vec(vec, i),
                        _shift_aux(aux, i) if self.track else None,
                    )
        for gi, (g, gd) in enumerate(zip(self.gens, self.gen_degs)):
            if gd == d:
                aux = None
                if self.track:
                    aux = {(gi, (0,) * self.nvars): self.field.one}
                span.insert(dict(g), aux)
        self._spans[d] = span
        return span

    def dim(self, d: int) -> int:
        return self.span(d).dim

    def contains(self, vec, d: int) -> bool:
        return self.span(d).contains(vec)

    def express(self, vec, d: int):
        """Write vec as sum_i f_i . g_i; returns {gen index: Poly} or None.

        Rows carry aux with the invariant row = sum aux . gens; reducing a
        query with empty aux leaves aux' = -(combination used), so the
        expression coefficients are the negated aux entries.
        """
        assert self.track
        res, aux = self.span(d).reduce(vec, {})
        if res:
            return None
        out = {}
        for (gi, exps), c in aux.items():
            poly = out.setdefault(gi, {})
            poly[exps] = self.field.neg(c)
        return {gi: {e: c for e, c in poly.items() if not self.field.is_zero(c)}
                for gi, poly in out.items()}


def _shift_vec(vec, var_index):
    out = {}
    for (c, e), v in vec.items():
        e2 = tuple(x + (1 if i == var_index else 0) for i, x in enumerate(e))
        out[(c, e2)] = v
    return out


def _shift_aux(aux, var_index):
    if aux is None:
        return None
    out = {}
    for (gi, e), v in aux.items():
        e2 = tuple(x + (1 if i == var_index else 0) for i, x in enumerate(e))
        out[(gi, e2)] = v
    return out


class CertificationError(Exception):
    """A rank or freeness certificate failed."""


@dataclass
class Extraction:
    gen_indices: list        # chosen subset of the raw input, or None
    gens: list               # flattened vectors
    degs: list
    rank: RankSeries
    free: bool
    slices: ModuleSlices


def extract_generators(field, nvars, provider, degree_range, expected=None,
                       stabilize=None, npos=1):
    """Minimal homogeneous generators of a graded module given degreewise.

    provider(d) yields vectors spanning the degree-d slice (each slice must
    be complete).  With an expected rank series the search stops right
    after its top degree and the slice dimensions are checked against it;
    otherwise the search stops after `stabilize` consecutive degrees without
    a new generator and certifies freeness degreewise.
    """
    if stabilize is None:
        stabilize = 2 * npos + 4
    lo, hi = degree_range
    gens, degs = [], []
    slices = ModuleSlices(field, nvars, [], [], track=False)
    last_new = lo - 1
    d = lo
    dims = {}
    while True:
        if expected is not None:
            top = expected.max_degree() if expected.coeffs else lo - 1
            if d > top + 2:
                break
        else:
            if d > last_new + stabilize and d > hi:
                break
        span = slices.span(d)
        for vec in provider(d):
            piv, _ = span.insert(dict(vec))
            if piv is not None:
                # a slice vector outside the span of lower generators
                gens.append(dict(vec))
                degs.append(d)
                slices.gens.append(dict(vec))
                slices.gen_degs.append(d)
                last_new = d
        dims[d] = span.dim
        d += 1
    rank = RankSeries.from_degrees(degs)
    free = all(
        dims[dd] == rank.dim_in_degree(dd, nvars) for dd in dims
    )
    if expected is not None:
        if rank != expected or not free:
            raise CertificationError(
                f"expected rank {expected}, found {rank} (free={free})"
            )
    return Extraction(None, gens, degs, rank, free, slices)


def minimalize(field, nvars, raw_gens, raw_degs, expected=None, npos=1,
               require_free=True):
    """Select a minimal generating subset of raw_gens (a generating set).

    Returns an Extraction whose gen_indices point into the raw list, so a
    functorial image of the module can reuse the selection.
    """
    order = sorted(range(len(raw_gens)), key=lambda i: raw_degs[i])
    chosen, gens, degs = [], [], []
    slices = ModuleSlices(field, nvars, [], [])
    for i in order:
        d = raw_degs[i]
        if not raw_gens[i]:
            continue
        span = slices.span(d)
        piv, _ = span.insert(dict(raw_gens[i]))
        if piv is not None:
            chosen.append(i)
            gens.append(raw_gens[i])
            degs.append(d)
            slices.gens.append(raw_gens[i])
            slices.gen_degs.append(d)
    rank = RankSeries.from_degrees(degs)
    if expected is not None and rank != expected:
        raise CertificationError(f"expected rank {expected}, found {rank}")
    # freeness: the chosen generators must not satisfy relations in the
    # probed degree window
    free = True
    if degs:
        stabilize = 2 * npos + 4
        top = max(degs) + stabilize
        parity = {dd % 2 for dd in degs}
        for d in range(min(degs), top + 1):
            if d % 2 not in parity and len(parity) == 1:
                continue
            if slices.dim(d) != rank.dim_in_degree(d, nvars):
                free = False
                break
    if require_free and not free:
        raise CertificationError("generators satisfy a relation: not free")
    return Extraction(chosen, gens, degs, rank, free, slices)


def projection_kernel_provider(mslices: ModuleSlices, killed):
    """Degreewise basis of {m in M : m vanishes on the killed coordinates}.

    killed is a predicate on coordinate indices.
    """
    def provider(d):
        out = []
        killspan = Span(mslices.field, track=True)
        for vec in mslices.span(d).basis():
            kv = {c: v for c, v in vec.items() if killed(c[0])}
            piv, aux = killspan.insert(kv, dict(vec))
            if piv is None:
                # the killed part is dependent; the mirrored combination of
                # full vectors has vanishing killed coordinates
                assert not any(killed(c[0]) for c in aux)
                if aux:
                    out.append(aux)
        return out

    return provider


# ------------------------------------------------------------- rank certificates

_EVAL_POINTS = [
    (2, 3, 5), (3, 5, 7), (5, 7, 11), (7, 11, 13), (11, 13, 17),
    (1, 2, 3), (13, 17, 19), (17, 19, 23), (19, 23, 29), (23, 29, 31),
]


def eval_rank_reaches(field, rows, ncols_hint, want: int) -> bool:
    """Certified lower bound on the generic rank of a matrix of polynomials.

    rows: list of dicts coord -> Poly.  Evaluation at an integer point can
    only lower the rank over Frac(S), so reaching `want` at some point
    proves generic rank >= want.
    """
    if want <= 0:
        return True
    if not rows:
        return False
    nvars = None
    for r in rows:
        for p in r.values():
            for e in p:
                nvars = len(e)
                break
            if nvars is not None:
                break
        if nvars is not None:
            break
    if nvars is None:
        return False
    cols = sorted({c for r in rows for c in r})
    for pt in _EVAL_POINTS:
        point = pt[:nvars]
        dense = [
            [p_eval(field, r.get(c, {}), point) for c in cols] for r in rows
        ]
        if _dense_rank(field, dense) >= want:
            return True
    return False


def _dense_rank(field, rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [
                    field.sub(x, field.mul(f, y))
                    for x, y in zip(rows[i], rows[r])
                ]
        r += 1
    return r


# ------------------------------------------------------------- graded matrices

@dataclass
class GradedMatrix:
    """A homogeneous presentation of a graded map: entry (i, j) has degree
    col_degrees[j] - row_degrees[i] (or is zero)."""

    entries: list            # list of rows, each a list of Poly
    row_degrees: list
    col_degrees: list

    def validate(self):
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                d = p_degree(p)
                if d is not None and d != self.col_degrees[j] - self.row_degrees[i]:
                    raise ValueError(f"entry ({i},{j}) not homogeneous of the right degree")
        return True

    def to_json(self, field):
        return {
            "row_degrees": list(self.row_degrees),
            "col_degrees": list(self.col_degrees),
            "entries": [
                [
                    {"".join(map(str, e)): str(c) for e, c in p.items()}
                    for p in row
                ]
                for row in self.entries
            ],
        }
