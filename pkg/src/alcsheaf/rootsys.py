"""Root system data, finite Weyl groups, affine reflections, GKM check.

Coordinate conventions used throughout the package:

* roots live in the lattice ZΔ and are stored as integer vectors in the
  simple-root basis ("rc" = root coordinates);
* coroots are stored as integer vectors in the simple-coroot basis
  ("cc" = coroot coordinates);
* points of the ambient space V and weights are stored in the
  fundamental-weight basis ("wc"), i.e. the vector of pairings with the
  simple coroots.  Weights then have integer wc, interior points of
  alcoves have Fraction wc.

With cartan[i][j] = <alpha_j, alpha_i^vee> the three encodings talk to
each other through integer matrices only:

    wc of a root with rc r        =  C . r
    <point m (wc), coroot c (cc)> =  m . c
    <root r (rc), coroot c (cc)>  =  c . C . r
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fields import make_field

CARTAN_TABLE = {
    ("A", 1): ((2,),),
    ("A", 2): ((2, -1), (-1, 2)),
    ("A", 3): ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    # B_r: alpha_r is the short simple root
    ("B", 2): ((2, -2), (-1, 2)),
    ("B", 3): ((2, -1, 0), (-1, 2, -2), (0, -1, 2)),
    # C_r: alpha_r is the long simple root
    ("C", 2): ((2, -1), (-2, 2)),
    ("C", 3): ((2, -1, 0), (-1, 2, -1), (0, -2, 2)),
    ("D", 3): ((2, -1, -1), (-1, 2, 0), (-1, 0, 2)),
    ("G", 2): ((2, -1), (-3, 2)),
}

WEYL_ORDER = {
    ("A", 1): 2, ("A", 2): 6, ("A", 3): 24,
    ("B", 2): 8, ("B", 3): 48,
    ("C", 2): 8, ("C", 3): 48,
    ("D", 3): 24, ("G", 2): 12,
}


def mat_vec(m, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)

def mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )

def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))

def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))

def vec_scale(c, v):
    return tuple(c * a for a in v)


@dataclass(frozen=True)
class WeylElement:
    """A finite Weyl group element with its actions in all three bases."""
    index: int
    rc_matrix: tuple       # action on root coordinates
    cc_matrix: tuple       # action on coroot coordinates
    wc_matrix: tuple       # action on fundamental-weight coordinates
    word: tuple            # a reduced word in the simple reflections
    length: int


class RootSystemData:
    """Root system of one of the supported types of rank <= 3.

    Carries the positive roots with their coroots, the pairing data and
    the full finite Weyl group with multiplication tables.
    """

    def __init__(self, type_label: str, rank: int):
        key = (type_label, rank)
        if key not in CARTAN_TABLE:
            raise ValueError(f"unsupported root system {type_label}{rank}")
        self.type_label = type_label
        self.rank = rank
        self.cartan = CARTAN_TABLE[key]
        self._build_roots()
        self._build_weyl_group()

    # ------------------------------------------------------------------ roots

    def _simple_reflection_matrices(self, i):
        n = self.rank
        C = self.cartan
        rc = tuple(
            tuple((1 if r == j else 0) - (C[i][j] if r == i else 0) for j in range(n))
            for r in range(n)
        )
        cc = tuple(
            tuple((1 if r == j else 0) - (C[j][i] if r == i else 0) for j in range(n))
            for r in range(n)
        )
        wc = tuple(
            tuple((1 if r == j else 0) - (C[r][i] if j == i else 0) for j in range(n))
            for r in range(n)
        )
        return rc, cc, wc

    def _build_roots(self):
        n = self.rank
        simples = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        refl = [self._simple_reflection_matrices(i) for i in range(n)]
        pairs = {(simples[i], simples[i]) for i in range(n)}
        frontier = list(pairs)
        while frontier:
            new = []
            for root, coroot in frontier:
                for rc_m, cc_m, _ in refl:
                    cand = (mat_vec(rc_m, root), mat_vec(cc_m, coroot))
                    if cand not in pairs:
                        pairs.add(cand)
                        new.append(cand)
            frontier = new
        pos = sorted(
            ((r, c) for r, c in pairs if all(x >= 0 for x in r)),
            key=lambda p: (sum(p[0]), p[0][::-1]),
        )
        self.positive_roots = tuple(r for r, _ in pos)
        self.positive_coroots = tuple(c for _, c in pos)
        self.simple_root_indices = tuple(range(n))
        assert self.positive_roots[:n] == tuple(simples)
        # the root whose coroot is the highest coroot: its level-1 wall is
        # the affine wall of the fundamental alcove
        self.max_coroot_height = max(sum(c) for c in self.positive_coroots)
        tops = [
            k for k, c in enumerate(self.positive_coroots)
            if sum(c) == self.max_coroot_height
        ]
        assert len(tops) == 1
        self.highest_root_index = tops[0]

    def pairing_rc_cc(self, root_rc, coroot_cc) -> int:
        """<root, coroot> for a root in rc and a coroot in cc."""
        Cr = mat_vec(self.cartan, root_rc)
        return sum(c * x for c, x in zip(coroot_cc, Cr))

    def root_wc(self, root_rc):
        """Fundamental-weight coordinates of a root-lattice vector."""
        return mat_vec(self.cartan, root_rc)

    def pair_point_coroot(self, point_wc, coroot_cc):
        return sum(m * c for m, c in zip(point_wc, coroot_cc))

    def root_name(self, index: int) -> str:
        rc = self.positive_roots[index]
        parts = []
        for i, k in enumerate(rc):
            if k == 0:
                continue
            parts.append(f"a{i + 1}" if k == 1 else f"{k}a{i + 1}")
        return "+".join(parts)

    # ------------------------------------------------------------- Weyl group

    def _build_weyl_group(self):
        n = self.rank
        refl = [self._simple_reflection_matrices(i) for i in range(n)]
        ident = (identity_matrix(n),) * 3
        elements = {ident[2]: (ident, ())}
        frontier = [(ident, ())]
        while frontier:
            new = []
            for (rc, cc, wc), word in frontier:
                for i in range(n):
                    # right multiplication by s_i
                    rc2 = mat_mul(rc, refl[i][0])
                    cc2 = mat_mul(cc, refl[i][1])
                    wc2 = mat_mul(wc, refl[i][2])
                    if wc2 not in elements:
                        entry = ((rc2, cc2, wc2), word + (i,))
                        elements[wc2] = entry
                        new.append(entry)
            frontier = new
        order = WEYL_ORDER[(self.type_label, self.rank)]
        assert len(elements) == order, (len(elements), order)
        items = sorted(elements.values(), key=lambda e: (len(e[1]), e[1]))
        self.weyl_group = tuple(
            WeylElement(i, mats[0], mats[1], mats[2], word, len(word))
            for i, (mats, word) in enumerate(items)
        )
        self._w_index = {w.wc_matrix: w.index for w in self.weyl_group}
        N = len(self.weyl_group)
        self.w_mult = tuple(
            tuple(
                self._w_index[mat_mul(a.wc_matrix, b.wc_matrix)]
                for b in self.weyl_group
            )
            for a in self.weyl_group
        )
        self.w_inverse = tuple(
            next(
                j for j in range(N)
                if self.w_mult[i][j] == 0
            )
            for i in range(N)
        )
        self.longest_element_index = max(
            range(N), key=lambda i: self.weyl_group[i].length
        )
        # finite reflection s_alpha for each positive root
        self.reflection_index = tuple(
            self._lookup_reflection(k) for k in range(len(self.positive_roots))
        )
        self._roots_sent_negative_cache = {}

    def _lookup_reflection(self, root_index: int) -> int:
        a_rc = self.positive_roots[root_index]
        a_cc = self.positive_coroots[root_index]
        a_wc = self.root_wc(a_rc)
        n = self.rank
        wc = tuple(
            tuple((1 if r == j else 0) - a_wc[r] * a_cc[j] for j in range(n))
            for r in range(n)
        )
        return self._w_index[wc]

    def w(self, index: int) -> WeylElement:
        return self.weyl_group[index]

    def apply_w_rc(self, w_index: int, rc):
        return mat_vec(self.weyl_group[w_index].rc_matrix, rc)

    def apply_w_cc(self, w_index: int, cc):
        return mat_vec(self.weyl_group[w_index].cc_matrix, cc)

    def apply_w_wc(self, w_index: int, wc):
        return mat_vec(self.weyl_group[w_index].wc_matrix, wc)

    def root_index(self, rc) -> int:
        return self.positive_roots.index(tuple(rc))

    def inversions(self, w_index: int) -> int:
        """Number of positive roots sent negative: the Coxeter length."""
        if w_index not in self._roots_sent_negative_cache:
            count = 0
            for rc in self.positive_roots:
                img = self.apply_w_rc(w_index, rc)
                if all(x <= 0 for x in img):
                    count += 1
            self._roots_sent_negative_cache[w_index] = count
        return self._roots_sent_negative_cache[w_index]

    @lru_cache(maxsize=None)
    def bruhat_down_set(self, w_index: int) -> frozenset:
        """All x <= w in Bruhat order, via reflection descents.

        Independent order oracle: the Bruhat order is the closure of the
        relations tw < w for reflections t with l(tw) < l(w), where l is
        the inversion count.
        """
        down = {w_index}
        lw = self.inversions(w_index)
        for t in self.reflection_index:
            tw = self.w_mult[t][w_index]
            if self.inversions(tw) < lw:
                down |= self.bruhat_down_set(tw)
        return frozenset(down)

    def bruhat_leq(self, x_index: int, y_index: int) -> bool:
        return x_index in self.bruhat_down_set(y_index)


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystemData:
    """Root system from the supported table; raises ValueError otherwise."""
    return RootSystemData(type_label, rank)


# ------------------------------------------------------------------ field

@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: characteristic 0 (rationals) or a prime field."""

    characteristic: int = 0

    def field(self):
        return make_field(self.characteristic)


def gkm_check(rs: RootSystemData, spec: FieldSpec) -> bool:
    """char k != 2 and pairwise linear independence of the coroot images.

    The images of distinct positive coroots in the coweight space over k
    must be pairwise linearly independent (and nonzero).
    """
    p = spec.characteristic
    if p == 2:
        return False
    coroots = rs.positive_coroots
    for c in coroots:
        if p and all(x % p == 0 for x in c):
            return False
    for i in range(len(coroots)):
        for j in range(i + 1, len(coroots)):
            if _dependent(coroots[i], coroots[j], p):
                return False
    return True


def _dependent(u, v, p: int) -> bool:
    n = len(u)
    for a in range(n):
        for b in range(a + 1, n):
            minor = u[a] * v[b] - u[b] * v[a]
            if (minor % p if p else minor) != 0:
                return False
    return True


# ------------------------------------------------------------------ affine maps

@dataclass(frozen=True)
class AffineMap:
    """Affine transformation of V in fundamental-weight coordinates."""

    linear: tuple   # integer matrix acting on wc
    translation: tuple  # wc vector

    def __call__(self, point_wc):
        return vec_add(mat_vec(self.linear, point_wc), self.translation)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        return AffineMap(
            mat_mul(self.linear, other.linear),
            vec_add(mat_vec(self.linear, other.translation), self.translation),
        )

    def is_identity(self) -> bool:
        n = len(self.translation)
        return self.linear == identity_matrix(n) and all(
            t == 0 for t in self.translation
        )


def affine_reflection(rs: RootSystemData, root_index: int, n: int) -> AffineMap:
    """s_{alpha,n}: lambda -> lambda - (<lambda, alpha^vee> - n) alpha."""
    if not 0 <= root_index < len(rs.positive_roots):
        raise ValueError(f"not a positive root index: {root_index}")
    s = rs.reflection_index[root_index]
    alpha_wc = rs.root_wc(rs.positive_roots[root_index])
    return AffineMap(rs.weyl_group[s].wc_matrix, vec_scale(n, alpha_wc))


def translation_map(rs: RootSystemData, lam_wc) -> AffineMap:
    return AffineMap(identity_matrix(rs.rank), tuple(lam_wc))


def fundamental_point(rs: RootSystemData):
    """A canonical interior point of the fundamental alcove A_e.

    All pairings with simple coroots equal 1/(H+1) where H is the maximal
    coroot height, so the pairing with every positive coroot lies in (0,1).
    """
    t = Fraction(1, rs.max_coroot_height + 1)
    return tuple(t for _ in range(rs.rank))
