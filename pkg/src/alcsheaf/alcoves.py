"""Alcoves, the generic order, boxes, special sections and length functions.

An alcove is a connected component of the complement of the affine
hyperplanes H_{alpha,n} = {<., alpha^vee> = n}.  The affine Weyl group
W_0 ⋉ ZR acts simply transitively on them, so an alcove is encoded as a
pair (w, mu): the element t_mu . w applied to the fundamental alcove A_e.

The generic order is generated by A < s_{alpha,n}(A) whenever A lies on
the negative side of H_{alpha,n}; equivalently by A < alpha_up(A) over
all positive roots alpha.  Every generating chain from A to B moves the
canonical interior point by positive multiples of positive roots, so its
root coordinates increase componentwise.  Comparisons are therefore
decided exactly by a breadth-first closure inside the finite box of
alcoves whose points lie between those of A and B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rootsys import (
    RootSystemData,
    fundamental_point,
    identity_matrix,
    mat_vec,
    vec_add,
    vec_scale,
)


@dataclass(frozen=True, order=True)
class Alcove:
    """The alcove (t_translation . w)(A_e); translation in root coordinates."""

    w: int
    translation: tuple

    def __str__(self):
        return f"Alcove(w={self.w}, t={self.translation})"


class DegenerateWalk(Exception):
    """A straight segment hit the intersection of two hyperplanes."""


class AlcoveGeometry:
    """Alcove combinatorics for a fixed root system.

    Immutable after construction apart from internal caches; all queries
    are exact and window enlargement never changes an answer.
    """

    def __init__(self, rs: RootSystemData):
        self.rs = rs
        self.rank = rs.rank
        self.npos = len(rs.positive_roots)
        self.p_e = fundamental_point(rs)
        self.fundamental = Alcove(0, (0,) * rs.rank)
        self._cartan_inv = _invert(rs.cartan)
        self._point_cache = {}
        self._point_rc_cache = {}
        self._leq_cache = {}
        self._coords_cache = {}
        # walls of A_e: the simple hyperplanes H_{alpha_i,0} and H_{theta,1}
        self.simple_reflections = tuple(
            self.reflection_pair(i, 0) for i in range(self.rank)
        ) + (self.reflection_pair(rs.highest_root_index, 1),)
        self._pair_index = {p: i for i, p in enumerate(self.simple_reflections)}
        # a generous per-coordinate bound on the root-coordinate extent of
        # one alcove, used to pad flood-fill regions
        self._pad = max(
            sum(abs(x) for x in row) for row in self._cartan_inv
        ) + 1

    # --------------------------------------------------------- group elements

    def reflection_pair(self, root_index: int, n: int):
        """s_{alpha,n} = t_{n alpha} . s_alpha as a (w, translation) pair."""
        w = self.rs.reflection_index[root_index]
        return (w, vec_scale(n, self.rs.positive_roots[root_index]))

    def translation_pair(self, mu_rc):
        return (0, tuple(mu_rc))

    def pair_mul(self, a, b):
        """(t_m w) . (t_n u) = t_{m + w(n)} (w u)."""
        w1, m1 = a
        w2, m2 = b
        return (self.rs.w_mult[w1][w2], vec_add(m1, self.rs.apply_w_rc(w1, m2)))

    def pair_inv(self, a):
        w, m = a
        wi = self.rs.w_inverse[w]
        return (wi, vec_scale(-1, self.rs.apply_w_rc(wi, m)))

    def left_apply(self, g, A: Alcove) -> Alcove:
        w, m = self.pair_mul(g, (A.w, A.translation))
        return Alcove(w, m)

    def right_act(self, A: Alcove, s_index: int) -> Alcove:
        """A . s for s in the simple affine reflections along walls of A_e."""
        w, m = self.pair_mul(
            (A.w, A.translation), self.simple_reflections[s_index]
        )
        return Alcove(w, m)

    def translate(self, A: Alcove, mu_rc) -> Alcove:
        return Alcove(A.w, vec_add(A.translation, tuple(mu_rc)))

    def pair_from_affine(self, linear_wc, translation_wc):
        """Recognise an affine map as an element of W_0 ⋉ ZR."""
        w = self.rs._w_index.get(tuple(tuple(r) for r in linear_wc))
        if w is None:
            raise ValueError("linear part is not in the finite Weyl group")
        mu = mat_vec(self._cartan_inv, translation_wc)
        if any(x.denominator != 1 for x in map(Fraction, mu)):
            raise ValueError("translation part is not in the root lattice")
        return (w, tuple(int(x) for x in mu))

    # --------------------------------------------------------------- geometry

    def point(self, A: Alcove):
        """Canonical interior point x(p_e), in fundamental-weight coords."""
        p = self._point_cache.get(A)
        if p is None:
            p = vec_add(
                self.rs.apply_w_wc(A.w, self.p_e),
                self.rs.root_wc(A.translation),
            )
            self._point_cache[A] = p
        return p

    def point_rc(self, A: Alcove):
        r = self._point_rc_cache.get(A)
        if r is None:
            r = mat_vec(self._cartan_inv, self.point(A))
            self._point_rc_cache[A] = r
        return r

    def coords(self, A: Alcove) -> tuple:
        """Per positive root, the floor of the pairing over A: A sits strictly
        between the walls at levels k_alpha and k_alpha + 1."""
        k = self._coords_cache.get(A)
        if k is None:
            p = self.point(A)
            vals = []
            for cc in self.rs.positive_coroots:
                v = self.rs.pair_point_coroot(p, cc)
                assert v.denominator != 1, "canonical point on a wall"
                vals.append(v.numerator // v.denominator)
            k = tuple(vals)
            self._coords_cache[A] = k
        return k

    def alpha_up(self, A: Alcove, root_index: int) -> Alcove:
        """The raising operator: reflect across the next wall upward."""
        k = self.coords(A)[root_index]
        return self.left_apply(self.reflection_pair(root_index, k + 1), A)

    def alpha_down(self, A: Alcove, root_index: int) -> Alcove:
        k = self.coords(A)[root_index]
        return self.left_apply(self.reflection_pair(root_index, k), A)

    def alpha_string(self, A: Alcove, root_index: int, radius: int):
        """The chain alpha_up^n(A) for n in [-radius, radius], low to high."""
        out = [A]
        cur = A
        for _ in range(radius):
            cur = self.alpha_up(cur, root_index)
            out.append(cur)
        cur = A
        for _ in range(radius):
            cur = self.alpha_down(cur, root_index)
            out.insert(0, cur)
        return out

    # ------------------------------------------------------------------ order

    def leq(self, A: Alcove, B: Alcove) -> bool:
        """A is below B in the generic order."""
        if A == B:
            return True
        key = (A, B)
        hit = self._leq_cache.get(key)
        if hit is not None:
            return hit
        rB = self.point_rc(B)
        if any(a > b for a, b in zip(self.point_rc(A), rB)):
            self._leq_cache[key] = False
            return False
        found = False
        seen = {A}
        frontier = [A]
        while frontier and not found:
            new = []
            for C in frontier:
                for i in range(self.npos):
                    D = self.alpha_up(C, i)
                    if D in seen:
                        continue
                    if D == B:
                        found = True
                        break
                    if any(a > b for a, b in zip(self.point_rc(D), rB)):
                        continue
                    seen.add(D)
                    new.append(D)
                if found:
                    break
            frontier = new
        self._leq_cache[key] = found
        return found

    def compare(self, A: Alcove, B: Alcove) -> str:
        """'less' | 'equal' | 'greater' | 'incomparable'."""
        if A == B:
            return "equal"
        if self.leq(A, B):
            return "less"
        if self.leq(B, A):
            return "greater"
        return "incomparable"

    def interval(self, A: Alcove, B: Alcove):
        """{C : A <= C <= B}, exact; raises if A is not below B."""
        if not self.leq(A, B):
            raise ValueError("interval endpoints are not comparable that way")
        rA, rB = self.point_rc(A), self.point_rc(B)
        up = self._reach(A, self.alpha_up, lambda C: not any(
            a > b for a, b in zip(self.point_rc(C), rB)))
        down = self._reach(B, self.alpha_down, lambda C: not any(
            a < b for a, b in zip(self.point_rc(C), rA)))
        return sorted(up & down)

    def _reach(self, start, step, keep):
        seen = {start}
        frontier = [start]
        while frontier:
            new = []
            for C in frontier:
                for i in range(self.npos):
                    D = step(C, i)
                    if D not in seen and keep(D):
                        seen.add(D)
                        new.append(D)
            frontier = new
        return seen

    # ----------------------------------------------------------- s-action ops

    def is_s_dominant(self, A: Alcove, s_index: int) -> bool:
        """A is s-dominant if As <= A: A lies on the upper side of the
        common wall of A and As."""
        B = self.right_act(A, s_index)
        kA, kB = self.coords(A), self.coords(B)
        diff = [i for i in range(self.npos) if kA[i] != kB[i]]
        assert len(diff) == 1, "A and As must be adjacent"
        return kA[diff[0]] > kB[diff[0]]

    def flat_sharp(self, subset, s_index: int):
        """(J ∩ Js, J ∪ Js) for an explicit finite set of alcoves."""
        J = set(subset)
        Js = {self.right_act(A, s_index) for A in J}
        return (frozenset(J & Js), frozenset(J | Js))

    # --------------------------------------------------- boxes, special alcoves

    def box_of(self, A: Alcove) -> tuple:
        """The weight lambda (wc) with A in the box Pi_lambda: per simple
        alpha the pairing over A lies in (<lambda,alpha> - 1, <lambda,alpha>)."""
        k = self.coords(A)
        return tuple(k[i] + 1 for i in range(self.rank))

    def special_minus(self, lam_wc) -> Alcove:
        """A_lambda^-: the maximal alcove of the box, lambda in its closure."""
        w0 = self.rs.longest_element_index
        p_minus = self.rs.apply_w_wc(w0, self.p_e)
        q = vec_add(tuple(Fraction(x) for x in lam_wc), p_minus)
        return self.locate(q)

    def special_plus(self, lam_wc) -> Alcove:
        """A_lambda^+: the alcove in C^+ + lambda with lambda in its closure."""
        q = vec_add(tuple(Fraction(x) for x in lam_wc), self.p_e)
        return self.locate(q)

    def special_section(self, lam_wc):
        """K_lambda: the orbit of A_lambda^- under the reflections fixing
        lambda; the alcoves containing lambda in their closure."""
        base = self.special_minus(lam_wc)
        gens = []
        for idx in range(self.npos):
            n = self.rs.pair_point_coroot(lam_wc, self.rs.positive_coroots[idx])
            gens.append(self.reflection_pair(idx, n))
        orbit = {base}
        frontier = [base]
        while frontier:
            new = []
            for A in frontier:
                for g in gens:
                    B = self.left_apply(g, A)
                    if B not in orbit:
                        orbit.add(B)
                        new.append(B)
            frontier = new
        assert len(orbit) == len(self.rs.weyl_group)
        return sorted(orbit)

    def section_map(self, lam_wc):
        """The bijection tau: W_lambda -> K_lambda, indexed by W_0 via
        conjugation with t_lambda: w |-> (t_lambda w t_-lambda)(A_lambda^-)."""
        base = self.special_minus(lam_wc)
        out = {}
        for w in range(len(self.rs.weyl_group)):
            lin = self.rs.weyl_group[w].wc_matrix
            trans = vec_sub_f(lam_wc, mat_vec(lin, lam_wc))
            pair = self.pair_from_affine(lin, trans)
            out[w] = self.left_apply(pair, base)
        return out

    # -------------------------------------------------------- walks and floors

    def _perturbed_starts(self, p, trials=60):
        yield p
        n = len(p)
        for k in range(1, trials):
            denom = (k + 1) * (self.rs.max_coroot_height + 1) * 64
            off = tuple(
                Fraction((i + 1) ** (1 + k % 3), denom * (2 + i))
                for i in range(n)
            )
            yield vec_add(p, off) if k % 2 else vec_sub_f(p, off)

    def walk_crossings(self, p, q, wiggle_start=True):
        """Hyperplane crossings of the open segment from p to q, in order.

        Returns a list of (root_index, level n, direction) with direction
        +1 when the pairing increases through the wall.  The start point
        may be perturbed (within its alcove) to avoid hitting the
        intersection of two hyperplanes; the endpoints must be interior.
        """
        starts = self._perturbed_starts(p) if wiggle_start else [p]
        floors = None
        for start in starts:
            try:
                if floors is not None and _floors(self.rs, start) != floors:
                    continue
                if floors is None:
                    floors = _floors(self.rs, start)
                    _floors(self.rs, q)  # validate q interior
                return self._walk_once(start, q)
            except DegenerateWalk:
                continue
        raise DegenerateWalk("no generic start point found")

    def _walk_once(self, p, q):
        crossings = []
        for idx, cc in enumerate(self.rs.positive_coroots):
            P = self.rs.pair_point_coroot(p, cc)
            Q = self.rs.pair_point_coroot(q, cc)
            if P.denominator == 1 or Q.denominator == 1:
                raise DegenerateWalk("endpoint on a wall")
            if P == Q:
                continue
            lo, hi = (P, Q) if P < Q else (Q, P)
            direction = 1 if Q > P else -1
            n = lo.numerator // lo.denominator + 1
            while n < hi:
                t = Fraction(n - P, Q - P)
                crossings.append((t, idx, n, direction))
                n += 1
        crossings.sort(key=lambda c: c[0])
        for a, b in zip(crossings, crossings[1:]):
            if a[0] == b[0]:
                raise DegenerateWalk("simultaneous crossing")
        return [(idx, n, d) for _, idx, n, d in crossings]

    def locate(self, q) -> Alcove:
        """The alcove containing the interior point q (wc, Fractions)."""
        q = tuple(Fraction(x) for x in q)
        crossings = self.walk_crossings(self.p_e, q)
        pair = (0, (0,) * self.rank)
        for idx, n, _ in crossings:
            pair = self.pair_mul(self.reflection_pair(idx, n), pair)
        A = Alcove(*pair)
        assert _floors(self.rs, q) == self.coords(A)
        return A

    def length(self, lam_wc, A: Alcove) -> int:
        """The length l_lambda(A): minus the signed number of wall crossings
        along a path from A_lambda^+ to A, counting negative-to-positive
        crossings with +."""
        start = self.point(self.special_plus(lam_wc))
        crossings = self.walk_crossings(start, self.point(A))
        m_plus = sum(1 for _, _, d in crossings if d > 0)
        m_minus = len(crossings) - m_plus
        return -(m_plus - m_minus)

    # --------------------------------------------------------------- regions

    def alcoves_in_box(self, lo_rc, hi_rc, seeds):
        """All alcoves whose canonical point has root coordinates in the
        closed box [lo, hi]; flood fill through shared walls from seeds."""
        lo = tuple(Fraction(x) for x in lo_rc)
        hi = tuple(Fraction(x) for x in hi_rc)
        pad = self._pad
        plo = tuple(x - pad for x in lo)
        phi = tuple(x + pad for x in hi)

        def in_padded(C):
            r = self.point_rc(C)
            return all(a <= x <= b for x, a, b in zip(r, plo, phi))

        seen = set()
        frontier = []
        for s in seeds:
            if in_padded(s) and s not in seen:
                seen.add(s)
                frontier.append(s)
        while frontier:
            new = []
            for C in frontier:
                for i in range(len(self.simple_reflections)):
                    D = self.right_act(C, i)
                    if D not in seen and in_padded(D):
                        seen.add(D)
                        new.append(D)
            frontier = new
        out = [
            C for C in seen
            if all(a <= x <= b for x, a, b in zip(self.point_rc(C), lo, hi))
        ]
        return sorted(out)

    # ----------------------------------------------------------- serialization

    def alcove_str(self, A: Alcove) -> str:
        word = self.rs.weyl_group[A.w].word
        w = "e" if not word else "".join(str(i + 1) for i in word)
        t = ",".join(str(x) for x in A.translation)
        return f"w={w};t=({t})"

    def parse_alcove(self, text: str) -> Alcove:
        """Parse 'w=<word>;t=(..)' or coordinate form 'k=c1,c2,...' listing
        the floor per positive root (in the stored root order)."""
        text = text.strip()
        if text.startswith("w="):
            wpart, tpart = text.split(";")
            word = wpart[2:].strip()
            w = 0
            if word not in ("e", ""):
                for ch in word:
                    i = int(ch) - 1
                    if not 0 <= i < self.rank:
                        raise ValueError(f"bad word letter {ch!r}")
                    w = self.rs.w_mult[w][self.rs.reflection_index[i]]
            tvals = tpart.strip()[3:-1]
            t = tuple(int(x) for x in tvals.split(",")) if tvals else ()
            if len(t) != self.rank:
                raise ValueError("translation has wrong rank")
            return Alcove(w, t)
        if text.startswith("k="):
            k = tuple(int(x) for x in text[2:].split(","))
            if len(k) != self.npos:
                raise ValueError(
                    f"need {self.npos} floors, one per positive root"
                )
            lam = tuple(k[i] + 1 for i in range(self.rank))
            box = self.box_alcoves(lam)
            for A in box:
                if self.coords(A) == k:
                    return A
            raise ValueError(f"no alcove with floors {k}")
        raise ValueError(f"cannot parse alcove {text!r}")

    def box_alcoves(self, lam_wc):
        """All alcoves of the box Pi_lambda."""
        base = self.special_minus(lam_wc)
        seen = {base}
        frontier = [base]
        lam = tuple(lam_wc)
        while frontier:
            new = []
            for C in frontier:
                for i in range(len(self.simple_reflections)):
                    D = self.right_act(C, i)
                    if D not in seen and self.box_of(D) == lam:
                        seen.add(D)
                        new.append(D)
            frontier = new
        return sorted(seen)


def vec_sub_f(u, v):
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(u, v))


def _floors(rs, point_wc):
    out = []
    for cc in rs.positive_coroots:
        v = rs.pair_point_coroot(point_wc, cc)
        v = Fraction(v)
        if v.denominator == 1:
            raise DegenerateWalk("point on a wall")
        out.append(v.numerator // v.denominator)
    return tuple(out)


def _invert(int_matrix):
    n = len(int_matrix)
    a = [[Fraction(int_matrix[i][j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


class Window:
    """An explicit finite set of alcoves with its exact order relation.

    The order is computed on the bounding region of the window, so that
    every ambient chain between window members is accounted for; the
    restriction to the window is the true generic order.
    """

    def __init__(self, geom: AlcoveGeometry, alcoves):
        self.geom = geom
        self.alcoves = tuple(sorted(set(alcoves)))
        if not self.alcoves:
            raise ValueError("empty window")
        pts = [geom.point_rc(A) for A in self.alcoves]
        lo = tuple(min(p[i] for p in pts) for i in range(geom.rank))
        hi = tuple(max(p[i] for p in pts) for i in range(geom.rank))
        region = geom.alcoves_in_box(lo, hi, self.alcoves)
        index = {A: i for i, A in enumerate(region)}
        # alpha_up edges, acyclic: the coordinate sum strictly increases
        reach = {}
        by_height = sorted(
            region, key=lambda A: sum(geom.point_rc(A)), reverse=True
        )
        for A in by_height:
            mask = 1 << index[A]
            for i in range(geom.npos):
                B = geom.alpha_up(A, i)
                j = index.get(B)
                if j is not None:
                    mask |= reach[B]
            reach[A] = mask
        self._region_index = index
        self._reach = reach
        self._member = frozenset(self.alcoves)

    def __contains__(self, A):
        return A in self._member

    def __len__(self):
        return len(self.alcoves)

    def leq(self, A: Alcove, B: Alcove) -> bool:
        return bool(self._reach[A] & (1 << self._region_index[B]))

    def down_set(self, A: Alcove):
        """Trace of the ambient {<= A} on the window."""
        return frozenset(B for B in self.alcoves if self.leq(B, A))

    def is_down_closed(self, subset) -> bool:
        sub = set(subset)
        return all(
            (B in sub) or not self.leq(B, A)
            for A in sub for B in self.alcoves
        )

    def is_s_closed(self, s_index: int) -> bool:
        return all(
            self.geom.right_act(A, s_index) in self._member
            for A in self.alcoves
        )

    def covering_edges(self):
        """Pairs (A, B) with A covered by B inside the window."""
        edges = []
        for A in self.alcoves:
            for B in self.alcoves:
                if A == B or not self.leq(A, B):
                    continue
                if not any(
                    C not in (A, B) and self.leq(A, C) and self.leq(C, B)
                    for C in self.alcoves
                ):
                    edges.append((A, B))
        return edges

    def to_json(self):
        g = self.geom
        return {
            "alcoves": [g.alcove_str(A) for A in self.alcoves],
            "coords": {
                g.alcove_str(A): list(g.coords(A)) for A in self.alcoves
            },
            "cover": [
                [g.alcove_str(A), g.alcove_str(B)]
                for A, B in self.covering_edges()
            ],
        }


def window_box(geom: AlcoveGeometry, radius: int) -> Window:
    """Window of all alcoves with root-coordinate points in [-r, r]^rank."""
    lo = tuple(-Fraction(radius) for _ in range(geom.rank))
    hi = tuple(Fraction(radius) for _ in range(geom.rank))
    return Window(geom, geom.alcoves_in_box(lo, hi, [geom.fundamental]))


class Ideal:
    """An ambient down-closed set, given by finitely many generators.

    Membership of B means B <= g for some generator g; sharp/flat closures
    for a simple affine reflection are carried as predicates, which is
    sound because they are again down-closed whenever the base is.
    """

    def __init__(self, geom, generators=(), member=None, label=""):
        self.geom = geom
        self.generators = tuple(sorted(set(generators)))
        self._member = member
        self.label = label or "|".join(
            geom.alcove_str(g) for g in self.generators
        )

    def __contains__(self, A: Alcove) -> bool:
        if self._member is not None:
            return self._member(A)
        return any(self.geom.leq(A, g) for g in self.generators)

    def trace(self, universe) -> frozenset:
        return frozenset(A for A in universe if A in self)

    def sharp(self, s_index: int) -> "Ideal":
        geom = self.geom
        return Ideal(
            geom,
            member=lambda A: A in self or geom.right_act(A, s_index) in self,
            label=f"({self.label})#s{s_index}",
        )

    def flat(self, s_index: int) -> "Ideal":
        geom = self.geom
        return Ideal(
            geom,
            member=lambda A: A in self and geom.right_act(A, s_index) in self,
            label=f"({self.label})bs{s_index}",
        )

    def union(self, other: "Ideal") -> "Ideal":
        if self._member is None and other._member is None:
            return Ideal(self.geom, self.generators + other.generators)
        return Ideal(
            self.geom,
            member=lambda A: A in self or A in other,
            label=f"({self.label})u({other.label})",
        )

    def intersect(self, other: "Ideal") -> "Ideal":
        return Ideal(
            self.geom,
            member=lambda A: A in self and A in other,
            label=f"({self.label})n({other.label})",
        )

    def __repr__(self):
        return f"Ideal[{self.label}]"


def principal_ideal(geom, A: Alcove) -> Ideal:
    return Ideal(geom, (A,))

def strict_ideal(geom, A: Alcove) -> Ideal:
    """The ambient {< A}."""
    return Ideal(
        geom,
        member=lambda B: B != A and geom.leq(B, A),
        label=f"<{geom.alcove_str(A)}",
    )

def empty_ideal(geom) -> Ideal:
    return Ideal(geom, (), member=lambda A: False, label="empty")
