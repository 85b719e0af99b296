"""VIC(R, U) and OVIC(R): split injections of free modules over a finite ring.

A morphism R^m -> R^n is a pair (f, fp) of an n x m matrix and a chosen left
inverse fp (m x n); at equal ranks the determinant of f must lie in the unit
subgroup U.  OVIC(R) is the subcategory of pairs whose splitting fp is
column-adapted; every VIC morphism factors uniquely as an OVIC morphism after
an automorphism of the source, which is the normal form used throughout.

Also here: the morphism counts for the splittable-injection category VI and
the splittable-map category V (a map is splittable when its cokernel is free,
equivalently when it factors as a surjection followed by a split injection).

Composition convention: compose(g, f) means "g after f", so the components
multiply as (g.f * f.f, f.fp * g.fp).
"""

import math
from itertools import combinations, product as iproduct

from .catcore import Category
from .errors import InvariantViolation, PreconditionError, charge
from .matrices import (
    Mat,
    block_diag,
    column_adapted,
    det,
    factor_surjection,
    hstack,
    inverse,
    is_surjective,
    kernel_basis,
    lift_mats,
    mat_from_payload,
    mat_to_payload,
    try_inverse,
)
from .rings import smallest_prime


class UnitSubgroup:
    """A subgroup of the units of a finite ring."""

    __slots__ = ("ring", "elements")

    def __init__(self, ring, elements=None):
        if elements is None:
            elements = ring.units()
        elems = frozenset(elements)
        for x in elems:
            ring.check_element(x)
            if not ring.is_unit(x):
                raise PreconditionError("%r is not a unit of %s" % (x, ring.spec))
        if ring.one not in elems:
            raise PreconditionError("unit subgroup must contain 1")
        for a in elems:
            if ring.inverse(a) not in elems:
                raise PreconditionError("unit subgroup not closed under inverse at %r" % (a,))
            for b in elems:
                if ring.mul(a, b) not in elems:
                    raise PreconditionError("unit subgroup not closed under product at %r * %r" % (a, b))
        self.ring = ring
        self.elements = elems

    @property
    def is_full(self):
        return len(self.elements) == len(self.ring.units())

    def contains(self, x):
        return x in self.elements

    def __contains__(self, x):
        return x in self.elements

    def __eq__(self, other):
        return (
            isinstance(other, UnitSubgroup)
            and other.ring == self.ring
            and other.elements == self.elements
        )

    def __hash__(self):
        return hash((self.ring.spec, self.elements))

    def __repr__(self):
        if self.is_full:
            return "UnitSubgroup(%s, full)" % self.ring.spec
        return "UnitSubgroup(%s, %s)" % (self.ring.spec, sorted(self.elements))


class VicMorphism:
    """A split injection: f (n x m) with chosen left inverse fp (m x n)."""

    __slots__ = ("f", "fp")

    def __init__(self, f, fp, check=True):
        if f.ring != fp.ring:
            raise PreconditionError("f and fp live over different rings")
        if fp.rows != f.cols or fp.cols != f.rows:
            raise PreconditionError(
                "splitting shape mismatch: f is %dx%d, fp is %dx%d" % (f.rows, f.cols, fp.rows, fp.cols)
            )
        if check and fp.mul(f) != Mat.identity(f.ring, f.cols):
            raise PreconditionError("fp is not a left inverse of f")
        self.f = f
        self.fp = fp

    @property
    def ring(self):
        return self.f.ring

    @property
    def src(self):
        return self.f.cols

    @property
    def dst(self):
        return self.f.rows

    def __eq__(self, other):
        return isinstance(other, VicMorphism) and other.f == self.f and other.fp == self.fp

    def __hash__(self):
        return hash(("VIC", self.f, self.fp))

    def __repr__(self):
        return "VicMorphism(%d -> %d over %s, f=%s, fp=%s)" % (
            self.src,
            self.dst,
            self.ring.spec,
            list(self.f.to_rows()),
            list(self.fp.to_rows()),
        )


class OvicMorphism(VicMorphism):
    """A VicMorphism whose splitting fp is column-adapted; caches the profile."""

    __slots__ = ("profile",)

    def __init__(self, f, fp, check=True):
        super().__init__(f, fp, check=check)
        prof = column_adapted(fp)
        if prof is None:
            raise PreconditionError("splitting is not column-adapted")
        self.profile = prof


# ---------------------------------------------------------------------------
# GL caches and counts
# ---------------------------------------------------------------------------

_GL_LOCAL = {}


def _gl_local(ring, n):
    """All invertible n x n matrices over a local ring, as (mat, inverse, det)."""
    key = (ring.spec, n)
    got = _GL_LOCAL.get(key)
    if got is None:
        out = []
        if n == 0:
            e = Mat.identity(ring, 0)
            out.append((e, e, ring.one))
        else:
            from .matrices import _local_inverse

            for data in iproduct(range(ring.size), repeat=n * n):
                m = Mat(ring, n, n, data)
                d = det(m)
                if ring.is_unit(d):
                    out.append((m, _local_inverse(m), d))
        if len(out) != _gl_count_local(ring, n):
            raise InvariantViolation("GL_%d(%s) enumeration disagrees with the order formula" % (n, ring.spec))
        out.sort(key=lambda t: t[0].data)
        got = tuple(out)
        _GL_LOCAL[key] = got
    return got


def _gl_count_local(ring, n):
    """|GL_n(Z/p^k)| = p^((k-1) n^2) * prod_i (p^n - p^i)."""
    if n == 0:
        return 1
    s = ring.size
    p = smallest_prime(s)
    k = 0
    t = s
    while t > 1:
        assert t % p == 0
        t //= p
        k += 1
    base = 1
    for i in range(n):
        base *= p**n - p**i
    return p ** ((k - 1) * n * n) * base


def gl_order(ring, n):
    """|GL_n(R)|, as the product of the local orders."""
    if n < 0:
        raise PreconditionError("rank must be non-negative")
    out = 1
    for rf in ring.local.factors:
        out *= _gl_count_local(rf, n)
    return out


def gl_pairs(ring, n, budget=None):
    """All of GL_n(R) as (mat, inverse, det) triples, CRT-combined and sorted."""
    count = gl_order(ring, n)
    charge(count, budget, "GL_%d(%s) enumeration" % (n, ring.spec))
    dec = ring.local
    locs = [_gl_local(rf, n) for rf in dec.factors]
    if len(dec.factors) == 1 and dec.factors[0] is ring:
        return locs[0]
    out = []
    for combo in iproduct(*locs):
        m = lift_mats(ring, [c[0] for c in combo])
        mi = lift_mats(ring, [c[1] for c in combo])
        d = dec.lift(tuple(c[2] for c in combo))
        out.append((m, mi, d))
    out.sort(key=lambda t: t[0].data)
    return tuple(out)


# ---------------------------------------------------------------------------
# OVIC enumeration and counting
# ---------------------------------------------------------------------------

_OVIC_LOCAL = {}


def _adapted_count_local(ring, m, n):
    """Number of column-adapted m x n matrices over a local ring."""
    if m > n:
        return 0
    nu = len(ring.nonunits())
    sz = ring.size
    total = 0
    for S in combinations(range(n), m):
        sset = set(S)
        cols = 1
        for j in range(n):
            if j in sset:
                continue
            a = sum(1 for s in S if s > j)
            cols *= (nu**a) * (sz ** (m - a))
        total += cols
    return total


def ovic_count_local(ring, m, n):
    if m > n:
        return 0
    return _adapted_count_local(ring, m, n) * (ring.size ** (m * (n - m)))


def ovic_count(ring, m, n):
    out = 1
    for rf in ring.local.factors:
        out *= ovic_count_local(rf, m, n)
    return out


def _complete_dependent(ring, fp, S, nonpiv, free_rows):
    """The unique f with fp * f = I once the free rows of f are chosen.

    fp is column-adapted with pivot columns S; the rows of f away from S are
    the free rows, and row S[i] is forced to e_i - sum_t fp[i,t] * (row t).
    """
    m, n = fp.rows, fp.cols
    radd, rmul, rneg = ring.add, ring.mul, ring.neg
    rows = [None] * n
    for k, p in enumerate(nonpiv):
        rows[p] = free_rows[k]
    for i, s in enumerate(S):
        row = [ring.one if j == i else ring.zero for j in range(m)]
        for t in nonpiv:
            c = fp.entry(i, t)
            if c:
                frow = rows[t]
                for j in range(m):
                    if frow[j]:
                        row[j] = radd(row[j], rneg(rmul(c, frow[j])))
        rows[s] = tuple(row)
    return Mat(ring, n, m, tuple(x for r in rows for x in r))


def _ovic_local_list(ring, m, n):
    """All OVIC morphism components (fp, f) over a local ring, unsorted."""
    key = (ring.spec, m, n)
    got = _OVIC_LOCAL.get(key)
    if got is not None:
        return got
    out = []
    if m <= n:
        elems = range(ring.size)
        nonunits = ring.nonunits()
        free_vecs = list(iproduct(elems, repeat=m))
        for S in combinations(range(n), m):
            sset = set(S)
            nonpiv = [j for j in range(n) if j not in sset]
            col_options = []
            for j in nonpiv:
                per_row = []
                for i in range(m):
                    per_row.append(nonunits if S[i] > j else tuple(elems))
                col_options.append(list(iproduct(*per_row)))
            for cols_choice in iproduct(*col_options):
                fp_cols = [None] * n
                for i, s in enumerate(S):
                    fp_cols[s] = tuple(ring.one if t == i else ring.zero for t in range(m))
                for j, c in zip(nonpiv, cols_choice):
                    fp_cols[j] = c
                fp = Mat.from_cols(ring, fp_cols)
                for free in iproduct(free_vecs, repeat=n - m):
                    f = _complete_dependent(ring, fp, S, nonpiv, free)
                    out.append((fp, f))
    got = tuple(out)
    if len(got) != ovic_count_local(ring, m, n):
        raise InvariantViolation("OVIC(%s)(%d,%d) enumeration disagrees with its count" % (ring.spec, m, n))
    _OVIC_LOCAL[key] = got
    return got


def ovic_hom_enumerate(ring, m, n, budget=None):
    """All OVIC(R) morphisms from rank m to rank n, sorted canonically."""
    count = ovic_count(ring, m, n)
    charge(count, budget, "OVIC(%s) hom(%d,%d) enumeration" % (ring.spec, m, n))
    dec = ring.local
    out = []
    if len(dec.factors) == 1 and dec.factors[0] is ring:
        for fp, f in _ovic_local_list(ring, m, n):
            out.append(OvicMorphism(f, fp, check=False))
    else:
        locs = [_ovic_local_list(rf, m, n) for rf in dec.factors]
        for combo in iproduct(*locs):
            fp = lift_mats(ring, [c[0] for c in combo])
            f = lift_mats(ring, [c[1] for c in combo])
            out.append(OvicMorphism(f, fp, check=False))
    out.sort(key=lambda mor: (mor.f.data, mor.fp.data))
    return tuple(out)


# ---------------------------------------------------------------------------
# the categories
# ---------------------------------------------------------------------------

class VicCategory(Category):
    name = "VIC"
    is_complemented = True

    def __init__(self, ring, units=None):
        super().__init__()
        self.ring = ring
        self.units = units if isinstance(units, UnitSubgroup) else UnitSubgroup(ring, units)
        if self.units.ring != ring:
            raise PreconditionError("unit subgroup is over a different ring")
        self.is_symmetric = self.units.contains(ring.neg_one)

    def describe(self):
        if self.units.is_full:
            return "VIC(%s)" % self.ring.spec
        return "VIC(%s, U=%s)" % (self.ring.spec, sorted(self.units.elements))

    def count_hom(self, m, n):
        if m > n:
            return 0
        if m == n:
            if n == 0:
                return 1
            total = gl_order(self.ring, n)
            units = len(self.ring.units())
            num = total * len(self.units.elements)
            if num % units:
                raise InvariantViolation("determinant classes do not divide GL evenly")
            return num // units
        return ovic_count(self.ring, m, n) * gl_order(self.ring, m)

    def _enumerate_hom(self, m, n):
        if m > n:
            return []
        if m == n:
            out = []
            for a, ainv, d in gl_pairs(self.ring, n, budget=-1):
                if d in self.units:
                    out.append(VicMorphism(a, ainv, check=False))
            return out
        out = []
        auts = gl_pairs(self.ring, m, budget=-1)
        for ov in ovic_hom_enumerate(self.ring, m, n, budget=-1):
            for a, ainv, _ in auts:
                out.append(VicMorphism(ov.f.mul(a), ainv.mul(ov.fp), check=False))
        return out

    def identity(self, n):
        e = Mat.identity(self.ring, n)
        return VicMorphism(e, e, check=False)

    def compose(self, g, f):
        if f.dst != g.src:
            raise PreconditionError("composition rank mismatch: %d vs %d" % (f.dst, g.src))
        return VicMorphism(g.f.mul(f.f), f.fp.mul(g.fp), check=False)

    def key(self, mor):
        return (mor.src, mor.dst, mor.f.data, mor.fp.data)

    def validate(self, mor):
        if not isinstance(mor, VicMorphism) or mor.ring != self.ring:
            return False
        if mor.fp.mul(mor.f) != Mat.identity(self.ring, mor.src):
            return False
        if mor.src == mor.dst and det(mor.f) not in self.units:
            return False
        return True

    # ----- complemented structure -----

    def monoidal_sum(self, f, g):
        return VicMorphism(
            block_diag(self.ring, [f.f, g.f]),
            block_diag(self.ring, [f.fp, g.fp]),
            check=False,
        )

    def slot_inclusion(self, slots, p):
        slots = tuple(slots)
        if any(not (0 <= s < p) for s in slots) or len(set(slots)) != len(slots):
            raise PreconditionError("bad slot list %r for rank %d" % (slots, p))
        ring = self.ring
        cols = []
        for s in slots:
            cols.append(tuple(ring.one if i == s else ring.zero for i in range(p)))
        f = Mat.from_cols(ring, cols) if cols else Mat.zeros(ring, p, 0)
        mor = VicMorphism(f, f.transpose(), check=False)
        if mor.src == mor.dst and det(mor.f) not in self.units:
            raise PreconditionError("slot permutation determinant lies outside the unit subgroup")
        return mor

    def canonical(self, m, n):
        if m > n:
            raise PreconditionError("no canonical inclusion %d -> %d" % (m, n))
        return self.slot_inclusion(tuple(range(m)), n)

    def canonical_last(self, m, n):
        if m > n:
            raise PreconditionError("no canonical inclusion %d -> %d" % (m, n))
        return self.slot_inclusion(tuple(range(n - m, n)), n)

    def block_permutation(self, sizes, perm):
        q = len(sizes)
        if sorted(perm) != list(range(q)):
            raise PreconditionError("bad block permutation %r" % (perm,))
        total = sum(sizes)
        src_off = [0] * q
        acc = 0
        for i, s in enumerate(sizes):
            src_off[i] = acc
            acc += s
        images = [0] * total
        acc = 0
        for t in range(q):
            i = perm[t]
            for j in range(sizes[i]):
                images[src_off[i] + j] = acc + j
            acc += sizes[i]
        return self.slot_inclusion(tuple(images), total)

    def flip(self, a, b):
        return self.block_permutation((a, b), (1, 0))

    def complement_of(self, mor):
        """The complementary split injection onto ker(fp), with det landed in U.

        The basis of ker(fp) is the deterministic echelon basis; when needed,
        the first kernel column is rescaled by a unit so that the assembled
        square matrix [f | K] has determinant in U.
        """
        ring = self.ring
        n, m = mor.dst, mor.src
        r = n - m
        K = kernel_basis(mor.fp)
        M = hstack(mor.f, K) if r else mor.f
        d0 = det(M)
        if d0 not in self.units:
            if r == 0:
                raise InvariantViolation("automorphism with determinant outside U")
            t = ring.inverse(d0)
            if t is None:
                raise InvariantViolation("assembled complement matrix is not invertible")
            cols = [K.col(j) for j in range(r)]
            cols[0] = tuple(ring.mul(t, x) for x in cols[0])
            K = Mat.from_cols(ring, cols)
            M = hstack(mor.f, K)
            if det(M) not in self.units:
                raise InvariantViolation("determinant correction failed")
        Minv = inverse(M)
        iota_p = Mat(ring, r, n, Minv.data[m * n :])
        return r, VicMorphism(K if r else Mat.zeros(ring, n, 0), iota_p, check=False)

    def assemble(self, f, j):
        if f.dst != j.dst:
            raise PreconditionError("assemble requires a common target")
        if f.src + j.src != f.dst:
            return None
        M = hstack(f.f, j.f)
        Minv = try_inverse(M)
        if Minv is None:
            return None
        if det(M) not in self.units:
            return None
        return VicMorphism(M, Minv, check=False)

    def subobject_equal(self, u, v):
        if u.src != v.src or u.dst != v.dst:
            return False
        a = v.fp.mul(u.f)
        ainv = try_inverse(a)
        if ainv is None or det(a) not in self.units:
            return False
        return v.f.mul(a) == u.f and ainv.mul(v.fp) == u.fp

    def factor_through(self, j2, j1):
        """The morphism c with j2 . c = j1 (both components), when it exists."""
        c_f = j2.fp.mul(j1.f)
        c_fp = j1.fp.mul(j2.f)
        if j2.f.mul(c_f) != j1.f or c_fp.mul(j2.fp) != j1.fp:
            raise PreconditionError("factor_through: the subobject does not factor")
        return VicMorphism(c_f, c_fp, check=True)


class OvicCategory(Category):
    name = "OVIC"

    def __init__(self, ring):
        super().__init__()
        self.ring = ring

    def describe(self):
        return "OVIC(%s)" % self.ring.spec

    def count_hom(self, m, n):
        return ovic_count(self.ring, m, n)

    def _enumerate_hom(self, m, n):
        return ovic_hom_enumerate(self.ring, m, n, budget=-1)

    def identity(self, n):
        e = Mat.identity(self.ring, n)
        return OvicMorphism(e, e, check=False)

    def compose(self, g, f):
        if f.dst != g.src:
            raise PreconditionError("composition rank mismatch: %d vs %d" % (f.dst, g.src))
        try:
            return OvicMorphism(g.f.mul(f.f), f.fp.mul(g.fp), check=False)
        except PreconditionError:
            raise InvariantViolation("composite of column-adapted morphisms lost adaptedness")

    def key(self, mor):
        return (mor.src, mor.dst, mor.f.data, mor.fp.data)

    def validate(self, mor):
        if not isinstance(mor, OvicMorphism) or mor.ring != self.ring:
            return False
        if mor.fp.mul(mor.f) != Mat.identity(self.ring, mor.src):
            return False
        return column_adapted(mor.fp) is not None


_VIC_CACHE = {}
_OVIC_CACHE = {}


def make_vic_category(ring, units=None):
    """VIC(ring, U); units None means the full unit group."""
    u = units if isinstance(units, UnitSubgroup) else UnitSubgroup(ring, units)
    key = (ring.spec, u.elements)
    got = _VIC_CACHE.get(key)
    if got is None:
        got = VicCategory(ring, u)
        _VIC_CACHE[key] = got
    return got


def make_ovic_category(ring):
    got = _OVIC_CACHE.get(ring.spec)
    if got is None:
        got = OvicCategory(ring)
        _OVIC_CACHE[ring.spec] = got
    return got


# ---------------------------------------------------------------------------
# unique factorization through OVIC
# ---------------------------------------------------------------------------

def vic_factor(mor):
    """Factor a VicMorphism as (ovic, aut) with mor = compose(ovic, aut).

    The splitting fp factors uniquely as f2 * f1 with f1 column-adapted and
    f2 invertible; then ovic = (f * f2, f1) and aut = (f2^{-1}, f2).
    """
    f1, f2 = factor_surjection(mor.fp)
    f2inv = inverse(f2)
    ovic = OvicMorphism(mor.f.mul(f2), f1, check=True)
    aut = VicMorphism(f2inv, f2, check=False)
    if ovic.f.mul(aut.f) != mor.f or aut.fp.mul(ovic.fp) != mor.fp:
        raise InvariantViolation("OVIC factorization does not recompose")
    return ovic, aut


# ---------------------------------------------------------------------------
# VI and V morphism counts
# ---------------------------------------------------------------------------

def _count_split_injections(ring, m, n, budget):
    """Brute count of maps R^m -> R^n (n x m matrices) with a left inverse."""
    if m > n:
        return 0
    total = ring.size ** (m * n)
    charge(total, budget, "VI(%s) hom(%d,%d) brute count" % (ring.spec, m, n))
    count = 0
    for data in iproduct(range(ring.size), repeat=n * m):
        if is_surjective(Mat(ring, n, m, data).transpose()):
            count += 1
    return count


def _count_surjections(ring, m, k, budget):
    """Brute count of surjective maps R^m -> R^k (k x m matrices)."""
    if k > m:
        return 0
    total = ring.size ** (m * k)
    charge(total, budget, "surjection count (%d,%d) over %s" % (m, k, ring.spec))
    count = 0
    for data in iproduct(range(ring.size), repeat=k * m):
        if is_surjective(Mat(ring, k, m, data)):
            count += 1
    return count


def vi_v_hom_counts(ring, m, n, budget=None):
    """(vi_count, v_count) for maps R^m -> R^n.

    vi_count is the number of split injections (brute force).  v_count is the
    number of maps with free cokernel, obtained from the factorization of such
    a map as a surjection onto R^k followed by a split injection: the pairs
    over-count each map by a free GL_k action, so the k-th term divides
    exactly.
    """
    vi = _count_split_injections(ring, m, n, budget)
    v = 0
    for k in range(min(m, n) + 1):
        s = _count_surjections(ring, m, k, budget)
        i = _count_split_injections(ring, k, n, budget)
        if not s or not i:
            continue
        g = gl_order(ring, k)
        if (s * i) % g:
            raise InvariantViolation("GL_%d action on factorizations is not free" % k)
        v += (s * i) // g
    return vi, v


# ---------------------------------------------------------------------------
# JSON payloads
# ---------------------------------------------------------------------------

def vic_to_payload(mor):
    return {"f": mat_to_payload(mor.f), "fp": mat_to_payload(mor.fp)}


def vic_from_payload(ring, payload, adapted=False):
    if not isinstance(payload, dict) or "f" not in payload or "fp" not in payload:
        raise PreconditionError("morphism payload must carry 'f' and 'fp'")
    f = mat_from_payload(ring, payload["f"])
    fp = mat_from_payload(ring, payload["fp"])
    cls = OvicMorphism if adapted else VicMorphism
    return cls(f, fp, check=True)
