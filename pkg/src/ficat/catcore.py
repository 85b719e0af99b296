"""Category core: enumerable skeletal categories of free objects.

Objects are ranks 0, 1, 2, ...; a category instance enumerates hom sets,
composes morphisms, and (when it carries complements) provides the monoidal
sum, canonical inclusions, block permutations, complement extraction and the
related coherence data.  The axiom checker and the transitivity/counting
report live here and are shared by the FI, VIC and SI instances.

Composition convention throughout: compose(g, f) means "g after f".
"""

import math
import random
from itertools import permutations

from .errors import BudgetExceeded, InvariantViolation, PreconditionError, charge, enumeration_budget


class Category:
    """Base class: hom enumeration with caching and budgets."""

    name = "?"
    is_complemented = False
    is_symmetric = False

    def __init__(self):
        self._hom_cache = {}

    def describe(self):
        return self.name

    def _check_rank(self, n):
        if not isinstance(n, int) or n < 0:
            raise PreconditionError("object rank must be a non-negative integer, got %r" % (n,))
        return n

    def hom(self, m, n, budget=None):
        """The sorted tuple of all morphisms from rank m to rank n."""
        self._check_rank(m)
        self._check_rank(n)
        got = self._hom_cache.get((m, n))
        if got is None:
            count = self.count_hom(m, n)
            charge(count, budget, "hom(%d,%d) enumeration in %s" % (m, n, self.describe()))
            got = tuple(sorted(self._enumerate_hom(m, n), key=self.key))
            if len(got) != count:
                raise InvariantViolation(
                    "hom(%d,%d) in %s enumerated %d morphisms, counted %d"
                    % (m, n, self.describe(), len(got), count)
                )
            if len(set(self.key(f) for f in got)) != len(got):
                raise InvariantViolation("duplicate morphisms in hom enumeration")
            self._hom_cache[(m, n)] = got
        return got

    def aut(self, n, budget=None):
        return self.hom(n, n, budget)

    # subclasses: count_hom, _enumerate_hom, compose, identity, key, validate

    def is_iso(self, mor):
        """In the skeletal categories here, endomorphisms are exactly the isos."""
        return mor.src == mor.dst


def hom_enumerate(cat, m, n, budget=None):
    """All morphisms of cat from rank m to rank n, sorted canonically."""
    return cat.hom(m, n, budget=budget)


def compose(cat, g, f):
    """Composite g after f."""
    return cat.compose(g, f)


# ---------------------------------------------------------------------------
# FI: finite sets with injections
# ---------------------------------------------------------------------------

class FiMorphism:
    """An injection [src] -> [dst], stored as the 0-based image tuple."""

    __slots__ = ("src", "dst", "images")

    def __init__(self, src, dst, images):
        self.src = src
        self.dst = dst
        self.images = tuple(images)

    def __eq__(self, other):
        return (
            isinstance(other, FiMorphism)
            and other.src == self.src
            and other.dst == self.dst
            and other.images == self.images
        )

    def __hash__(self):
        return hash(("FI", self.src, self.dst, self.images))

    def __repr__(self):
        return "FiMorphism(%d -> %d, %s)" % (self.src, self.dst, list(self.images))


class FiCategory(Category):
    """Finite sets [n] = {0..n-1} with injections."""

    name = "FI"
    is_complemented = True
    is_symmetric = True

    def count_hom(self, m, n):
        if m > n:
            return 0
        return math.perm(n, m)

    def _enumerate_hom(self, m, n):
        return [FiMorphism(m, n, images) for images in permutations(range(n), m)]

    def identity(self, n):
        return FiMorphism(n, n, tuple(range(n)))

    def compose(self, g, f):
        if f.dst != g.src:
            raise PreconditionError("composition rank mismatch: %d vs %d" % (f.dst, g.src))
        return FiMorphism(f.src, g.dst, tuple(g.images[i] for i in f.images))

    def key(self, mor):
        return (mor.src, mor.dst, mor.images)

    def validate(self, mor):
        if not isinstance(mor, FiMorphism):
            return False
        if len(mor.images) != mor.src:
            return False
        if any(not (0 <= i < mor.dst) for i in mor.images):
            return False
        return len(set(mor.images)) == mor.src

    # ----- complemented structure -----

    def monoidal_sum(self, f, g):
        images = f.images + tuple(i + f.dst for i in g.images)
        return FiMorphism(f.src + g.src, f.dst + g.dst, images)

    def slot_inclusion(self, slots, p):
        slots = tuple(slots)
        if any(not (0 <= s < p) for s in slots) or len(set(slots)) != len(slots):
            raise PreconditionError("bad slot list %r for rank %d" % (slots, p))
        return FiMorphism(len(slots), p, slots)

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
        src_off = [0] * q
        acc = 0
        for i, s in enumerate(sizes):
            src_off[i] = acc
            acc += s
        total = acc
        tgt_off = [0] * q
        acc = 0
        for t in range(q):
            tgt_off[t] = acc
            acc += sizes[perm[t]]
        images = [0] * total
        for t in range(q):
            i = perm[t]
            for j in range(sizes[i]):
                images[src_off[i] + j] = tgt_off[t] + j
        return FiMorphism(total, total, tuple(images))

    def flip(self, a, b):
        return self.block_permutation((a, b), (1, 0))

    def complement_of(self, f):
        used = set(f.images)
        rest = tuple(i for i in range(f.dst) if i not in used)
        return len(rest), FiMorphism(len(rest), f.dst, rest)

    def assemble(self, f, j):
        """The morphism X^{m+r} -> X^n restricting to f and j on the two summands.

        Returns None when images collide (no assembling morphism exists).
        """
        if f.dst != j.dst:
            raise PreconditionError("assemble requires a common target")
        if set(f.images) & set(j.images):
            return None
        return FiMorphism(f.src + j.src, f.dst, f.images + j.images)

    def subobject_equal(self, u, v):
        return u.src == v.src and u.dst == v.dst and set(u.images) == set(v.images)

    def factor_through(self, j2, j1):
        """The morphism c with j2 . c = j1; requires im(j1) inside im(j2)."""
        pos = {img: k for k, img in enumerate(j2.images)}
        try:
            images = tuple(pos[i] for i in j1.images)
        except KeyError:
            raise PreconditionError("factor_through: image is not contained")
        return FiMorphism(j1.src, j2.src, images)


_FI = None


def fi_category():
    """The (cached) FI category instance."""
    global _FI
    if _FI is None:
        _FI = FiCategory()
    return _FI


# ---------------------------------------------------------------------------
# axiom checker
# ---------------------------------------------------------------------------

def _signatures(max_rank):
    sigs = []
    for n in range(max_rank + 1):
        for m in range(n + 1):
            for l in range(m + 1):
                for k in range(l + 1):
                    sigs.append((k, l, m, n))
    return sigs


def check_axioms(cat, max_rank, budget=None, seed=0, assoc_cap=200_000, assoc_samples=20_000,
                 mono_cap=50_000_000):
    """Verify the category/complement axioms on all enumerated morphisms.

    Exhaustive everywhere except associativity (per-signature exhaustive up to
    assoc_cap triples, seeded deterministic sample beyond) and complement
    uniqueness (checked exhaustively at the canonical inclusion of each rank
    pair and transferred by the transitivity of the automorphism action on
    hom sets, which is itself verified exhaustively here).

    Returns a report dict with an overall "ok" flag; each sub-check carries
    its own status and counters.
    """
    checks = {}
    report = {"category": cat.describe(), "max_rank": max_rank, "checks": checks}

    def fail(name, detail):
        checks[name]["status"] = "fail"
        checks[name].setdefault("failures", []).append(detail)

    # --- identity / unit laws ---
    checks["identity"] = {"status": "pass", "checked": 0}
    for n in range(max_rank + 1):
        idn = cat.identity(n)
        for m in range(max_rank + 1):
            for f in cat.hom(m, n, budget):
                if cat.compose(idn, f) != f or cat.compose(f, cat.identity(m)) != f:
                    fail("identity", "unit law fails at hom(%d,%d)" % (m, n))
                checks["identity"]["checked"] += 1

    # --- associativity (budgeted) ---
    rng = random.Random(seed)
    checks["associativity"] = {
        "status": "pass",
        "signatures": 0,
        "exhaustive_signatures": 0,
        "sampled_signatures": 0,
        "checked": 0,
    }
    for (k, l, m, n) in _signatures(max_rank):
        hs_e = cat.hom(k, l, budget)
        hs_f = cat.hom(l, m, budget)
        hs_g = cat.hom(m, n, budget)
        total = len(hs_e) * len(hs_f) * len(hs_g)
        if total == 0:
            continue
        checks["associativity"]["signatures"] += 1
        if total <= assoc_cap:
            checks["associativity"]["exhaustive_signatures"] += 1
            triples = ((e, f, g) for e in hs_e for f in hs_f for g in hs_g)
        else:
            checks["associativity"]["sampled_signatures"] += 1
            triples = (
                (
                    hs_e[rng.randrange(len(hs_e))],
                    hs_f[rng.randrange(len(hs_f))],
                    hs_g[rng.randrange(len(hs_g))],
                )
                for _ in range(assoc_samples)
            )
        for e, f, g in triples:
            if cat.compose(cat.compose(g, f), e) != cat.compose(g, cat.compose(f, e)):
                fail("associativity", "associativity fails at (%d,%d,%d,%d)" % (k, l, m, n))
                break
            checks["associativity"]["checked"] += 1

    # --- initial object ---
    checks["initial"] = {"status": "pass"}
    for n in range(max_rank + 1):
        if len(cat.hom(0, n, budget)) != 1:
            fail("initial", "rank 0 is not initial at target %d" % n)

    # --- every morphism is monic ---
    checks["mono"] = {"status": "pass", "checked": 0, "iso_skipped": 0}
    for n in range(max_rank + 1):
        for m in range(n + 1):
            inner = []
            for l in range(m + 1):
                inner.extend(cat.hom(l, m, budget))
            outer_all = cat.hom(m, n, budget)
            outer = [g for g in outer_all if not cat.is_iso(g)]
            checks["mono"]["iso_skipped"] += len(outer_all) - len(outer)
            work = len(outer) * len(inner)
            if work > mono_cap:
                raise BudgetExceeded(
                    "mono check at hom(%d,%d) needs %d compositions" % (m, n, work),
                    required=work,
                )
            for g in outer:
                seen = set()
                for f in inner:
                    seen.add(cat.key(cat.compose(g, f)))
                if len(seen) != len(inner):
                    fail("mono", "morphism in hom(%d,%d) is not monic" % (m, n))
                checks["mono"]["checked"] += len(inner)

    if cat.is_complemented:
        # --- injectivity of Hom(V + V', W) -> Hom(V, W) x Hom(V', W) ---
        checks["sum_injective"] = {"status": "pass", "checked": 0}
        for n in range(max_rank + 1):
            for m in range(n + 1):
                hs = cat.hom(m, n, budget)
                for a in range(m + 1):
                    b = m - a
                    can_a = cat.canonical(a, m)
                    can_b = cat.canonical_last(b, m)
                    seen = set()
                    for psi in hs:
                        seen.add((cat.key(cat.compose(psi, can_a)), cat.key(cat.compose(psi, can_b))))
                    if len(seen) != len(hs):
                        fail("sum_injective", "restriction map not injective at (%d=%d+%d,%d)" % (m, a, b, n))
                    checks["sum_injective"]["checked"] += len(hs)

        # --- transitivity of Aut(W) on Hom(V, W) ---
        checks["transitivity"] = {"status": "pass", "pairs": 0}
        for n in range(max_rank + 1):
            auts = cat.aut(n, budget)
            for m in range(n):
                can = cat.canonical(m, n)
                orbit = {cat.key(cat.compose(a, can)) for a in auts}
                hs = cat.hom(m, n, budget)
                if len(orbit) != len(hs) or orbit != {cat.key(f) for f in hs}:
                    fail("transitivity", "automorphisms not transitive on hom(%d,%d)" % (m, n))
                checks["transitivity"]["pairs"] += 1

        # --- complements: existence everywhere ---
        checks["complement_exists"] = {"status": "pass", "checked": 0}
        for n in range(max_rank + 1):
            can_first_cache = {}
            for m in range(n + 1):
                can_first_cache[m] = cat.canonical(m, n)
            for m in range(n + 1):
                r_expect = n - m
                can_m = can_first_cache[m]
                can_r_last = cat.canonical_last(r_expect, n)
                for f in cat.hom(m, n, budget):
                    r, j = cat.complement_of(f)
                    ok = r == r_expect and cat.validate(j) and j.src == r and j.dst == n
                    psi = cat.assemble(f, j) if ok else None
                    ok = ok and psi is not None and cat.validate(psi) and psi.src == n and psi.dst == n
                    ok = ok and cat.compose(psi, can_m) == f
                    ok = ok and cat.compose(psi, can_r_last) == j
                    if not ok:
                        fail("complement_exists", "complement fails for hom(%d,%d) morphism %r" % (m, n, f))
                        break
                    checks["complement_exists"]["checked"] += 1

        # --- complements: uniqueness at the canonical inclusion ---
        checks["complement_unique"] = {"status": "pass", "pairs": 0}
        for n in range(max_rank + 1):
            for m in range(n + 1):
                r = n - m
                f0 = cat.canonical(m, n)
                can_m = cat.canonical(m, n)
                can_r_last = cat.canonical_last(r, n)
                _, j0 = cat.complement_of(f0)
                classes = 0
                seen_j0_class = False
                for j in cat.hom(r, n, budget):
                    psi = cat.assemble(f0, j)
                    if psi is None or not cat.validate(psi):
                        continue
                    if cat.compose(psi, can_m) != f0 or cat.compose(psi, can_r_last) != j:
                        continue
                    if cat.subobject_equal(j, j0):
                        seen_j0_class = True
                    else:
                        classes += 1
                if not seen_j0_class or classes:
                    fail(
                        "complement_unique",
                        "complement of canonical(%d,%d) not unique (%d extra classes)" % (m, n, classes),
                    )
                checks["complement_unique"]["pairs"] += 1

        # --- monoidal unit laws and functoriality (sampled) ---
        checks["monoidal"] = {"status": "pass", "checked": 0}
        for a in range(max_rank + 1):
            for b in range(max_rank + 1 - a):
                if cat.monoidal_sum(cat.identity(a), cat.identity(b)) != cat.identity(a + b):
                    fail("monoidal", "identity sum fails at (%d,%d)" % (a, b))
        rng2 = random.Random(seed + 1)
        for a in range(max_rank + 1):
            for b in range(max_rank + 1 - a):
                for a0 in range(a + 1):
                    for b0 in range(b + 1):
                        for a1 in range(a0 + 1):
                            for b1 in range(b0 + 1):
                                hf = cat.hom(a0, a, budget)
                                hg = cat.hom(b0, b, budget)
                                hf2 = cat.hom(a1, a0, budget)
                                hg2 = cat.hom(b1, b0, budget)
                                total = len(hf) * len(hg) * len(hf2) * len(hg2)
                                if total == 0:
                                    continue
                                if total <= 200:
                                    quads = [
                                        (f, g, f2, g2)
                                        for f in hf
                                        for g in hg
                                        for f2 in hf2
                                        for g2 in hg2
                                    ]
                                else:
                                    quads = [
                                        (
                                            hf[rng2.randrange(len(hf))],
                                            hg[rng2.randrange(len(hg))],
                                            hf2[rng2.randrange(len(hf2))],
                                            hg2[rng2.randrange(len(hg2))],
                                        )
                                        for _ in range(200)
                                    ]
                                for f, g, f2, g2 in quads:
                                    lhs = cat.compose(
                                        cat.monoidal_sum(f, g), cat.monoidal_sum(f2, g2)
                                    )
                                    rhs = cat.monoidal_sum(cat.compose(f, f2), cat.compose(g, g2))
                                    if lhs != rhs:
                                        fail("monoidal", "sum functoriality fails at (%d,%d)" % (a, b))
                                        break
                                    checks["monoidal"]["checked"] += 1

    if cat.is_symmetric:
        checks["symmetry"] = {"status": "pass", "checked": 0}
        rng3 = random.Random(seed + 2)
        for a in range(max_rank + 1):
            for b in range(max_rank + 1 - a):
                sig = cat.flip(a, b)
                sig_back = cat.flip(b, a)
                if cat.compose(sig_back, sig) != cat.identity(a + b):
                    fail("symmetry", "flip is not an involution at (%d,%d)" % (a, b))
                if cat.compose(sig, cat.canonical(a, a + b)) != cat.canonical_last(a, a + b):
                    fail("symmetry", "flip does not exchange the canonical inclusions at (%d,%d)" % (a, b))
                # naturality on a bounded sample
                for a0 in range(a + 1):
                    for b0 in range(b + 1):
                        hf = cat.hom(a0, a, budget)
                        hg = cat.hom(b0, b, budget)
                        if not hf or not hg:
                            continue
                        pairs = len(hf) * len(hg)
                        if pairs <= 200:
                            chosen = [(f, g) for f in hf for g in hg]
                        else:
                            chosen = [
                                (hf[rng3.randrange(len(hf))], hg[rng3.randrange(len(hg))])
                                for _ in range(200)
                            ]
                        sig0 = cat.flip(a0, b0)
                        for f, g in chosen:
                            lhs = cat.compose(sig, cat.monoidal_sum(f, g))
                            rhs = cat.compose(cat.monoidal_sum(g, f), sig0)
                            if lhs != rhs:
                                fail("symmetry", "braiding not natural at (%d,%d)<-(%d,%d)" % (a, b, a0, b0))
                            checks["symmetry"]["checked"] += 1

    report["ok"] = all(c["status"] == "pass" for c in checks.values())
    return report


def group_structure_report(cat, r, n, budget=None):
    """Transitivity / stabilizer / counting report for Aut(X^n) acting on Hom(X^r, X^n).

    Verifies |Hom(r,n)| * |Aut(n-r)| = |Aut(n)| (counted independently of the
    orbit sweep) and that postcomposition by automorphisms is transitive with
    stabilizer size |Aut(n)| / |Hom(r,n)|.
    """
    if not cat.is_complemented:
        raise PreconditionError("group_structure_report requires a complemented category")
    if r > n:
        raise PreconditionError("need r <= n")
    hom = cat.hom(r, n, budget)
    auts = cat.aut(n, budget)
    can = cat.canonical(r, n)
    orbit = set()
    stab = 0
    can_key = cat.key(can)
    for a in auts:
        k = cat.key(cat.compose(a, can))
        orbit.add(k)
        if k == can_key:
            stab += 1
    transitive = len(orbit) == len(hom) and orbit == {cat.key(f) for f in hom}
    aut_count = len(auts)
    residual = cat.count_hom(n - r, n - r)
    identity_holds = len(hom) * residual == aut_count
    return {
        "category": cat.describe(),
        "r": r,
        "n": n,
        "hom": len(hom),
        "aut": aut_count,
        "aut_residual": residual,
        "transitive": transitive,
        "stabilizer": stab,
        "orbit_stabilizer_ok": stab * len(hom) == aut_count,
        "counting_identity": identity_holds,
    }
