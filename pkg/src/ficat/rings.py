"""Finite commutative rings with explicit element arithmetic.

A ring spec is either "Z/n" (n >= 2) or a product "Z/n1 x Z/n2 x ..." with
total size at most 4096.  Elements are integers 0..size-1; products are
encoded in mixed radix with the first factor most significant.  Local
structure (the decomposition into local factors) is discovered by exhaustive
search for primitive idempotents and verified on the spot.
"""

import math
import re
from functools import lru_cache
from itertools import product as iproduct

from .errors import InvariantViolation, PreconditionError

MAX_RING_SIZE = 4096
_FACTOR_RE = re.compile(r"^Z/(\d+)$")


def _parse_spec(spec):
    if not isinstance(spec, str):
        raise PreconditionError("ring spec must be a string like 'Z/4' or 'Z/2 x Z/3'")
    parts = [p.strip() for p in spec.split("x")]
    moduli = []
    for part in parts:
        m = _FACTOR_RE.match(part)
        if not m:
            raise PreconditionError("bad ring spec %r (factor %r)" % (spec, part))
        n = int(m.group(1))
        if n < 2:
            raise PreconditionError("ring factors need modulus >= 2, got %d" % n)
        moduli.append(n)
    size = 1
    for n in moduli:
        size *= n
    if size > MAX_RING_SIZE:
        raise PreconditionError(
            "ring size %d exceeds the supported maximum %d" % (size, MAX_RING_SIZE)
        )
    return tuple(moduli)


def smallest_prime(n):
    """Smallest prime divisor of n >= 2."""
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


class FiniteRing:
    """A finite commutative ring, elements indexed 0..size-1."""

    __slots__ = (
        "spec",
        "moduli",
        "size",
        "char",
        "zero",
        "one",
        "add",
        "mul",
        "neg",
        "_digits",
        "_strides",
        "_units",
        "_local",
        "_inv",
    )

    def __init__(self, moduli):
        self.moduli = tuple(moduli)
        self.spec = " x ".join("Z/%d" % n for n in self.moduli)
        size = 1
        for n in self.moduli:
            size *= n
        self.size = size
        self.char = math.lcm(*self.moduli)
        self.zero = 0
        self._units = None
        self._local = None
        self._inv = None
        if len(self.moduli) == 1:
            n = self.moduli[0]
            self.one = 1
            self.add = lambda a, b, n=n: (a + b) % n
            self.mul = lambda a, b, n=n: (a * b) % n
            self.neg = lambda a, n=n: (-a) % n
            self._digits = None
            self._strides = None
        else:
            strides = []
            acc = 1
            for n in reversed(self.moduli):
                strides.append(acc)
                acc *= n
            self._strides = tuple(reversed(strides))
            self._digits = tuple(
                tuple((x // s) % n for n, s in zip(self.moduli, self._strides))
                for x in range(size)
            )
            self.one = self.encode((1,) * len(self.moduli))
            if size <= 64:
                # small products get full operation tables
                add_t = []
                mul_t = []
                neg_t = []
                for a in range(size):
                    da = self._digits[a]
                    neg_t.append(self.encode(tuple((-x) % n for x, n in zip(da, self.moduli))))
                    for b in range(size):
                        db = self._digits[b]
                        add_t.append(
                            self.encode(tuple((x + y) % n for x, y, n in zip(da, db, self.moduli)))
                        )
                        mul_t.append(
                            self.encode(tuple((x * y) % n for x, y, n in zip(da, db, self.moduli)))
                        )
                add_t = tuple(add_t)
                mul_t = tuple(mul_t)
                neg_t = tuple(neg_t)
                self.add = lambda a, b, t=add_t, s=size: t[a * s + b]
                self.mul = lambda a, b, t=mul_t, s=size: t[a * s + b]
                self.neg = lambda a, t=neg_t: t[a]
            else:
                digits = self._digits
                moduli = self.moduli
                encode = self.encode
                self.add = lambda a, b: encode(
                    tuple((x + y) % n for x, y, n in zip(digits[a], digits[b], moduli))
                )
                self.mul = lambda a, b: encode(
                    tuple((x * y) % n for x, y, n in zip(digits[a], digits[b], moduli))
                )
                self.neg = lambda a: encode(tuple((-x) % n for x, n in zip(digits[a], moduli)))

    # ----- representation helpers -----

    def encode(self, digits):
        """Mixed-radix tuple -> element index (first factor most significant)."""
        x = 0
        for d, s in zip(digits, self._strides):
            x += d * s
        return x

    def element_tuple(self, x):
        """Element index -> per-factor residue tuple."""
        if len(self.moduli) == 1:
            return (x,)
        return self._digits[x]

    def check_element(self, x):
        if not isinstance(x, int) or not (0 <= x < self.size):
            raise PreconditionError(
                "%r is not an element index of %s (expected 0..%d)" % (x, self.spec, self.size - 1)
            )
        return x

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def reduce_int(self, t):
        """Image of the integer t under the unique map Z -> R."""
        if len(self.moduli) == 1:
            return t % self.moduli[0]
        return self.encode(tuple(t % n for n in self.moduli))

    @property
    def neg_one(self):
        return self.neg(self.one)

    # ----- units -----

    def inverse(self, x):
        """Multiplicative inverse of x, or None when x is not a unit."""
        self.check_element(x)
        if self._inv is None:
            self._inv = [None] * self.size
            if len(self.moduli) == 1:
                n = self.moduli[0]
                for y in range(self.size):
                    try:
                        self._inv[y] = pow(y, -1, n)
                    except ValueError:
                        pass
            else:
                for y in range(self.size):
                    digs = self._digits[y]
                    out = []
                    for d, n in zip(digs, self.moduli):
                        try:
                            out.append(pow(d, -1, n))
                        except ValueError:
                            out = None
                            break
                    if out is not None:
                        self._inv[y] = self.encode(tuple(out))
        return self._inv[x]

    def is_unit(self, x):
        return self.inverse(x) is not None

    def units(self):
        if self._units is None:
            self._units = tuple(x for x in range(self.size) if self.inverse(x) is not None)
        return self._units

    def nonunits(self):
        return tuple(x for x in range(self.size) if self.inverse(x) is None)

    # ----- local structure -----

    @property
    def local(self):
        if self._local is None:
            self._local = _compute_local(self)
        return self._local

    @property
    def is_local(self):
        return len(self.local.factors) == 1

    def __repr__(self):
        return "FiniteRing(%r)" % self.spec

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and other.spec == self.spec

    def __hash__(self):
        return hash(("FiniteRing", self.spec))


class LocalDecomposition:
    """R = R_1 x ... x R_k via primitive idempotents, factors canonically ordered.

    Factors are ordered by (smallest prime divisor of size, size, spec), which
    matches e.g. Z/6 -> [Z/2, Z/3] and Z/12 -> [Z/4, Z/3].
    """

    __slots__ = ("ring", "idempotents", "factors", "_proj", "_lift_elem")

    def __init__(self, ring, idempotents, factors, proj, lift_elem):
        self.ring = ring
        self.idempotents = idempotents  # primitive idempotents, one per factor
        self.factors = factors  # tuple of FiniteRing (each Z/p^k)
        self._proj = proj  # per factor: list over parent elements of factor index
        self._lift_elem = lift_elem  # per factor: list over factor elements of parent element

    def project(self, x):
        """Parent element -> tuple of factor elements."""
        return tuple(p[x] for p in self._proj)

    def project_factor(self, x, i):
        return self._proj[i][x]

    def lift(self, comps):
        """Tuple of factor elements -> parent element (CRT)."""
        ring = self.ring
        acc = ring.zero
        for i, c in enumerate(comps):
            acc = ring.add(acc, self._lift_elem[i][c])
        return acc


def _compute_local(ring):
    mul = ring.mul
    add = ring.add
    idem = [x for x in range(ring.size) if mul(x, x) == x]
    prim = []
    for e in idem:
        if e == ring.zero:
            continue
        if any(mul(e2, e) == e2 for e2 in idem if e2 not in (ring.zero, e)):
            continue
        prim.append(e)
    total = ring.zero
    for e in prim:
        total = add(total, e)
    if total != ring.one:
        raise InvariantViolation("primitive idempotents of %s do not sum to 1" % ring.spec)
    for i, e in enumerate(prim):
        for e2 in prim[i + 1:]:
            if mul(e, e2) != ring.zero:
                raise InvariantViolation("primitive idempotents of %s are not orthogonal" % ring.spec)

    entries = []
    for e in prim:
        elems = {mul(e, x) for x in range(ring.size)}
        s = len(elems)
        factor = make_ring("Z/%d" % s)
        # eR is generated additively by e; walk t*e for t = 0..s-1
        log = {}
        lift_elem = []
        val = ring.zero
        for t in range(s):
            if val in log:
                raise InvariantViolation(
                    "idempotent %d of %s does not generate its factor additively" % (e, ring.spec)
                )
            log[val] = t
            lift_elem.append(val)
            val = add(val, e)
        if val != ring.zero or set(lift_elem) != elems:
            raise InvariantViolation(
                "factor of %s at idempotent %d is not cyclic of order %d" % (ring.spec, e, s)
            )
        # multiplicative compatibility: (t*e)(u*e) = (t*u mod s)*e
        if s <= 96:
            pairs = iproduct(range(s), repeat=2)
        else:
            pairs = ((t, (t * 7 + 3) % s) for t in range(s))
        for t, u in pairs:
            if mul(lift_elem[t], lift_elem[u]) != lift_elem[(t * u) % s]:
                raise InvariantViolation(
                    "factor of %s at idempotent %d is not Z/%d multiplicatively" % (ring.spec, e, s)
                )
        proj = [log[mul(e, x)] for x in range(ring.size)]
        entries.append((e, factor, proj, lift_elem))

    entries.sort(key=lambda ent: (smallest_prime(ent[1].size), ent[1].size, ent[1].spec))
    return LocalDecomposition(
        ring,
        tuple(ent[0] for ent in entries),
        tuple(ent[1] for ent in entries),
        tuple(ent[2] for ent in entries),
        tuple(ent[3] for ent in entries),
    )


@lru_cache(maxsize=None)
def _make_ring_cached(moduli):
    return FiniteRing(moduli)


def make_ring(spec):
    """Build (or fetch) the finite ring named by spec, e.g. "Z/4" or "Z/2 x Z/3"."""
    return _make_ring_cached(_parse_spec(spec))


def unit_inverse(ring, x):
    """Inverse of x in ring, or None when x is not a unit."""
    return ring.inverse(x)


def local_factors(ring):
    """Tuple of local factor rings of ring, canonically ordered."""
    return ring.local.factors
