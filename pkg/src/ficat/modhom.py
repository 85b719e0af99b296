"""Truncated modules over the enumerable categories and their shift complexes.

A truncated module assigns to every rank n <= N a finite-dimensional space
over an exact coefficient field (the rationals or a prime field) and to every
morphism an action matrix, functorial on everything enumerable below the
truncation.  On top of that this module provides:

  * representable modules P_d (free on hom(d, -), acting by postcomposition),
  * submodule closures with a saturation pass and a closure fixed-point check,
  * the initial-term engine over the ordered categories (leading basis
    morphism in the staged total order) and the init-gap comparison,
  * the shift chain complexes in four variants ("plain", "prime", "double",
    "triple": no identification, identification along per-slot automorphisms
    with sign +1, along slot permutations with the permutation sign, and
    along both), with d o d = 0 checked at construction,
  * homology dimension tables with exactness-threshold reports,
  * the stabilization chain homotopy check (dG + Gd equals the stabilization
    map, degree 0 reducing to d_1 G = I) together with the induced-zero
    consequence on homology, and
  * the finite-generation surjectivity report for d_1: (Sigma_1 M)_V -> M_V.

Representable shifts are realized through the basis bijection with
hom(p + d, n); the explicit complement-block construction is kept as an
independent route ("complement") and doubles as a cross-check oracle.
"""

from fractions import Fraction
from itertools import permutations, product

from .errors import InvariantViolation, PreconditionError, charge
from .vic import OvicCategory
from .si import OsiCategory
from .wporder import osi_total_key, ovic_total_key


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------

class CoefField:
    """An exact coefficient field: the rationals (p = 0) or F_p, p prime."""

    __slots__ = ("p", "zero", "one")

    def __init__(self, p=0):
        if not isinstance(p, int) or p < 0:
            raise PreconditionError("field characteristic must be 0 or a prime, got %r" % (p,))
        if p:
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise PreconditionError("%d is not prime" % p)
        self.p = p
        self.zero = self.of(0)
        self.one = self.of(1)

    def of(self, x):
        if self.p:
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if a == self.zero:
            raise PreconditionError("division by zero in %s" % self)
        if self.p:
            return pow(a, self.p - 2, self.p)
        return Fraction(1) / a

    def __eq__(self, other):
        return isinstance(other, CoefField) and other.p == self.p

    def __hash__(self):
        return hash(("CoefField", self.p))

    def __repr__(self):
        return "Q" if self.p == 0 else "F%d" % self.p


def coef_field(spec):
    """Parse a field spec: 'Q' for the rationals, 'F<p>' or a bare prime."""
    if isinstance(spec, CoefField):
        return spec
    if isinstance(spec, int):
        return CoefField(spec)
    text = str(spec).strip().upper()
    if text in ("Q", "QQ", "RATIONALS", "0"):
        return CoefField(0)
    for prefix in ("GF(", "F_", "F"):
        if text.startswith(prefix):
            digits = text[len(prefix):].rstrip(")")
            if digits.isdigit():
                return CoefField(int(digits))
            break
    if text.isdigit():
        return CoefField(int(text))
    raise PreconditionError("cannot parse coefficient field %r" % (spec,))


# ---------------------------------------------------------------------------
# Row-space linear algebra over a CoefField
# ---------------------------------------------------------------------------
# Vectors are tuples of canonical field elements.  Over F_2 the heavy
# routines switch to bit-packed rows (bit c of the integer is column c).

def _bits_of(vec):
    b = 0
    for c, x in enumerate(vec):
        if x:
            b |= 1 << c
    return b


def _bits_to_vec(bits, width):
    return tuple((bits >> c) & 1 for c in range(width))


def _rref_bits(rows):
    basis = {}
    for r in rows:
        while r:
            j = (r & -r).bit_length() - 1
            if j in basis:
                r ^= basis[j]
            else:
                basis[j] = r
                break
    pivots = sorted(basis)
    for idx, j in enumerate(pivots):
        for j2 in pivots[:idx]:
            if (basis[j2] >> j) & 1:
                basis[j2] ^= basis[j]
    return [basis[j] for j in pivots], tuple(pivots)


def rref(field, rows, width):
    """Canonical reduced row echelon form.

    Returns (tuple of nonzero rows, tuple of pivot columns); the rows are in
    pivot order with unit pivots and zeros above and below each pivot.
    """
    if field.p == 2:
        bit_rows, pivots = _rref_bits([_bits_of(r) for r in rows])
        return tuple(_bits_to_vec(r, width) for r in bit_rows), pivots
    zero = field.zero
    work = [list(r) for r in rows if any(x != zero for x in r)]
    pivots = []
    done = []
    for col in range(width):
        hit = None
        for i, row in enumerate(work):
            if row[col] != zero:
                hit = i
                break
        if hit is None:
            continue
        row = work.pop(hit)
        scale = field.inv(row[col])
        row = [field.mul(scale, x) for x in row]
        for other in (done, work):
            for k, r2 in enumerate(other):
                c = r2[col]
                if c != zero:
                    other[k] = [field.sub(x, field.mul(c, y)) for x, y in zip(r2, row)]
        done.append(row)
        pivots.append(col)
        work = [r for r in work if any(x != zero for x in r)]
        if not work:
            break
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return tuple(tuple(done[i]) for i in order), tuple(pivots[i] for i in order)


def row_rank(field, rows, width):
    if field.p == 2:
        return len(_rref_bits([_bits_of(r) for r in rows])[1])
    return len(rref(field, rows, width)[1])


def kernel_vectors(field, rows, width):
    """A basis of {v : A v = 0} for the matrix with the given rows."""
    basis, pivots = rref(field, rows, width)
    pivot_set = set(pivots)
    out = []
    for free in range(width):
        if free in pivot_set:
            continue
        v = [field.zero] * width
        v[free] = field.one
        for row, p in zip(basis, pivots):
            v[p] = field.neg(row[free])
        out.append(tuple(v))
    return tuple(out)


def span_contains(field, basis, pivots, vec):
    """Membership in the row space of a canonical reduced basis."""
    zero = field.zero
    r = list(vec)
    for row, p in zip(basis, pivots):
        c = r[p]
        if c != zero:
            r = [field.sub(x, field.mul(c, y)) for x, y in zip(r, row)]
    return all(x == zero for x in r)


def span_coords(field, basis, pivots, vec):
    """Coordinates of vec in a canonical reduced basis, or None."""
    zero = field.zero
    r = list(vec)
    coords = []
    for row, p in zip(basis, pivots):
        c = r[p]
        coords.append(c)
        if c != zero:
            r = [field.sub(x, field.mul(c, y)) for x, y in zip(r, row)]
    if any(x != zero for x in r):
        return None
    return tuple(coords)


class SpanBuilder:
    """Incrementally grown subspace with an echelon basis."""

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.bits = field.p == 2
        self.rows = {}  # pivot column -> reduced row

    def _reduce(self, vec):
        if self.bits:
            r = vec if isinstance(vec, int) else _bits_of(vec)
            while r:
                j = (r & -r).bit_length() - 1
                if j not in self.rows:
                    return r, j
                r ^= self.rows[j]
            return 0, None
        field = self.field
        zero = field.zero
        r = list(vec)
        for j in range(self.width):
            c = r[j]
            if c == zero:
                continue
            row = self.rows.get(j)
            if row is None:
                scale = field.inv(c)
                return tuple(field.mul(scale, x) for x in r), j
            r = [field.sub(x, field.mul(c, y)) for x, y in zip(r, row)]
        return None, None

    def add(self, vec):
        """Insert a vector; True when the dimension grew."""
        r, j = self._reduce(vec)
        if j is None:
            return False
        self.rows[j] = r
        return True

    def contains(self, vec):
        _, j = self._reduce(vec)
        return j is None

    def dim(self):
        return len(self.rows)

    def basis(self):
        """The canonical reduced basis as (rows, pivots) over dense tuples."""
        if self.bits:
            ordered, pivots = _rref_bits(list(self.rows.values()))
            return tuple(_bits_to_vec(r, self.width) for r in ordered), pivots
        return rref(self.field, list(self.rows.values()), self.width)


def mat_mul(field, a, b):
    """Product of dense row-tuple matrices."""
    zero = field.zero
    if a and b:
        assert len(a[0]) == len(b), "inner dimensions disagree"
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [zero] * cols
        for k, c in enumerate(row):
            if c == zero:
                continue
            brow = b[k]
            for j in range(cols):
                x = brow[j]
                if x != zero:
                    acc[j] = field.add(acc[j], field.mul(c, x))
        out.append(tuple(acc))
    return tuple(out)


def mat_vec(field, a, v):
    zero = field.zero
    out = []
    for row in a:
        s = zero
        for c, x in zip(row, v):
            if c != zero and x != zero:
                s = field.add(s, field.mul(c, x))
        out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# Sparse maps (differentials, homotopies, stabilizations)
# ---------------------------------------------------------------------------

class SparseMap:
    """A linear map stored column by column as ((row, coefficient), ...)."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows, cols, columns):
        self.rows = rows
        self.cols = cols
        self.columns = tuple(tuple(col) for col in columns)
        if len(self.columns) != cols:
            raise PreconditionError("sparse map has %d columns, declared %d" % (len(self.columns), cols))

    @classmethod
    def from_entries(cls, field, rows, cols, entries):
        """Build from accumulated {(row, col): coefficient}, dropping zeros."""
        cols_data = [[] for _ in range(cols)]
        for (r, c), coeff in entries.items():
            if coeff != field.zero:
                cols_data[c].append((r, coeff))
        return cls(rows, cols, [sorted(col) for col in cols_data])

    def column(self, j):
        return self.columns[j]

    def apply_column(self, field, col_entries):
        """Apply to a sparse column (list of (row, coeff)); sparse result."""
        acc = {}
        for j, c in col_entries:
            for r, x in self.columns[j]:
                acc[r] = field.add(acc.get(r, field.zero), field.mul(c, x))
        return [(r, v) for r, v in sorted(acc.items()) if v != field.zero]

    def dense_rows(self, field):
        rows = [[field.zero] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for r, c in col:
                rows[r][j] = c
        return tuple(tuple(r) for r in rows)

    def dense_columns(self, field):
        cols = [[field.zero] * self.rows for _ in range(self.cols)]
        for j, col in enumerate(self.columns):
            for r, c in col:
                cols[j][r] = c
        return tuple(tuple(c) for c in cols)

    def rank(self, field):
        if self.rows == 0 or self.cols == 0:
            return 0
        if field.p == 2:
            bit_rows = [0] * self.rows
            for j, col in enumerate(self.columns):
                for r, _ in col:
                    bit_rows[r] |= 1 << j
            return len(_rref_bits(bit_rows)[1])
        return row_rank(field, self.dense_rows(field), self.cols)

    def is_zero(self, field):
        return all(not col for col in self.columns)

    def __repr__(self):
        return "SparseMap(%d x %d, %d entries)" % (self.rows, self.cols, sum(len(c) for c in self.columns))


def _composite_is_zero(field, outer, inner):
    """Whether outer . inner = 0, column by column."""
    for j in range(inner.cols):
        if outer.apply_column(field, inner.column(j)):
            return False
    return True


# ---------------------------------------------------------------------------
# Truncated modules
# ---------------------------------------------------------------------------

class TruncatedModule:
    """A functor rank -> vector space, truncated at max_rank.

    dims maps each rank 0..N to a dimension; act_fn(mor) produces the dense
    action matrix (dims[dst] x dims[src] row tuples).  Matrices are cached by
    the category's morphism key.
    """

    def __init__(self, cat, field, max_rank, dims, act_fn, kind, name, gen_rank=None, labels=None, labels_index=None):
        self.cat = cat
        self.field = field
        self.max_rank = max_rank
        self.dims = dict(dims)
        self.kind = kind
        self.name = name
        self.gen_rank = gen_rank
        self.labels = labels
        self.labels_index = labels_index
        self._act_fn = act_fn
        self._act_cache = {}
        self._act_bits_cache = {}
        self._total_keys = {}
        for n in range(max_rank + 1):
            if n not in self.dims:
                raise PreconditionError("module %s lacks a dimension at rank %d" % (name, n))

    def __repr__(self):
        return "TruncatedModule(%s over %s, %r, N=%d)" % (self.name, self.cat.describe(), self.field, self.max_rank)

    def _check_mor(self, mor):
        if mor.src > self.max_rank or mor.dst > self.max_rank:
            raise PreconditionError(
                "morphism %d -> %d is beyond the truncation N=%d" % (mor.src, mor.dst, self.max_rank)
            )

    def act(self, mor):
        """The dense action matrix of a morphism, cached."""
        self._check_mor(mor)
        key = self.cat.key(mor)
        got = self._act_cache.get(key)
        if got is None:
            got = self._act_fn(mor)
            if len(got) != self.dims[mor.dst] or any(len(r) != self.dims[mor.src] for r in got):
                raise InvariantViolation("action matrix of %r has the wrong shape" % (mor,))
            self._act_cache[key] = got
        return got

    def act_bits(self, mor):
        """Over F_2 only: the action as column bitmasks (bit r = row r)."""
        if self.field.p != 2:
            raise PreconditionError("bit-packed actions need coefficients in F2")
        key = self.cat.key(mor)
        got = self._act_bits_cache.get(key)
        if got is None:
            mat = self.act(mor)
            cols = [0] * self.dims[mor.src]
            for r, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x:
                        cols[j] |= 1 << r
            got = tuple(cols)
            self._act_bits_cache[key] = got
        return got

    def total_keys(self, n):
        """Staged total-order keys of the rank-n basis (ordered categories)."""
        if self.kind != "representable":
            raise PreconditionError("initial terms are defined on representable modules")
        got = self._total_keys.get(n)
        if got is None:
            if isinstance(self.cat, OvicCategory):
                key_fn = ovic_total_key
            elif isinstance(self.cat, OsiCategory):
                key_fn = osi_total_key
            else:
                raise PreconditionError(
                    "initial terms need the ordered categories, not %s" % self.cat.describe()
                )
            got = tuple(key_fn(u) for u in self.labels[n])
            if len(set(got)) != len(got):
                raise InvariantViolation("total-order keys collide at rank %d" % n)
            self._total_keys[n] = got
        return got


def representable(cat, d, max_rank, field, budget=None):
    """The representable module P_d: free on hom(d, n), postcomposition acts."""
    if not isinstance(d, int) or d < 0:
        raise PreconditionError("generator rank must be a non-negative integer, got %r" % (d,))
    if not isinstance(max_rank, int) or max_rank < 0:
        raise PreconditionError("truncation must be a non-negative integer, got %r" % (max_rank,))
    field = coef_field(field)
    labels = {}
    index = {}
    for n in range(max_rank + 1):
        basis = cat.hom(d, n, budget=budget)
        labels[n] = basis
        index[n] = {cat.key(u): i for i, u in enumerate(basis)}
    dims = {n: len(labels[n]) for n in labels}

    def act_fn(mor):
        src_basis = labels[mor.src]
        dst_index = index[mor.dst]
        rows = [[field.zero] * len(src_basis) for _ in range(dims[mor.dst])]
        for j, u in enumerate(src_basis):
            v = cat.compose(mor, u)
            rows[dst_index[cat.key(v)]][j] = field.one
        return tuple(tuple(r) for r in rows)

    return TruncatedModule(
        cat, field, max_rank, dims, act_fn,
        kind="representable", name="P%d" % d, gen_rank=d,
        labels=labels, labels_index=index,
    )


def zero_module(cat, max_rank, field):
    """The zero module at every rank."""
    field = coef_field(field)
    dims = {n: 0 for n in range(max_rank + 1)}

    def act_fn(mor):
        return ()

    return TruncatedModule(cat, field, max_rank, dims, act_fn, kind="generic", name="0")


def check_functoriality(module, up_to=None, budget=None):
    """Exhaustively verify act(g . f) = act(g) act(f) and act(id) = I.

    Returns the number of composable pairs checked; raises on any failure.
    """
    cat = module.cat
    field = module.field
    cap = module.max_rank if up_to is None else min(up_to, module.max_rank)
    pairs = 0
    for n in range(cap + 1):
        ident = module.act(cat.identity(n))
        expect = tuple(
            tuple(field.one if i == j else field.zero for j in range(module.dims[n]))
            for i in range(module.dims[n])
        )
        if ident != expect:
            raise InvariantViolation("act(identity(%d)) is not the identity matrix" % n)
    for a in range(cap + 1):
        for b in range(a, cap + 1):
            homs_ab = cat.hom(a, b, budget=budget)
            if not homs_ab:
                continue
            for c in range(b, cap + 1):
                homs_bc = cat.hom(b, c, budget=budget)
                charge(len(homs_ab) * len(homs_bc), budget, "functoriality pairs")
                for f in homs_ab:
                    act_f = module.act(f)
                    for g in homs_bc:
                        left = module.act(cat.compose(g, f))
                        right = mat_mul(field, module.act(g), act_f)
                        if left != right:
                            raise InvariantViolation(
                                "act(g . f) != act(g) act(f) for f: %d->%d, g: %d->%d" % (a, b, b, c)
                            )
                        pairs += 1
    return pairs


# ---------------------------------------------------------------------------
# Submodules and closure
# ---------------------------------------------------------------------------

class Submodule:
    """A rank-graded subspace of a parent module, closed under the action."""

    def __init__(self, parent, spans):
        self.parent = parent
        self.spans = spans  # rank -> (basis rows, pivots), canonical reduced

    def dims(self):
        return {n: len(self.spans[n][0]) for n in sorted(self.spans)}

    def contains(self, rank, vec):
        basis, pivots = self.spans[rank]
        return span_contains(self.parent.field, basis, pivots, vec)

    def contains_submodule(self, other):
        if other.parent is not self.parent:
            return False
        for n, (basis, _) in other.spans.items():
            for row in basis:
                if not self.contains(n, row):
                    return False
        return True

    def as_module(self, name=None):
        """The submodule as a TruncatedModule in its own basis."""
        parent = self.parent
        field = parent.field
        spans = self.spans
        dims = {n: len(spans[n][0]) for n in spans}

        def act_fn(mor):
            src_basis, _ = spans[mor.src]
            dst_basis, dst_pivots = spans[mor.dst]
            big = parent.act(mor)
            cols = []
            for b in src_basis:
                w = mat_vec(field, big, b)
                coords = span_coords(field, dst_basis, dst_pivots, w)
                if coords is None:
                    raise InvariantViolation("submodule is not closed under the action")
                cols.append(coords)
            return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(dims[mor.dst]))

        return TruncatedModule(
            parent.cat, field, parent.max_rank, dims, act_fn,
            kind="generic", name=name or ("sub(%s)" % parent.name),
        )

    def __repr__(self):
        return "Submodule(%s, dims=%s)" % (self.parent.name, self.dims())


def _apply_action(module, mor, vec, bits):
    if bits:
        cols = module.act_bits(mor)
        w = 0
        x = vec
        while x:
            j = (x & -x).bit_length() - 1
            w ^= cols[j]
            x &= x - 1
        return w
    return mat_vec(module.field, module.act(mor), vec)


def submodule_closure(parent, generators, max_rank=None, budget=None):
    """The smallest truncated submodule of parent containing the generators.

    Generators are (rank, vector) pairs.  On complemented categories the
    closure walks ranks upward pushing each span along the canonical
    inclusion and saturating under the automorphism orbit (every morphism
    factors as an automorphism after the canonical one); on the ordered
    categories it pushes along every enumerated morphism instead.  A final
    pass verifies the result is a fixed point of one more closure step.
    """
    field = parent.field
    cat = parent.cat
    nmax = parent.max_rank if max_rank is None else max_rank
    if nmax > parent.max_rank:
        raise PreconditionError("closure rank %d exceeds the truncation %d" % (nmax, parent.max_rank))
    bits = field.p == 2
    builders = {n: SpanBuilder(field, parent.dims[n]) for n in range(nmax + 1)}
    for rank, vec in generators:
        if not isinstance(rank, int) or rank < 0 or rank > nmax:
            raise PreconditionError("generator rank %r is outside 0..%d" % (rank, nmax))
        vec = tuple(field.of(x) for x in vec)
        if len(vec) != parent.dims[rank]:
            raise PreconditionError("generator at rank %d has length %d, expected %d" % (rank, len(vec), parent.dims[rank]))
        builders[rank].add(_bits_of(vec) if bits else vec)

    def saturate(n, seeds):
        frontier = list(seeds)
        auts = [u for u in cat.aut(n, budget=budget) if u != cat.identity(n)]
        while frontier:
            fresh = []
            for u in auts:
                for v in frontier:
                    w = _apply_action(parent, u, v, bits)
                    if builders[n].add(w):
                        fresh.append(w)
            frontier = fresh

    for n in range(nmax + 1):
        if parent.dims[n] == 0:
            continue
        if cat.is_complemented:
            if n > 0 and builders[n - 1].dim():
                push = cat.canonical(n - 1, n)
                for row in builders[n - 1].rows.values():
                    builders[n].add(_apply_action(parent, push, row, bits))
            saturate(n, list(builders[n].rows.values()))
        else:
            for m in range(n):
                if not builders[m].dim():
                    continue
                for f in cat.hom(m, n, budget=budget):
                    for row in list(builders[m].rows.values()):
                        builders[n].add(_apply_action(parent, f, row, bits))
            saturate(n, list(builders[n].rows.values()))

    # Closure fixed-point verification: one more full pass must add nothing.
    for m in range(nmax + 1):
        if not builders[m].dim():
            continue
        rows_m = list(builders[m].rows.values())
        for n in range(m, nmax + 1):
            for f in cat.hom(m, n, budget=budget):
                if m == n and f == cat.identity(n):
                    continue
                for row in rows_m:
                    w = _apply_action(parent, f, row, bits)
                    if not builders[n].contains(w):
                        raise InvariantViolation(
                            "closure is not a fixed point: a morphism %d -> %d leaves the span" % (m, n)
                        )
    spans = {n: builders[n].basis() for n in range(nmax + 1)}
    return Submodule(parent, spans)


# ---------------------------------------------------------------------------
# Initial terms over the ordered categories
# ---------------------------------------------------------------------------

def init_of(module, rank, vec):
    """The initial term of an element of P_d: its leading coefficient times
    the largest basis morphism present in the staged total order; init(0) = 0.
    """
    field = module.field
    keys = module.total_keys(rank)
    vec = tuple(field.of(x) for x in vec)
    if len(vec) != module.dims[rank]:
        raise PreconditionError("element at rank %d has length %d, expected %d" % (rank, len(vec), module.dims[rank]))
    best = None
    for pos, x in enumerate(vec):
        if x != field.zero and (best is None or keys[pos] > keys[best]):
            best = pos
    if best is None:
        return tuple(field.zero for _ in vec)
    return tuple(vec[best] if pos == best else field.zero for pos in range(len(vec)))


def init_positions(module, rank, vec):
    """The basis position of the initial term, or None for the zero vector."""
    field = module.field
    keys = module.total_keys(rank)
    best = None
    for pos, x in enumerate(vec):
        if field.of(x) != field.zero and (best is None or keys[pos] > keys[best]):
            best = pos
    return best


def init_module(sub):
    """Per rank, the leading basis positions attained by the span.

    Eliminating the span with columns ordered by descending total key makes
    the pivot columns exactly the attainable initial positions, so the
    initial module at each rank is the span of those basis vectors.
    """
    parent = sub.parent
    field = parent.field
    out = {}
    for n in sorted(sub.spans):
        rows, _ = sub.spans[n]
        if not rows:
            out[n] = ()
            continue
        keys = parent.total_keys(n)
        width = parent.dims[n]
        order = sorted(range(width), key=lambda pos: keys[pos], reverse=True)
        permuted = [tuple(row[order[t]] for t in range(width)) for row in rows]
        _, pivots = rref(field, permuted, width)
        out[n] = tuple(sorted(order[t] for t in pivots))
    return out


def init_gap_check(n_sub, m_sub):
    """Compare a verified pair N <= M of submodules through initial terms.

    Reports per rank whether the initial spans and the subspaces agree, and
    asserts the implication: equal initial spans force equal subspaces.
    """
    if n_sub.parent is not m_sub.parent:
        raise PreconditionError("init comparison needs submodules of one parent")
    if sorted(n_sub.spans) != sorted(m_sub.spans):
        raise PreconditionError("init comparison needs a common truncation")
    if not m_sub.contains_submodule(n_sub):
        raise PreconditionError("the first submodule is not contained in the second")
    init_n = init_module(n_sub)
    init_m = init_module(m_sub)
    per_rank = {}
    all_init_equal = True
    all_span_equal = True
    for n in sorted(n_sub.spans):
        rows_n, _ = n_sub.spans[n]
        rows_m, _ = m_sub.spans[n]
        init_equal = init_n[n] == init_m[n]
        span_equal = len(rows_n) == len(rows_m)  # containment holds, so equal dims mean equal spans
        if init_equal and not span_equal:
            raise InvariantViolation("equal initial spans with unequal submodules at rank %d" % n)
        per_rank[n] = {
            "init_equal": init_equal,
            "span_equal": span_equal,
            "init_positions_sub": list(init_n[n]),
            "init_positions_super": list(init_m[n]),
            "dim_sub": len(rows_n),
            "dim_super": len(rows_m),
        }
        all_init_equal = all_init_equal and init_equal
        all_span_equal = all_span_equal and span_equal
    if all_init_equal and not all_span_equal:
        raise InvariantViolation("equal initial modules with unequal submodules")
    return {
        "per_rank": per_rank,
        "inits_equal": all_init_equal,
        "modules_equal": all_span_equal,
        "truncation": n_sub.parent.max_rank,
    }


# ---------------------------------------------------------------------------
# Shift complexes
# ---------------------------------------------------------------------------

VARIANTS = ("plain", "prime", "double", "triple")


def _perm_sign(perm):
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def _shift_group(cat, variant, p, budget=None):
    """The identification group on the p leading slots, with signs.

    "prime" identifies along per-slot automorphisms (sign +1), "double"
    along slot permutations (permutation sign), "triple" along both.
    """
    if variant == "plain" or p == 0:
        return [(cat.identity(p), 1)]
    elements = []
    if variant in ("double", "triple"):
        perm_mors = [
            (cat.block_permutation((1,) * p, perm), _perm_sign(perm))
            for perm in permutations(range(p))
        ]
    else:
        perm_mors = [(cat.identity(p), 1)]
    if variant in ("prime", "triple"):
        auts1 = cat.aut(1, budget=budget)
        aut_mors = []
        for combo in product(auts1, repeat=p):
            acc = cat.identity(0)
            for a in combo:
                acc = cat.monoidal_sum(acc, a)
            aut_mors.append(acc)
    else:
        aut_mors = [cat.identity(p)]
    for pm, sign in perm_mors:
        for am in aut_mors:
            elements.append((cat.compose(pm, am), sign))
    return elements


def _orbit_tables(cat, basis, group, budget=None):
    """Representatives and the projection table of a free right action.

    Returns (reps, proj) with proj[key(member)] = (sign, rep index); the
    action must be free, and a collision raises an invariant violation.
    """
    if len(group) == 1:
        reps = tuple(basis)
        proj = {cat.key(u): (1, i) for i, u in enumerate(reps)}
        return reps, proj
    charge(len(basis) * len(group), budget, "shift quotient orbits")
    reps = []
    proj = {}
    for u in basis:
        if cat.key(u) in proj:
            continue
        idx = len(reps)
        reps.append(u)
        members = {}
        for g, sign in group:
            m = cat.compose(u, g)
            k = cat.key(m)
            if k in members:
                raise InvariantViolation("shift identification group does not act freely")
            members[k] = sign
        for k, sign in members.items():
            proj[k] = (sign, idx)
    if len(proj) != len(basis):
        raise InvariantViolation("orbit projection does not cover the basis")
    return tuple(reps), proj


def _skip_inclusion(cat, i, p):
    """s_i: the inclusion of p-1 slots into p slots omitting slot i (1-based)."""
    return cat.slot_inclusion(tuple(t for t in range(p) if t != i - 1), p)


class ShiftComplex:
    """Chain spaces and differentials of a shift complex, all ranks <= N.

    spaces[(p, n)] is the basis label tuple of (Sigma_p M)_n for 0 <= p <= q;
    diffs[(p, n)] is the sparse differential (Sigma_p M)_n -> (Sigma_{p-1} M)_n
    for 1 <= p <= q.  d o d = 0 is verified at construction.
    """

    def __init__(self, module, variant, route, q, spaces, diffs, blocks):
        self.module = module
        self.variant = variant
        self.route = route
        self.q = q
        self.spaces = spaces
        self.diffs = diffs
        self._blocks = blocks

    def dim(self, p, n):
        return len(self.spaces[(p, n)])

    def diff(self, p, n):
        return self.diffs[(p, n)]

    def __repr__(self):
        return "ShiftComplex(%s, %s, q=%d, N=%d)" % (self.module.name, self.variant, self.q, self.module.max_rank)


def _complement_blocks(cat, module, reps, budget=None):
    """Block layout over complement ranks: labels, offsets and inclusions."""
    offsets = {}
    labels = []
    info = {}
    at = 0
    for h in reps:
        rank, j = cat.complement_of(h)
        offsets[cat.key(h)] = at
        info[cat.key(h)] = (rank, j)
        for b in range(module.dims[rank]):
            labels.append((h, b))
        at += module.dims[rank]
    return tuple(labels), offsets, info


def shift_complex(module, q, variant="plain", route="auto", budget=None):
    """Build the shift complex of a module up to chain degree q.

    route "representable" realizes (Sigma_p P_d)_n on the basis hom(p+d, n)
    with the differential acting by precomposition; route "complement"
    assembles the chain spaces from explicit complements of each h and acts
    through the module's matrices.  "auto" picks the first when available.
    """
    cat = module.cat
    field = module.field
    if variant not in VARIANTS:
        raise PreconditionError("unknown shift variant %r; use one of %s" % (variant, ", ".join(VARIANTS)))
    if not cat.is_complemented:
        raise PreconditionError("shift complexes need a complemented category, not %s" % cat.describe())
    if variant in ("double", "triple") and not cat.is_symmetric:
        raise PreconditionError("variant %r needs a symmetric instance" % variant)
    if not isinstance(q, int) or q < 0:
        raise PreconditionError("chain degree bound must be a non-negative integer, got %r" % (q,))
    if q > module.max_rank:
        raise PreconditionError("chain degree bound %d exceeds the truncation %d" % (q, module.max_rank))
    if route == "auto":
        route = "representable" if module.kind == "representable" else "complement"
    if route not in ("representable", "complement"):
        raise PreconditionError("unknown shift route %r" % (route,))
    if route == "representable" and module.kind != "representable":
        raise PreconditionError("the representable route needs a representable module")

    nmax = module.max_rank
    groups = {p: _shift_group(cat, variant, p, budget=budget) for p in range(q + 1)}
    spaces = {}
    diffs = {}
    blocks = {}
    reps_at = {}
    proj_at = {}
    info_at = {}
    offs_at = {}

    if route == "representable":
        d0 = module.gen_rank
        wide_groups = {
            p: (
                group if len(group) == 1 or d0 == 0 else
                [(cat.monoidal_sum(g, cat.identity(d0)), sign) for g, sign in group]
            )
            for p, group in groups.items()
        }
        for n in range(nmax + 1):
            for p in range(q + 1):
                basis = cat.hom(p + d0, n, budget=budget)
                reps, proj = _orbit_tables(cat, basis, wide_groups[p], budget=budget)
                reps_at[(p, n)] = reps
                proj_at[(p, n)] = proj
                spaces[(p, n)] = reps
        for n in range(nmax + 1):
            for p in range(1, q + 1):
                reps = reps_at[(p, n)]
                proj = proj_at[(p - 1, n)]
                rows = len(reps_at[(p - 1, n)])
                entries = {}
                for j, u in enumerate(reps):
                    for i in range(1, p + 1):
                        step = cat.monoidal_sum(_skip_inclusion(cat, i, p), cat.identity(d0))
                        v = cat.compose(u, step)
                        sign, r = proj[cat.key(v)]
                        coeff = field.of(sign if i % 2 == 1 else -sign)
                        spot = (r, j)
                        entries[spot] = field.add(entries.get(spot, field.zero), coeff)
                diffs[(p, n)] = SparseMap.from_entries(field, rows, len(reps), entries)
    else:
        for n in range(nmax + 1):
            for p in range(q + 1):
                basis = cat.hom(p, n, budget=budget)
                reps, proj = _orbit_tables(cat, basis, groups[p], budget=budget)
                labels, offsets, info = _complement_blocks(cat, module, reps, budget=budget)
                if len(groups[p]) > 1:
                    for h in basis:
                        rank_h, j_h = cat.complement_of(h)
                        sign_rep = proj[cat.key(h)][1]
                        rank_r, j_r = info[cat.key(reps[sign_rep])]
                        if rank_h != rank_r or cat.key(j_h) != cat.key(j_r):
                            raise InvariantViolation("complements differ within one identification orbit")
                reps_at[(p, n)] = reps
                proj_at[(p, n)] = proj
                info_at[(p, n)] = info
                offs_at[(p, n)] = offsets
                spaces[(p, n)] = labels
                blocks[(p, n)] = (offsets, info)
        for n in range(nmax + 1):
            for p in range(1, q + 1):
                reps = reps_at[(p, n)]
                proj = proj_at[(p - 1, n)]
                info_lo = info_at[(p - 1, n)]
                offs_lo = offs_at[(p - 1, n)]
                info_hi = info_at[(p, n)]
                offs_hi = offs_at[(p, n)]
                entries = {}
                for h in reps:
                    rank_h, j_h = info_hi[cat.key(h)]
                    off_h = offs_hi[cat.key(h)]
                    for i in range(1, p + 1):
                        v = cat.compose(h, _skip_inclusion(cat, i, p))
                        sign, r = proj[cat.key(v)]
                        target = reps_at[(p - 1, n)][r]
                        rank_t, j_t = info_lo[cat.key(target)]
                        off_t = offs_lo[cat.key(target)]
                        c = cat.factor_through(j_t, j_h)
                        mat = module.act(c)
                        coeff = field.of(sign if i % 2 == 1 else -sign)
                        for rr in range(module.dims[rank_t]):
                            row = mat[rr]
                            for cc in range(module.dims[rank_h]):
                                x = row[cc]
                                if x != field.zero:
                                    spot = (off_t + rr, off_h + cc)
                                    entries[spot] = field.add(entries.get(spot, field.zero), field.mul(coeff, x))
                rows = len(spaces[(p - 1, n)])
                diffs[(p, n)] = SparseMap.from_entries(field, rows, len(spaces[(p, n)]), entries)

    for n in range(nmax + 1):
        for p in range(2, q + 1):
            if not _composite_is_zero(field, diffs[(p - 1, n)], diffs[(p, n)]):
                raise InvariantViolation("d o d != 0 at degree %d, rank %d (%s)" % (p, n, variant))
    return ShiftComplex(module, variant, route, q, spaces, diffs, blocks)


# ---------------------------------------------------------------------------
# Homology and exactness
# ---------------------------------------------------------------------------

def complex_homology(cplx, v_rank, up_to_degree):
    """Homology dimensions H_0..H_{up_to_degree} of the complex at one rank.

    H_0 sits at the module spot of ... -> (Sigma_1 M)_V -> M_V -> 0.
    """
    module = cplx.module
    field = module.field
    if not (0 <= v_rank <= module.max_rank):
        raise PreconditionError("rank %r is outside the truncation 0..%d" % (v_rank, module.max_rank))
    if not (0 <= up_to_degree < cplx.q):
        raise PreconditionError(
            "degree bound %r needs the complex built past it (q = %d)" % (up_to_degree, cplx.q)
        )
    out = {}
    rank_below = 0
    for i in range(up_to_degree + 1):
        dim_i = cplx.dim(i, v_rank)
        rank_above = cplx.diff(i + 1, v_rank).rank(field)
        h = dim_i - rank_below - rank_above
        if h < 0:
            raise InvariantViolation("negative homology dimension at degree %d, rank %d" % (i, v_rank))
        out["H%d" % i] = h
        rank_below = rank_above
    return out


def homology_report(cplx, v_rank, up_to_degree):
    """The homology table wrapped with its provenance and truncation."""
    return {
        "cat": cplx.module.cat.describe(),
        "module": cplx.module.name,
        "variant": cplx.variant,
        "rank": v_rank,
        "dims": complex_homology(cplx, v_rank, up_to_degree),
        "truncation": cplx.module.max_rank,
    }


def exactness_report(cplx, up_to_degree):
    """Vanishing of H_0..H_{up_to_degree} across all ranks <= N.

    Reports the least rank from which every tested larger rank is exact,
    and flags monotonicity anomalies (vanishing that fails again later);
    anomalies are reported, never raised.
    """
    module = cplx.module
    nmax = module.max_rank
    per_rank = {}
    zero_at = []
    for n in range(nmax + 1):
        dims = complex_homology(cplx, n, up_to_degree)
        all_zero = all(v == 0 for v in dims.values())
        per_rank[n] = {"dims": dims, "all_zero": all_zero}
        zero_at.append(all_zero)
    threshold = None
    for n in range(nmax, -1, -1):
        if zero_at[n]:
            threshold = n
        else:
            break
    anomalies = []
    seen_zero = False
    for n in range(nmax + 1):
        if zero_at[n]:
            seen_zero = True
        elif seen_zero:
            anomalies.append(n)
    return {
        "cat": module.cat.describe(),
        "module": module.name,
        "variant": cplx.variant,
        "up_to_degree": up_to_degree,
        "per_rank": per_rank,
        "threshold": threshold,
        "anomalies": anomalies,
        "truncation": nmax,
    }


# ---------------------------------------------------------------------------
# Stabilization chain homotopy
# ---------------------------------------------------------------------------

def _rotate_last(cat, mor):
    """Append a fresh slot to mor's source and rotate it to the front.

    The composite sends slot 0 of the enlarged source to the appended last
    target factor and slot t+1 through mor's slot t, so precomposing with
    the first-slot inclusion recovers the stabilization.
    """
    total = mor.src + 1
    widened = cat.monoidal_sum(mor, cat.identity(1))
    rotation = cat.block_permutation((1,) * total, tuple(range(1, total)) + (0,))
    return cat.compose(widened, rotation)


def chain_homotopy_check(module, v_rank, route="auto", budget=None):
    """Verify dG + Gd = stabilization on the plain shift complex at one rank.

    G sends a basis morphism u to its widening with a fresh slot rotated to
    the front; degree 0 reduces to d_1 G = I.  Also checks the consequence:
    every homology class maps to zero one rank up under stabilization.
    """
    cat = module.cat
    field = module.field
    if not cat.is_symmetric:
        raise PreconditionError("the chain homotopy needs a symmetric instance, not %s" % cat.describe())
    if v_rank + 1 > module.max_rank:
        raise PreconditionError("rank %d + 1 exceeds the truncation %d" % (v_rank, module.max_rank))
    q = v_rank + 1
    cplx = shift_complex(module, q, "plain", route=route, budget=budget)
    route = cplx.route
    iota = cat.canonical(v_rank, v_rank + 1)

    def rep_index(p, n):
        labels = cplx.spaces[(p, n)]
        return {cat.key(u): i for i, u in enumerate(labels)}

    if route == "representable":
        index_hi = {p: rep_index(p, v_rank + 1) for p in range(q + 1)}

        def g_map(p):
            cols = []
            for u in cplx.spaces[(p, v_rank)]:
                ubar = _rotate_last(cat, u)
                cols.append(((index_hi[p + 1][cat.key(ubar)], field.one),))
            return SparseMap(cplx.dim(p + 1, v_rank + 1), cplx.dim(p, v_rank), cols)

        def stab_map(p):
            cols = []
            for u in cplx.spaces[(p, v_rank)]:
                v = cat.compose(iota, u)
                cols.append(((index_hi[p][cat.key(v)], field.one),))
            return SparseMap(cplx.dim(p, v_rank + 1), cplx.dim(p, v_rank), cols)
    else:
        def transported_column(p_target, h_target, inc, b):
            offsets, info = cplx._blocks[(p_target, v_rank + 1)]
            rank_t, j_t = info[cat.key(h_target)]
            c = cat.factor_through(j_t, inc)
            mat = module.act(c)
            off = offsets[cat.key(h_target)]
            return tuple(
                (off + rr, mat[rr][b]) for rr in range(len(mat)) if mat[rr][b] != field.zero
            )

        def g_map(p):
            _, info_lo = cplx._blocks[(p, v_rank)]
            cols = []
            for h, b in cplx.spaces[(p, v_rank)]:
                _, j_h = info_lo[cat.key(h)]
                hbar = _rotate_last(cat, h)
                cols.append(transported_column(p + 1, hbar, cat.compose(iota, j_h), b))
            return SparseMap(cplx.dim(p + 1, v_rank + 1), cplx.dim(p, v_rank), cols)

        def stab_map(p):
            _, info_lo = cplx._blocks[(p, v_rank)]
            cols = []
            for h, b in cplx.spaces[(p, v_rank)]:
                _, j_h = info_lo[cat.key(h)]
                cols.append(transported_column(p, cat.compose(iota, h), cat.compose(iota, j_h), b))
            return SparseMap(cplx.dim(p, v_rank + 1), cplx.dim(p, v_rank), cols)

    g_maps = {p: g_map(p) for p in range(q)}
    stab_maps = {p: stab_map(p) for p in range(q)}

    per_degree = {}
    for p in range(q):
        d_above = cplx.diff(p + 1, v_rank + 1)
        ok = True
        for j in range(cplx.dim(p, v_rank)):
            acc = {}
            for r, c in d_above.apply_column(field, g_maps[p].column(j)):
                acc[r] = field.add(acc.get(r, field.zero), c)
            if p >= 1:
                for r, c in g_maps[p - 1].apply_column(field, cplx.diff(p, v_rank).column(j)):
                    acc[r] = field.add(acc.get(r, field.zero), c)
            want = dict(stab_maps[p].column(j))
            got = {r: c for r, c in acc.items() if c != field.zero}
            if got != want:
                ok = False
                break
        per_degree[p] = ok

    induced = {}
    for i in range(q):
        dim_i = cplx.dim(i, v_rank)
        if i == 0:
            cycles = tuple(
                tuple(field.one if t == j else field.zero for t in range(dim_i))
                for j in range(dim_i)
            )
        else:
            cycles = kernel_vectors(field, cplx.diff(i, v_rank).dense_rows(field), dim_i)
        boundary_cols = list(cplx.diff(i + 1, v_rank + 1).dense_columns(field))
        base_rank = row_rank(field, boundary_cols, cplx.dim(i, v_rank + 1)) if boundary_cols else 0
        stab_dense = stab_maps[i].dense_rows(field)
        images = [mat_vec(field, stab_dense, z) for z in cycles]
        joint = row_rank(field, boundary_cols + images, cplx.dim(i, v_rank + 1)) if (boundary_cols or images) else 0
        induced[i] = joint == base_rank

    return {
        "cat": cat.describe(),
        "module": module.name,
        "rank": v_rank,
        "q": q,
        "route": route,
        "homotopy": per_degree,
        "homotopy_ok": all(per_degree.values()),
        "induced_zero": induced,
        "induced_zero_ok": all(induced.values()),
        "truncation": module.max_rank,
    }


# ---------------------------------------------------------------------------
# Finite generation
# ---------------------------------------------------------------------------

def generation_degree(module, route="auto", budget=None):
    """Per rank, whether d_1: (Sigma_1 M)_V -> M_V is onto, and the least
    rank from which it stays onto within the truncation."""
    field = module.field
    cplx = shift_complex(module, 1, "plain", route=route, budget=budget)
    per_rank = {}
    for n in range(module.max_rank + 1):
        dim0 = cplx.dim(0, n)
        per_rank[n] = dim0 == 0 or cplx.diff(1, n).rank(field) == dim0
    stable = None
    for n in range(module.max_rank, -1, -1):
        if per_rank[n]:
            stable = n
        else:
            break
    return {
        "cat": module.cat.describe(),
        "module": module.name,
        "per_rank": per_rank,
        "stable_from": stable,
        "truncation": module.max_rank,
    }
