"""Exact matrices over finite commutative rings.

A Mat is an immutable rows x cols array of ring element indices (row major).
A matrix with r rows and c cols represents a module map R^c -> R^r acting on
column vectors.  Everything that needs pivoting (inverses, kernels, reduced
echelon forms) runs per local factor of the ring, where an invertible matrix
always admits unit pivots, and results are recombined by CRT.
"""

from itertools import combinations, product as iproduct

from .errors import BudgetExceeded, InvariantViolation, PreconditionError, enumeration_budget

MAX_DET_SIZE = 8


class Mat:
    """Immutable matrix over a FiniteRing."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring, rows, cols, data):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.data = data
        assert len(data) == rows * cols

    @classmethod
    def from_rows(cls, ring, rows):
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise PreconditionError("ragged matrix rows")
            for x in row:
                ring.check_element(x)
                flat.append(x)
        return cls(ring, r, c, tuple(flat))

    @classmethod
    def from_cols(cls, ring, cols):
        if not cols:
            return cls(ring, 0, 0, ())
        r = len(cols[0])
        if r == 0:
            return cls(ring, 0, len(cols), ())
        return cls.from_rows(ring, [[col[i] for col in cols] for i in range(r)])

    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one, ring.zero
        return cls(ring, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, rows, cols, (ring.zero,) * (rows * cols))

    def entry(self, i, j):
        return self.data[i * self.cols + j]

    def row(self, i):
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return tuple(self.data[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return Mat(
            self.ring,
            self.cols,
            self.rows,
            tuple(self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def mul(self, other):
        if self.ring != other.ring:
            raise PreconditionError("matrix product over different rings")
        if self.cols != other.rows:
            raise PreconditionError(
                "shape mismatch in matrix product: %dx%d times %dx%d"
                % (self.rows, self.cols, other.rows, other.cols)
            )
        R = self.ring
        radd, rmul, zero = R.add, R.mul, R.zero
        a, b = self.data, other.data
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                acc = zero
                for t in range(k):
                    x = arow[t]
                    if x:
                        acc = radd(acc, rmul(x, b[t * m + j]))
                out.append(acc)
        return Mat(R, n, m, tuple(out))

    def matvec(self, vec):
        R = self.ring
        radd, rmul, zero = R.add, R.mul, R.zero
        out = []
        for i in range(self.rows):
            acc = zero
            row = self.row(i)
            for x, v in zip(row, vec):
                if x and v:
                    acc = radd(acc, rmul(x, v))
            out.append(acc)
        return tuple(out)

    def add(self, other):
        assert self.ring == other.ring and self.rows == other.rows and self.cols == other.cols
        radd = self.ring.add
        return Mat(self.ring, self.rows, self.cols,
                   tuple(radd(x, y) for x, y in zip(self.data, other.data)))

    def neg(self):
        rneg = self.ring.neg
        return Mat(self.ring, self.rows, self.cols, tuple(rneg(x) for x in self.data))

    def scale(self, c):
        rmul = self.ring.mul
        return Mat(self.ring, self.rows, self.cols, tuple(rmul(c, x) for x in self.data))

    def submatrix(self, row_idx, col_idx):
        return Mat(
            self.ring,
            len(row_idx),
            len(col_idx),
            tuple(self.data[i * self.cols + j] for i in row_idx for j in col_idx),
        )

    def insert_col(self, pos, col):
        assert len(col) == self.rows and 0 <= pos <= self.cols
        rows = []
        for i in range(self.rows):
            row = list(self.row(i))
            row.insert(pos, col[i])
            rows.append(row)
        return Mat.from_rows(self.ring, rows) if rows else Mat(self.ring, 0, self.cols + 1, ())

    def insert_row(self, pos, row):
        assert len(row) == self.cols and 0 <= pos <= self.rows
        rows = self.to_rows()
        rows.insert(pos, list(row))
        return Mat.from_rows(self.ring, rows)

    def delete_rows(self, idxs):
        drop = set(idxs)
        rows = [list(self.row(i)) for i in range(self.rows) if i not in drop]
        if not rows:
            return Mat(self.ring, 0, self.cols, ())
        return Mat.from_rows(self.ring, rows)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and other.ring == self.ring
            and other.rows == self.rows
            and other.cols == self.cols
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.ring.spec, self.rows, self.cols, self.data))

    def __repr__(self):
        return "Mat(%s, %s)" % (self.ring.spec, self.to_rows())


def hstack(a, b):
    assert a.ring == b.ring and a.rows == b.rows
    rows = [list(a.row(i)) + list(b.row(i)) for i in range(a.rows)]
    if not rows:
        return Mat(a.ring, 0, a.cols + b.cols, ())
    return Mat.from_rows(a.ring, rows)


def vstack(a, b):
    assert a.ring == b.ring and a.cols == b.cols
    return Mat(a.ring, a.rows + b.rows, a.cols, a.data + b.data)


def block_diag(ring, mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[ring.zero] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m.entry(i, j)
        r0 += m.rows
        c0 += m.cols
    if rows == 0:
        return Mat(ring, 0, cols, ())
    return Mat.from_rows(ring, out)


def mat_mul(a, b):
    """Matrix product a*b."""
    return a.mul(b)


# ----- determinants -----

def det(m):
    """Determinant by cofactor expansion; square matrices of size <= 8 only."""
    if m.rows != m.cols:
        raise PreconditionError("determinant of a non-square matrix")
    n = m.rows
    if n > MAX_DET_SIZE:
        raise PreconditionError("determinant limited to size <= %d, got %d" % (MAX_DET_SIZE, n))
    R = m.ring
    if n == 0:
        return R.one
    radd, rmul, rneg = R.add, R.mul, R.neg
    memo = {}

    def expand(cols_left):
        if len(cols_left) == 1:
            return m.entry(n - 1, cols_left[0])
        got = memo.get(cols_left)
        if got is not None:
            return got
        i = n - len(cols_left)
        acc = R.zero
        for pos, j in enumerate(cols_left):
            a = m.entry(i, j)
            if not a:
                continue
            rest = cols_left[:pos] + cols_left[pos + 1:]
            term = rmul(a, expand(rest))
            if pos % 2:
                term = rneg(term)
            acc = radd(acc, term)
        memo[cols_left] = acc
        return acc

    return expand(tuple(range(n)))


# ----- per-local-factor plumbing -----

def project_mat(m, i):
    """Image of m in the i-th local factor of its ring."""
    dec = m.ring.local
    proj = dec._proj[i]
    return Mat(dec.factors[i], m.rows, m.cols, tuple(proj[x] for x in m.data))


def lift_mats(ring, mats):
    """CRT-recombine one matrix per local factor of ring."""
    dec = ring.local
    assert len(mats) == len(dec.factors)
    rows, cols = mats[0].rows, mats[0].cols
    for m in mats:
        assert m.rows == rows and m.cols == cols
    data = tuple(
        dec.lift(tuple(m.data[k] for m in mats)) for k in range(rows * cols)
    )
    return Mat(ring, rows, cols, data)


def _local_rref(m):
    """Reduced row echelon form over a local ring with unit pivots.

    Returns (pivot column tuple, row list).  Pivoting greedily takes, for each
    column left to right, the first unused row holding a unit there.
    """
    R = m.ring
    radd, rmul, rneg = R.add, R.mul, R.neg
    rows = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        sel = None
        for i in range(r, m.rows):
            if R.is_unit(rows[i][c]):
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = R.inverse(rows[r][c])
        rows[r] = [rmul(inv, x) for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                f = rneg(rows[i][c])
                rows[i] = [radd(x, rmul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return tuple(pivots), rows


def _local_inverse(m):
    """Inverse over a local ring, or None when m is not invertible."""
    n = m.rows
    aug = hstack(m, Mat.identity(m.ring, n))
    pivots, rows = _local_rref(aug)
    if tuple(pivots) != tuple(range(n)):
        return None
    return Mat.from_rows(m.ring, [row[n:] for row in rows])


def try_inverse(m):
    """Inverse of a square matrix, or None when it is not invertible."""
    if m.rows != m.cols:
        raise PreconditionError("inverse of a non-square matrix")
    if m.rows == 0:
        return Mat(m.ring, 0, 0, ())
    dec = m.ring.local
    locs = []
    for i in range(len(dec.factors)):
        inv = _local_inverse(project_mat(m, i))
        if inv is None:
            return None
        locs.append(inv)
    return lift_mats(m.ring, locs)


def inverse(m):
    inv = try_inverse(m)
    if inv is None:
        raise PreconditionError("matrix is not invertible")
    return inv


def is_invertible(m):
    return m.rows == m.cols and try_inverse(m) is not None


# ----- surjectivity, kernels -----

def _local_has_unit_minor(m):
    """Over a local ring: does the d x n matrix have an invertible d x d minor."""
    d, n = m.rows, m.cols
    if d == 0:
        return True
    if d > n:
        return False
    for I in combinations(range(n), d):
        if m.ring.is_unit(det(m.submatrix(range(d), I))):
            return True
    return False


def is_surjective(m):
    """Is the map R^cols -> R^rows given by m onto.

    Equivalent to an invertible maximal minor in every local factor.
    """
    if m.rows == 0:
        return True
    if m.rows > m.cols:
        return False
    dec = m.ring.local
    return all(_local_has_unit_minor(project_mat(m, i)) for i in range(len(dec.factors)))


def _local_kernel(m):
    """Kernel basis columns for a surjective d x n matrix over a local ring."""
    d, n = m.rows, m.cols
    pivots, rows = _local_rref(m)
    if len(pivots) != d:
        raise PreconditionError("matrix is not surjective over local factor")
    R = m.ring
    piv_set = set(pivots)
    free = [c for c in range(n) if c not in piv_set]
    basis = []
    for c in free:
        v = [R.zero] * n
        v[c] = R.one
        for i, p in enumerate(pivots):
            v[p] = R.neg(rows[i][c])
        basis.append(tuple(v))
    return basis  # list of length-n column tuples


def kernel_basis(m):
    """Basis of ker(m) for a surjective map, as an n x (n-d) matrix of columns.

    Deterministic: per local factor, reduced echelon form with greedy unit
    pivots; one kernel vector per free column; CRT across factors.
    """
    if not is_surjective(m):
        raise PreconditionError("kernel_basis requires a surjective matrix")
    dec = m.ring.local
    locals_ = [_local_kernel(project_mat(m, i)) for i in range(len(dec.factors))]
    r = m.cols - m.rows
    cols = []
    for j in range(r):
        col = tuple(
            dec.lift(tuple(locals_[i][j][k] for i in range(len(dec.factors))))
            for k in range(m.cols)
        )
        cols.append(col)
    K = Mat.from_cols(m.ring, cols) if cols else Mat(m.ring, m.cols, 0, ())
    prod = m.mul(K)
    if any(x != m.ring.zero for x in prod.data):
        raise InvariantViolation("kernel basis does not annihilate the matrix")
    return K


# ----- column-adapted maps -----

class ColumnProfile:
    """Pivot profile of a column-adapted map, one pivot tuple per local factor.

    Pivot indices are 0-based internally; report() renders them 1-based.
    """

    __slots__ = ("per_factor",)

    def __init__(self, per_factor):
        self.per_factor = tuple(tuple(p) for p in per_factor)

    def single(self):
        """The pivot tuple when the ring is local."""
        if len(self.per_factor) != 1:
            raise PreconditionError("single() requires a local ring profile")
        return self.per_factor[0]

    def report(self):
        return [[j + 1 for j in p] for p in self.per_factor]

    def __eq__(self, other):
        return isinstance(other, ColumnProfile) and other.per_factor == self.per_factor

    def __hash__(self):
        return hash(self.per_factor)

    def __repr__(self):
        return "ColumnProfile(%r)" % (self.report(),)


def _local_adapted(m):
    """Pivot tuple of a column-adapted d x n map over a local ring, else None.

    Column s_i must equal the i-th standard basis vector and every entry of
    row i strictly left of s_i must be a non-unit, with s_1 < ... < s_d.
    """
    d, n = m.rows, m.cols
    R = m.ring
    s = []
    prev = -1
    for i in range(d):
        target = tuple(R.one if t == i else R.zero for t in range(d))
        j = None
        for c in range(n):
            if m.col(c) == target:
                j = c
                break
        if j is None:
            return None
        row = m.row(i)
        if any(R.is_unit(row[t]) for t in range(j)):
            return None
        if j <= prev:
            return None
        prev = j
        s.append(j)
    return tuple(s)


def column_adapted(m):
    """ColumnProfile of m when m is column-adapted in every local factor, else None."""
    dec = m.ring.local
    profiles = []
    for i in range(len(dec.factors)):
        p = _local_adapted(project_mat(m, i))
        if p is None:
            return None
        profiles.append(p)
    return ColumnProfile(profiles)


def row_adapted(m):
    """Row profile: the column profile of the transpose."""
    return column_adapted(m.transpose())


def _local_lex_min_unit_cols(m):
    d, n = m.rows, m.cols
    for I in combinations(range(n), d):
        if m.ring.is_unit(det(m.submatrix(range(d), I))):
            return I
    return None


def factor_surjection(m):
    """Unique factorization f = f2 * f1 of a surjection into a column-adapted
    map f1 followed by an invertible f2.

    Per local factor, f2 is the submatrix on the lexicographically least
    column subset with invertible maximal minor and f1 = f2^{-1} * f; the
    factors are CRT-recombined.
    """
    if m.rows > m.cols or not is_surjective(m):
        raise PreconditionError("factor_surjection requires a surjective matrix")
    dec = m.ring.local
    f1s, f2s = [], []
    for i in range(len(dec.factors)):
        mi = project_mat(m, i)
        I = _local_lex_min_unit_cols(mi)
        if I is None:
            raise PreconditionError("matrix is not surjective over local factor")
        A = mi.submatrix(range(m.rows), I)
        h = _local_inverse(A)
        f1s.append(h.mul(mi))
        f2s.append(A)
    f1 = lift_mats(m.ring, f1s)
    f2 = lift_mats(m.ring, f2s)
    if f2.mul(f1) != m:
        raise InvariantViolation("surjection factorization does not recompose")
    if column_adapted(f1) is None:
        raise InvariantViolation("adapted factor of a surjection is not column-adapted")
    return f1, f2


# ----- misc -----

def column_span_set(m, budget=None):
    """All R-linear combinations of the columns of m, as a set of tuples."""
    R = m.ring
    total = R.size ** m.cols
    cap = enumeration_budget(budget)
    if total > cap:
        raise BudgetExceeded(
            "column span enumeration needs %d vectors, budget is %d" % (total, cap),
            required=total,
        )
    out = set()
    cols = [m.col(j) for j in range(m.cols)]
    radd, rmul, zero = R.add, R.mul, R.zero
    for coeffs in iproduct(range(R.size), repeat=m.cols):
        v = [zero] * m.rows
        for c, col in zip(coeffs, cols):
            if c:
                for k in range(m.rows):
                    if col[k]:
                        v[k] = radd(v[k], rmul(c, col[k]))
        out.add(tuple(v))
    return out


def mat_to_payload(m):
    return {"rows": m.rows, "cols": m.cols, "entries": m.to_rows()}


def mat_from_payload(ring, payload):
    if isinstance(payload, list):
        entries = payload
    elif isinstance(payload, dict) and "entries" in payload:
        entries = payload["entries"]
    else:
        raise PreconditionError("matrix payload must be a nested list or {'entries': ...}")
    if not isinstance(entries, list) or any(not isinstance(r, list) for r in entries):
        raise PreconditionError("matrix entries must be a nested list")
    rows = []
    width = None
    for r in entries:
        if width is None:
            width = len(r)
        elif len(r) != width:
            raise PreconditionError("ragged matrix entries")
        row = []
        for x in r:
            if not isinstance(x, int):
                raise PreconditionError("matrix entries must be integers")
            row.append(ring.reduce_int(x))
        rows.append(row)
    if not rows:
        return Mat(ring, 0, 0, ())
    return Mat.from_rows(ring, rows)
