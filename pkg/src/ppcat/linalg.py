"""Exact linear algebra: matrices, canonical subspaces, quotient spaces.

Matrices are immutable, row-major, over one of the fields from `scalars`.
A Subspace stores the unique reduced row-echelon basis of its row space, so
two subspaces are equal iff their stored bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NotASubspace


@dataclass(frozen=True)
class Matrix:
    field: object
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                "entry count %d does not match %dx%d" % (len(self.entries), self.rows, self.cols)
            )

    @classmethod
    def from_rows(cls, field, rows):
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("ragged rows")
        return cls(field, len(rows), n, tuple(x for r in rows for x in r))

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, rows, cols, (field.zero(),) * (rows * cols))

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero(), field.one()
        return cls(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    def at(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def transpose(self):
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self):
        F = self.field
        return all(F.is_zero(x) for x in self.entries)

    def add(self, other):
        self._check_shape(other)
        F = self.field
        return Matrix(F, self.rows, self.cols,
                      tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def sub(self, other):
        self._check_shape(other)
        F = self.field
        return Matrix(F, self.rows, self.cols,
                      tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def neg(self):
        F = self.field
        return Matrix(F, self.rows, self.cols, tuple(F.neg(a) for a in self.entries))

    def scale(self, c):
        F = self.field
        return Matrix(F, self.rows, self.cols, tuple(F.mul(c, a) for a in self.entries))

    def mul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product %dx%d by %dx%d"
                                    % (self.rows, self.cols, other.rows, other.cols))
        F = self.field
        a, b = self.row_lists(), other.row_lists()
        out = []
        for i in range(self.rows):
            ai = a[i]
            row = [F.zero()] * other.cols
            for k in range(self.cols):
                c = ai[k]
                if F.is_zero(c):
                    continue
                bk = b[k]
                for j in range(other.cols):
                    row[j] = F.add(row[j], F.mul(c, bk[j]))
            out.extend(row)
        return Matrix(F, self.rows, other.cols, tuple(out))

    def apply(self, vec):
        """Matrix times column vector, given and returned as a flat tuple."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length %d, expected %d" % (len(vec), self.cols))
        F = self.field
        out = []
        for i in range(self.rows):
            s = F.zero()
            base = i * self.cols
            for j, v in enumerate(vec):
                if not F.is_zero(v):
                    s = F.add(s, F.mul(self.entries[base + j], v))
            out.append(s)
        return tuple(out)

    def trace(self):
        F = self.field
        s = F.zero()
        for i in range(min(self.rows, self.cols)):
            s = F.add(s, self.at(i, i))
        return s

    def _check_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape mismatch")

    def __str__(self):
        F = self.field
        return "[" + ", ".join(
            "[" + ", ".join(F.to_str(x) for x in self.row(i)) + "]" for i in range(self.rows)
        ) + "]"


def row_apply(vec, m: Matrix):
    """Row vector times matrix."""
    if len(vec) != m.rows:
        raise DimensionMismatch("row vector length %d, expected %d" % (len(vec), m.rows))
    F = m.field
    out = []
    for j in range(m.cols):
        s = F.zero()
        for i, v in enumerate(vec):
            if not F.is_zero(v):
                s = F.add(s, F.mul(v, m.at(i, j)))
        out.append(s)
    return tuple(out)


def vstack(mats):
    mats = list(mats)
    F = mats[0].field
    cols = mats[0].cols
    ents = []
    rows = 0
    for m in mats:
        if m.cols != cols:
            raise DimensionMismatch("vstack column mismatch")
        ents.extend(m.entries)
        rows += m.rows
    return Matrix(F, rows, cols, tuple(ents))


def hstack(mats):
    mats = list(mats)
    F = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise DimensionMismatch("hstack row mismatch")
    ents = []
    for i in range(rows):
        for m in mats:
            ents.extend(m.row(i))
    return Matrix(F, rows, sum(m.cols for m in mats), tuple(ents))


def rref_with_pivots(m: Matrix):
    """Reduced row echelon form and the list of pivot columns."""
    F = m.field
    a = m.row_lists()
    pivots = []
    r = 0
    for c in range(m.cols):
        pivot = None
        for i in range(r, m.rows):
            if not F.is_zero(a[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(m.rows):
            if i != r and not F.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Matrix.from_rows(F, a) if m.rows else m, pivots


def rref(m: Matrix) -> Matrix:
    return rref_with_pivots(m)[0]


def rank(m: Matrix) -> int:
    return len(rref_with_pivots(m)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n, stored as the canonical RREF basis of row vectors."""

    ambient_dim: int
    basis: Matrix  # rows form an RREF basis; rows == dim

    @classmethod
    def from_vectors(cls, field, ambient_dim, vectors):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length %d, ambient %d" % (len(v), ambient_dim))
        if not vectors:
            return cls(ambient_dim, Matrix(field, 0, ambient_dim, ()))
        m = Matrix.from_rows(field, vectors)
        red, pivots = rref_with_pivots(m)
        rows = [red.row(i) for i in range(len(pivots))]
        return cls(ambient_dim, Matrix.from_rows(field, rows) if rows
                   else Matrix(field, 0, ambient_dim, ()))

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(ambient_dim, Matrix(field, 0, ambient_dim, ()))

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def field(self):
        return self.basis.field

    @property
    def dim(self):
        return self.basis.rows

    @property
    def pivots(self):
        ps = []
        F = self.field
        for i in range(self.basis.rows):
            row = self.basis.row(i)
            for j, x in enumerate(row):
                if not F.is_zero(x):
                    ps.append(j)
                    break
        return ps

    def basis_rows(self):
        return [self.basis.row(i) for i in range(self.dim)]

    def reduce_vector(self, vec):
        """Subtract the projection onto this subspace along its pivot columns."""
        F = self.field
        v = list(vec)
        for i, p in enumerate(self.pivots):
            c = v[p]
            if F.is_zero(c):
                continue
            row = self.basis.row(i)
            v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains_vector(self, vec) -> bool:
        if len(vec) != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        F = self.field
        return all(F.is_zero(x) for x in self.reduce_vector(vec))

    def coordinates(self, vec):
        """Coordinates of vec over the RREF basis; raises if not a member."""
        if not self.contains_vector(vec):
            raise NotASubspace("vector not in subspace")
        return tuple(vec[p] for p in self.pivots)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.from_vectors(a.field, a.ambient_dim, a.basis_rows() + b.basis_rows())


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: rows [A|A] over [B|0]; rows with zero left half span the meet."""
    _check_ambient(a, b)
    F, n = a.field, a.ambient_dim
    rows = [tuple(r) + tuple(r) for r in a.basis_rows()]
    rows += [tuple(r) + (F.zero(),) * n for r in b.basis_rows()]
    if not rows:
        return Subspace.zero(F, n)
    red, pivots = rref_with_pivots(Matrix.from_rows(F, rows))
    out = []
    for i in range(len(pivots)):
        row = red.row(i)
        if all(F.is_zero(x) for x in row[:n]):
            out.append(row[n:])
    return Subspace.from_vectors(F, n, out)


def contains(a: Subspace, b: Subspace) -> bool:
    """Whether a contains b."""
    _check_ambient(a, b)
    return all(a.contains_vector(r) for r in b.basis_rows())


def project(s: Subspace, coords) -> Subspace:
    coords = list(coords)
    for c in coords:
        if not 0 <= c < s.ambient_dim:
            raise DimensionMismatch("coordinate %d out of range" % c)
    vecs = [tuple(r[c] for c in coords) for r in s.basis_rows()]
    return Subspace.from_vectors(s.field, len(coords), vecs)


def quotient_dim(a: Subspace, b: Subspace) -> int:
    _check_ambient(a, b)
    if not contains(a, b):
        raise NotASubspace("second subspace is not contained in the first")
    return a.dim - b.dim


def kernel(m: Matrix) -> Subspace:
    """Solution space of m v = 0, as a subspace of F^cols."""
    F = m.field
    red, pivots = rref_with_pivots(m)
    free = [c for c in range(m.cols) if c not in pivots]
    vecs = []
    for fcol in free:
        v = [F.zero()] * m.cols
        v[fcol] = F.one()
        for i, p in enumerate(pivots):
            v[p] = F.neg(red.at(i, fcol))
        vecs.append(tuple(v))
    return Subspace.from_vectors(F, m.cols, vecs)


def image(m: Matrix) -> Subspace:
    """Column space of m, as a subspace of F^rows."""
    return Subspace.from_vectors(m.field, m.rows, [m.col(j) for j in range(m.cols)])


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """The subspace {v : m v in s} of F^cols."""
    if m.rows != s.ambient_dim:
        raise DimensionMismatch("codomain mismatch")
    F = m.field
    # reduce m's columns modulo s: condition is reduce_vector(m v) == 0
    cond = []
    for j in range(m.cols):
        col = tuple(m.at(i, j) for i in range(m.rows))
        cond.append(s.reduce_vector(col))
    condm = Matrix.from_rows(F, cond).transpose() if cond else Matrix(F, m.rows, 0, ())
    return kernel(condm)


def solve(m: Matrix, target):
    """One solution x of m x = target, or None."""
    F = m.field
    aug = hstack([m, Matrix(F, m.rows, 1, tuple(target))])
    red, pivots = rref_with_pivots(aug)
    if m.cols in pivots:
        return None
    x = [F.zero()] * m.cols
    for i, p in enumerate(pivots):
        x[p] = red.at(i, m.cols)
    return tuple(x)


class QuotientSpace:
    """Quotient of a subspace by a subspace, with a canonical coset basis.

    The basis consists of the RREF rows of the big space whose pivot is not a
    pivot of the small space; coordinates of a coset are read off those pivot
    columns after reduction modulo the small space.
    """

    def __init__(self, big: Subspace, small: Subspace):
        if big.ambient_dim != small.ambient_dim:
            raise DimensionMismatch("ambient mismatch")
        if not contains(big, small):
            raise NotASubspace("quotient by a non-subspace")
        self.big = big
        self.small = small
        small_pivots = set(small.pivots)
        self._coords = [p for p in big.pivots if p not in small_pivots]
        self._lift_rows = [big.basis.row(i) for i, p in enumerate(big.pivots)
                           if p not in small_pivots]
        self.dim = len(self._coords)

    def project_vector(self, vec):
        """Coordinates of vec + small over the canonical coset basis."""
        reduced = self.small.reduce_vector(vec)
        return tuple(reduced[p] for p in self._coords)

    def lift(self, i):
        return self._lift_rows[i]

    def lift_matrix(self):
        """Columns are the canonical coset representatives."""
        F = self.big.field
        if self.dim == 0:
            return Matrix(F, self.big.ambient_dim, 0, ())
        return Matrix.from_rows(F, self._lift_rows).transpose()

    def projection_matrix(self):
        """Maps ambient coordinates to quotient coordinates."""
        F = self.big.field
        n = self.big.ambient_dim
        rows = []
        for j in range(n):
            e = [F.zero()] * n
            e[j] = F.one()
            rows.append(self.project_vector(tuple(e)))
        return Matrix.from_rows(F, rows).transpose() if n else Matrix(F, self.dim, 0, ())


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dimensions %d and %d" % (a.ambient_dim, b.ambient_dim))
