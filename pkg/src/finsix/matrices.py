"""Dense exact matrices over Q or F_p, with rank / null space / solve.

Matrices are immutable (tuple-of-tuples, row major). Dimensions at desk scale
(a few hundred) make dense Gaussian elimination entirely adequate; all pivot
choices are deterministic so every downstream computation is reproducible.
"""

from __future__ import annotations

from .fields import FieldSpec


class ShapeMismatch(ValueError):
    pass


class Matrix:
    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows, cols, entries):
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ShapeMismatch("entries do not match %dx%d" % (rows, cols))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in entries))

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # construction

    @staticmethod
    def zero(field, rows, cols):
        z = field.zero()
        return Matrix(field, rows, cols, [[z] * cols for _ in range(rows)])

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        return Matrix(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_rows(field, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return Matrix(field, len(rows), ncols, rows)

    @staticmethod
    def from_int_rows(field, rows):
        return Matrix.from_rows(field, [[field.of_int(x) for x in r] for r in rows])

    @staticmethod
    def column(field, values):
        return Matrix(field, len(values), 1, [[v] for v in values])

    # basic algebra

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        return "Matrix(%s, %dx%d, %s)" % (self.field, self.rows, self.cols, list(map(list, self.entries)))

    def __add__(self, other):
        self._same_shape(other)
        add = self.field.add
        return Matrix(
            self.field, self.rows, self.cols,
            [[add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        self._same_shape(other)
        sub = self.field.sub
        return Matrix(
            self.field, self.rows, self.cols,
            [[sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, [[neg(a) for a in r] for r in self.entries])

    def scale(self, c):
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, [[mul(c, a) for a in r] for r in self.entries])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch("cannot multiply %dx%d by %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        add, mul, z = f.add, f.mul, f.zero()
        ot = other.entries
        out = []
        for ra in self.entries:
            row = [z] * other.cols
            for k, a in enumerate(ra):
                if a == 0:
                    continue
                rk = ot[k]
                row = [add(row[j], mul(a, rk[j])) for j in range(other.cols)]
            out.append(row)
        return Matrix(f, self.rows, other.cols, out)

    def transpose(self):
        return Matrix(self.field, self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_zero(self):
        return all(a == 0 for r in self.entries for a in r)

    def _same_shape(self, other):
        if self.field != other.field or self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("shape/field mismatch")

    # assembly

    def hstack(self, other):
        if self.rows != other.rows or self.field != other.field:
            raise ShapeMismatch("hstack mismatch")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      [list(a) + list(b) for a, b in zip(self.entries, other.entries)])

    def vstack(self, other):
        if self.cols != other.cols or self.field != other.field:
            raise ShapeMismatch("vstack mismatch")
        return Matrix(self.field, self.rows + other.rows, self.cols,
                      list(self.entries) + list(other.entries))

    @staticmethod
    def block(field, grid):
        """Assemble a block matrix from a 2d grid of matrices (None = zero, sized by neighbors)."""
        nbr = len(grid)
        nbc = len(grid[0]) if nbr else 0
        row_h = [None] * nbr
        col_w = [None] * nbc
        for i in range(nbr):
            for j in range(nbc):
                m = grid[i][j]
                if m is None:
                    continue
                if row_h[i] is None:
                    row_h[i] = m.rows
                elif row_h[i] != m.rows:
                    raise ShapeMismatch("block row %d height mismatch" % i)
                if col_w[j] is None:
                    col_w[j] = m.cols
                elif col_w[j] != m.cols:
                    raise ShapeMismatch("block col %d width mismatch" % j)
        if any(h is None for h in row_h) or any(w is None for w in col_w):
            raise ShapeMismatch("block grid has an undetermined row/column")
        z = field.zero()
        out = []
        for i in range(nbr):
            block_rows = [[] for _ in range(row_h[i])]
            for j in range(nbc):
                m = grid[i][j]
                for r in range(row_h[i]):
                    if m is None:
                        block_rows[r].extend([z] * col_w[j])
                    else:
                        block_rows[r].extend(m.entries[r])
            out.extend(block_rows)
        return Matrix(field, sum(row_h), sum(col_w), out)

    def kron(self, other):
        """Kronecker product, row-major convention: (A kron B)[(i,k),(j,l)] = A[i,j]*B[k,l]."""
        f = self.field
        mul = f.mul
        out = []
        for ra in self.entries:
            for rb in other.entries:
                out.append([mul(a, b) for a in ra for b in rb])
        return Matrix(f, self.rows * other.rows, self.cols * other.cols, out)

    def submatrix(self, row_idx, col_idx):
        return Matrix(self.field, len(row_idx), len(col_idx),
                      [[self.entries[i][j] for j in col_idx] for i in row_idx])

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def vec(self):
        """Row-major flattening to a single column."""
        vals = [a for r in self.entries for a in r]
        return Matrix(self.field, len(vals), 1, [[v] for v in vals])

    @staticmethod
    def unvec(field, rows, cols, column):
        vals = [column.entries[i][0] for i in range(column.rows)]
        if len(vals) != rows * cols:
            raise ShapeMismatch("unvec size mismatch")
        return Matrix(field, rows, cols, [vals[i * cols:(i + 1) * cols] for i in range(rows)])

    # elimination

    def _rref(self):
        """Reduced row echelon form; returns (rref rows as lists, pivot column list)."""
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        m = [list(r) for r in self.entries]
        nrows, ncols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(ncols):
            pr = None
            for i in range(r, nrows):
                if m[i][c] != 0:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            piv = inv(m[r][c])
            m[r] = [mul(piv, x) for x in m[r]]
            for i in range(nrows):
                if i != r and m[i][c] != 0:
                    factor = m[i][c]
                    m[i] = [sub(x, mul(factor, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return m, pivots

    def rank(self):
        return len(self._rref()[1])

    def kernel_basis(self):
        """Matrix whose columns form a basis of the null space (cols - rank of them)."""
        f = self.field
        red, pivots = self._rref()
        free = [c for c in range(self.cols) if c not in pivots]
        cols = []
        neg = f.neg
        for fc in free:
            v = [f.zero()] * self.cols
            v[fc] = f.one()
            for r, pc in enumerate(pivots):
                v[pc] = neg(red[r][fc])
            cols.append(v)
        return Matrix(f, self.cols, len(cols),
                      [[cols[j][i] for j in range(len(cols))] for i in range(self.cols)])

    def solve(self, b):
        """A particular solution x of self @ x = b, or None when inconsistent.

        b may have several columns; the result then solves all right-hand sides.
        """
        if b.rows != self.rows:
            raise ShapeMismatch("solve: rhs has %d rows, expected %d" % (b.rows, self.rows))
        f = self.field
        aug = self.hstack(b)
        red, pivots = aug._rref()
        n = self.cols
        # a pivot in the rhs block means an inconsistent system
        for pc in pivots:
            if pc >= n:
                return None
        z = f.zero()
        out = [[z] * b.cols for _ in range(n)]
        for r, pc in enumerate(pivots):
            for j in range(b.cols):
                out[pc][j] = red[r][n + j]
        return Matrix(f, n, b.cols, out)

    def inverse(self):
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of non-square matrix")
        sol = self.solve(Matrix.identity(self.field, self.rows))
        if sol is None or (self @ sol) != Matrix.identity(self.field, self.rows):
            raise ValueError("matrix is singular")
        return sol

    def is_invertible(self):
        return self.rows == self.cols and self.rank() == self.rows


def rank_by_span_enumeration(m):
    """Brute-force rank over F_p: log_p of the row-span cardinality.

    Independent oracle for the elimination-based rank; only usable for small
    matrices over small prime fields.
    """
    f = m.field
    if f.p == 0:
        raise ValueError("enumeration oracle needs a finite field")
    span = {tuple([f.zero()] * m.cols)}
    for row in m.entries:
        new = set(span)
        for v in span:
            acc = list(v)
            for _ in range(f.p - 1):
                acc = [f.add(a, b) for a, b in zip(acc, row)]
                new.add(tuple(acc))
        span = new
    size = len(span)
    r = 0
    while f.p ** r < size:
        r += 1
    return r
