"""Exact rational matrices and fraction-free linear algebra.

Scalars are :class:`fractions.Fraction`. Matrices are small and dense, so
they are stored as tuples of row tuples and never mutated after creation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple of Fraction


class ExactError(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational (floats are rejected)")


def rational_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vec(*xs) -> Vector:
    if len(xs) == 1 and not isinstance(xs[0], (int, str, Fraction)):
        xs = tuple(xs[0])
    return tuple(as_rational(x) for x in xs)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_rational(x) for x in r) for r in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ExactError("ragged matrix rows")
        else:
            width = cols or 0
        self.rows = len(rows)
        self.cols = width
        self._data = rows

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        z = Fraction(0)
        return cls([[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(list(zip(*columns)))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix([[self._data[i][j] for j in cols] for i in rows], cols=len(cols))

    # arithmetic ---------------------------------------------------------
    @property
    def T(self) -> Matrix:
        return Matrix(list(zip(*self._data)) if self.rows else [], cols=self.rows)

    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise ExactError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols)

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self._data], cols=self.cols)

    def scale(self, c) -> Matrix:
        c = as_rational(c)
        return Matrix([[c * a for a in r] for r in self._data], cols=self.cols)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ExactError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return Matrix([[dot(r, c) for c in ocols] for r in self._data], cols=other.cols)
        v = tuple(other)
        if len(v) != self.cols:
            raise ExactError("vector length mismatch")
        return tuple(dot(r, v) for r in self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rational_str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    # predicates ---------------------------------------------------------
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_skew(self) -> bool:
        return self.is_square() and self == -self.T

    # serialization ------------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[rational_str(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, data) -> Matrix:
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ExactError("matrix must be a JSON array of arrays")
        return cls(data)


def _integer_rows(m: Matrix) -> list[list[int]]:
    # Row scaling by a nonzero constant does not change rank or kernel.
    out = []
    for r in m._data:
        den = math.lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


CHECK_PRIMES = (2**61 - 1, 2**31 - 1)


def rank_mod_p(m: Matrix, p: int) -> int:
    """Rank of the integer-scaled rows over F_p; never exceeds the rank over Q."""
    a = [[x % p for x in r] for r in _integer_rows(m)]
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        row_r = [x * inv % p for x in a[r]]
        a[r] = row_r
        for i in range(r + 1, m.rows):
            f = a[i][c]
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], row_r)]
        r += 1
        if r == m.rows:
            break
    return r


def has_full_column_rank(m: Matrix) -> bool:
    """Exact; a full rank modulo a prime settles it without big-integer work."""
    if any(rank_mod_p(m, p) == m.cols for p in CHECK_PRIMES):
        return True
    return rank(m) == m.cols


def rank(m: Matrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination on integer rows."""
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def det(m: Matrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    if not m.is_square():
        raise ExactError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    den = 1
    a = []
    for r in m._data:
        d = math.lcm(*(x.denominator for x in r))
        den *= d
        a.append([int(x * d) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (p * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = p
    return Fraction(sign * a[n - 1][n - 1], den)


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    a = [list(r) for r in m._data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right kernel {v : m v = 0}, one vector per free column."""
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def integer_kernel(m: Matrix) -> list[list[int]]:
    """LLL-reduced basis of the lattice {v in Z^cols : m v = 0}.

    Weighted embedding: LLL on rows (w * column_j(m), e_j) sends lattice
    vectors with a nonzero image to the end once w is large; the weight is
    raised until the reduced basis exhibits the full nullity.
    """
    # imported here: sympy is slow to import and only this routine needs it
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    rows = _integer_rows(m)
    nullity = m.cols - rank(m)
    if nullity == 0:
        return []
    if nullity == 1:
        v = kernel_basis(m)[0]
        den = math.lcm(*(x.denominator for x in v))
        ints = [int(x * den) for x in v]
        g = math.gcd(*ints)
        return [[x // g for x in ints]]
    w = 2**16
    while True:
        basis = [[w * r[j] for r in rows] + [int(k == j) for k in range(m.cols)] for j in range(m.cols)]
        dm = DomainMatrix([[ZZ(x) for x in b] for b in basis], (m.cols, m.rows + m.cols), ZZ)
        red = dm.lll().to_Matrix().tolist()
        out = [[int(x) for x in r[m.rows:]] for r in red if not any(r[:m.rows])]
        if len(out) == nullity:
            return out
        w *= 2**16


def left_kernel_basis(m: Matrix) -> list[Vector]:
    return kernel_basis(m.T)


def column_space_basis(m: Matrix) -> list[Vector]:
    """Independent columns of ``m`` spanning its image."""
    _, pivots = rref(m)
    return [m.col(j) for j in pivots]


def span_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return rank(Matrix(vectors))


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    return span_rank(list(vectors) + [v]) == span_rank(vectors)


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One exact solution of m x = b, or None when inconsistent."""
    aug = Matrix([list(r) + [bi] for r, bi in zip(m._data, b)], cols=m.cols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[-1]
    return tuple(x)


def coordinates(basis: Sequence[Sequence], v: Sequence) -> Vector:
    """Coordinates of ``v`` in the given (independent) basis vectors."""
    x = solve(Matrix.from_columns(basis, rows=len(v)), v)
    if x is None:
        raise ExactError("vector is not in the span of the basis")
    return x


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ExactError("inverse of a non-square matrix")
    n = m.rows
    aug = Matrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m._data)])
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ExactError("matrix is singular")
    return Matrix([r[n:] for r in rows])


def kronecker(g: Matrix, a: Matrix) -> Matrix:
    """Kronecker product; block (i, j) of the result is ``g[i, j] * a``."""
    out = []
    for gi in g._data:
        for ar in a._data:
            out.append([gij * x for gij in gi for x in ar])
    return Matrix(out, cols=g.cols * a.cols)


def block_sum(mats: Sequence[Matrix]) -> Matrix:
    acc = mats[0]
    for m in mats[1:]:
        acc = acc + m
    return acc


def hstack(mats: Sequence[Matrix]) -> Matrix:
    return Matrix([sum((list(m.row(i)) for m in mats), []) for i in range(mats[0].rows)])


def vstack(mats: Sequence[Matrix]) -> Matrix:
    return Matrix([r for m in mats for r in m._data], cols=mats[0].cols)


def complete_basis(sub: Sequence[Sequence], ambient: Sequence[Sequence]) -> list[Vector]:
    """Vectors from ``ambient`` extending independent ``sub`` to a basis of span(sub + ambient)."""
    chosen = [tuple(v) for v in sub]
    r = span_rank(chosen)
    extra = []
    for v in ambient:
        if span_rank(chosen + [tuple(v)]) > r:
            chosen.append(tuple(v))
            extra.append(tuple(v))
            r += 1
    return extra


def cross(a: Sequence, b: Sequence) -> Vector:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def random_int_matrix(rng, rows: int, cols: int, bound: int) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_symmetric(rng, n: int, bound: int) -> Matrix:
    vals = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            vals[i][j] = vals[j][i] = rng.randint(-bound, bound)
    return Matrix(vals)


def random_skew(rng, n: int, bound: int) -> Matrix:
    vals = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rng.randint(-bound, bound)
            vals[i][j], vals[j][i] = x, -x
    return Matrix(vals)


def random_invertible(rng, n: int, bound: int = 2) -> Matrix:
    while True:
        m = random_int_matrix(rng, n, n, bound)
        if det(m) != 0:
            return m
