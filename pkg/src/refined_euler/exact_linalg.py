"""
Exact integer and rational matrix arithmetic.

Matrices are immutable row-major tuples of Python integers or
``fractions.Fraction`` values. The module provides Smith and Hermite normal
forms with unimodular transforms, integral solving, integral kernels and the
rational Gaussian elimination used by the lattice code.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

import structlog

from refined_euler.errors import ContractViolation, DimensionMismatchError, PreconditionError
from refined_euler.utils.config import check_bits

logger = structlog.get_logger()

Number = Union[int, Fraction]
Vector = Tuple[Number, ...]


def as_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """Parse an integer, Fraction or ``"num/den"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot interpret {value!r} as a rational")


class _Matrix:
    """Shared shape handling for IntMatrix and RatMatrix."""

    rows: int
    cols: int
    entries: tuple

    def _check_shape(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError("negative matrix dimension", rows=self.rows, cols=self.cols)
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                "entry count does not match shape",
                rows=self.rows,
                cols=self.cols,
                entries=len(self.entries),
            )

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, index: Tuple[int, int]) -> Number:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class IntMatrix(_Matrix):
    """Matrix of arbitrary-precision integers."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        self._check_shape()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls.from_rows(list(columns), cols=rows).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        r = len(values) if rows is None else rows
        c = len(values) if cols is None else cols
        return cls(r, c, tuple(values[i] if i == j and i < len(values) else 0 for i in range(r) for j in range(c)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, self.entries)

    def __matmul__(self, other: Union["IntMatrix", "RatMatrix"]):
        if isinstance(other, RatMatrix):
            return self.to_rat() @ other
        return IntMatrix(*_matmul(self, other))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        _same_shape(self, other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        _same_shape(self, other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        if len(vector) != self.cols:
            raise DimensionMismatchError("vector length does not match columns", cols=self.cols, length=len(vector))
        return tuple(sum(self[i, j] * vector[j] for j in range(self.cols)) for i in range(self.rows))

    def submatrix(self, row_index: Sequence[int], col_index: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(row_index), len(col_index), tuple(self[i, j] for i in row_index for j in col_index))

    def det(self) -> int:
        """Fraction-free Bareiss determinant."""
        if not self.is_square():
            raise DimensionMismatchError("determinant of a non-square matrix", rows=self.rows, cols=self.cols)
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return check_bits(sign * a[n - 1][n - 1])

    def rank(self) -> int:
        return self.to_rat().rank()

    def max_bits(self) -> int:
        return max((abs(x).bit_length() for x in self.entries), default=0)


@dataclass(frozen=True)
class RatMatrix(_Matrix):
    """Matrix of exact rationals."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(as_fraction(x) for x in self.entries))
        self._check_shape()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Union[int, str, Fraction]]], cols: Optional[int] = None) -> "RatMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], rows: int) -> "RatMatrix":
        return cls.from_rows(list(columns), cols=rows).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Number]) -> "RatMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def hstack(*blocks: "RatMatrix", rows: Optional[int] = None) -> "RatMatrix":
        height = blocks[0].rows if blocks else (rows or 0)
        if any(b.rows != height for b in blocks):
            raise DimensionMismatchError("hstack of blocks with different heights")
        width = sum(b.cols for b in blocks)
        return RatMatrix(height, width, tuple(x for i in range(height) for b in blocks for x in b.row(i)))

    @staticmethod
    def vstack(*blocks: "RatMatrix", cols: Optional[int] = None) -> "RatMatrix":
        width = blocks[0].cols if blocks else (cols or 0)
        if any(b.cols != width for b in blocks):
            raise DimensionMismatchError("vstack of blocks with different widths")
        return RatMatrix(sum(b.rows for b in blocks), width, tuple(x for b in blocks for x in b.entries))

    @staticmethod
    def block_diag(*blocks: "RatMatrix") -> "RatMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return RatMatrix.from_rows(out, cols=cols)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def to_rat(self) -> "RatMatrix":
        return self

    def __matmul__(self, other: Union["IntMatrix", "RatMatrix"]) -> "RatMatrix":
        return RatMatrix(*_matmul(self, other))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: Number) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def apply(self, vector: Sequence[Number]) -> Tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise DimensionMismatchError("vector length does not match columns", cols=self.cols, length=len(vector))
        return tuple(sum((self[i, j] * vector[j] for j in range(self.cols)), Fraction(0)) for i in range(self.rows))

    def submatrix(self, row_index: Sequence[int], col_index: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(row_index), len(col_index), tuple(self[i, j] for i in row_index for j in col_index))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise PreconditionError("matrix has non-integral entries")
        return IntMatrix(self.rows, self.cols, tuple(x.numerator for x in self.entries))

    def denominator(self) -> int:
        """Least common multiple of all entry denominators."""
        return lcm(1, *(x.denominator for x in self.entries))

    def rref(self) -> Tuple["RatMatrix", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns."""
        a = self.to_rows()
        pivots: List[int] = []
        r = 0
        for j in range(self.cols):
            if r == self.rows:
                break
            p = next((i for i in range(r, self.rows) if a[i][j] != 0), None)
            if p is None:
                continue
            a[r], a[p] = a[p], a[r]
            inv = 1 / a[r][j]
            a[r] = [x * inv for x in a[r]]
            for i in range(self.rows):
                if i != r and a[i][j] != 0:
                    f = a[i][j]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(j)
            r += 1
        return RatMatrix.from_rows(a, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "RatMatrix":
        """Columns form a basis of the right null space."""
        reduced, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -reduced[r, f]
            basis.append(v)
        return RatMatrix.from_columns(basis, self.cols)

    def left_nullspace(self) -> "RatMatrix":
        """Rows P with P @ self == 0 spanning the left null space."""
        return self.transpose().nullspace().transpose()

    def solve(self, b: Sequence[Number]) -> Optional[Tuple[Fraction, ...]]:
        """Particular solution of self @ x = b with free variables zero."""
        if len(b) != self.rows:
            raise DimensionMismatchError("right-hand side length mismatch", rows=self.rows, length=len(b))
        augmented = RatMatrix.hstack(self, RatMatrix(self.rows, 1, tuple(b)), rows=self.rows)
        reduced, pivots = augmented.rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for r, p in enumerate(pivots):
            x[p] = reduced[r, self.cols]
        return tuple(x)

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise DimensionMismatchError("inverse of a non-square matrix", rows=self.rows, cols=self.cols)
        n = self.rows
        reduced, pivots = RatMatrix.hstack(self, RatMatrix.identity(n), rows=n).rref()
        if n and pivots[:n] != tuple(range(n)):
            raise PreconditionError("matrix is singular")
        return reduced.submatrix(range(n), range(n, 2 * n))

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionMismatchError("determinant of a non-square matrix", rows=self.rows, cols=self.cols)
        a = self.to_rows()
        n = self.rows
        result = Fraction(1)
        for k in range(n):
            p = next((i for i in range(k, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            if p != k:
                a[k], a[p] = a[p], a[k]
                result = -result
            result *= a[k][k]
            for i in range(k + 1, n):
                f = a[i][k] / a[k][k]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return result


Matrix = Union[IntMatrix, RatMatrix]


def _same_shape(a: _Matrix, b: _Matrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError("shape mismatch", left=a.shape, right=b.shape)


def _matmul(a: _Matrix, b: _Matrix) -> Tuple[int, int, tuple]:
    if a.cols != b.rows:
        raise DimensionMismatchError("inner dimensions differ", left=a.shape, right=b.shape)
    zero = 0 if isinstance(a, IntMatrix) and isinstance(b, IntMatrix) else Fraction(0)
    entries = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            entries.append(sum((arow[k] * b[k, j] for k in range(a.cols) if arow[k]), zero))
    return a.rows, b.cols, tuple(entries)


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ A @ V == D with U, V unimodular and D in Smith normal form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class HnfDecomposition:
    """U @ A == H with U unimodular and H in row Hermite normal form."""

    U: IntMatrix
    H: IntMatrix
    pivots: Tuple[int, ...]


def _guard(*tables: List[List[int]]) -> None:
    for table in tables:
        for row in table:
            for x in row:
                check_bits(x)


def snf(A: IntMatrix) -> SnfDecomposition:
    """
    Smith normal form with unimodular transforms.

    Uses minimum-absolute-value pivoting. Divisibility of later diagonal
    entries is enforced by adding an offending row into the pivot row and
    repeating the elimination.

    Args:
        A: Integer matrix of any shape, including empty ones

    Returns:
        SnfDecomposition with U @ A @ V == D
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def swap_rows(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(target: int, source: int, q: int) -> None:
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        u[target] = [x + q * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, q: int) -> None:
        for row in a:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]

    for t in range(min(m, n)):
        candidates = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j] != 0]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # clear column t and row t, re-pivoting on smaller remainders
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                done = False
                _, pi, pj = min(rest)
                if pj == t:
                    swap_rows(t, pi)
                else:
                    swap_cols(t, pj)
            else:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is not None:
                    add_row(t, bad, 1)
                    done = False
            if done:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        _guard([a[t]])
    _guard(u, v)
    result = SnfDecomposition(
        U=IntMatrix.from_rows(u, cols=m),
        D=IntMatrix.from_rows(a, cols=n),
        V=IntMatrix.from_rows(v, cols=n),
    )
    logger.debug("snf computed", rows=m, cols=n, rank=result.rank)
    return result


def hnf(A: IntMatrix) -> HnfDecomposition:
    """
    Row Hermite normal form: U @ A == H, H in echelon form with positive
    pivots and entries above each pivot reduced into [0, pivot).
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    u = IntMatrix.identity(m).to_rows()
    pivots: List[int] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nonzero = [(abs(a[i][j]), i) for i in range(r, m) if a[i][j]]
            if not nonzero:
                break
            _, p = min(nonzero)
            a[r], a[p] = a[p], a[r]
            u[r], u[p] = u[p], u[r]
            others = [i for i in range(r + 1, m) if a[i][j]]
            if not others:
                break
            for i in others:
                q = a[i][j] // a[r][j]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        pivots.append(j)
        r += 1
    _guard(a, u)
    return HnfDecomposition(
        U=IntMatrix.from_rows(u, cols=m),
        H=IntMatrix.from_rows(a, cols=n),
        pivots=tuple(pivots),
    )


def solve_integral(A: IntMatrix, b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """
    Solve A @ x == b over the integers.

    Args:
        A: Integer coefficient matrix
        b: Integer right-hand side of length A.rows

    Returns:
        One integral solution, or None when none exists

    Raises:
        DimensionMismatchError: If b has the wrong length
    """
    if len(b) != A.rows:
        raise DimensionMismatchError("right-hand side length mismatch", rows=A.rows, length=len(b))
    dec = snf(A)
    c = dec.U.apply([int(x) for x in b])
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = dec.D[i, i] if i < min(A.rows, A.cols) else 0
        if d == 0:
            if ci != 0:
                return None
            continue
        if ci % d:
            return None
        y[i] = ci // d
    return dec.V.apply(y)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the saturated integral kernel of A."""
    dec = snf(A)
    cols = list(range(dec.rank, A.cols))
    return dec.V.submatrix(range(A.cols), cols)


def row_denominators_cleared(A: RatMatrix) -> IntMatrix:
    """Scale every row by the lcm of its denominators."""
    rows = []
    for i in range(A.rows):
        row = A.row(i)
        k = lcm(1, *(x.denominator for x in row))
        rows.append([int(x * k) for x in row])
    return IntMatrix.from_rows(rows, cols=A.cols)


def integral_kernel(A: RatMatrix) -> IntMatrix:
    """Basis of {x in Z^n : A @ x == 0}."""
    return kernel_basis(row_denominators_cleared(A))


def solve_mixed(
    A_int: RatMatrix, A_rat: RatMatrix, b: Sequence[Number]
) -> Optional[Tuple[Tuple[int, ...], Tuple[Fraction, ...]]]:
    """
    Find x integral and y rational with A_int @ x + A_rat @ y == b.

    The rational unknowns are eliminated with the left null space of A_rat;
    the remaining system is cleared of denominators and solved over Z.

    Returns:
        (x, y) or None if no such pair exists
    """
    if A_int.rows != A_rat.rows or len(b) != A_int.rows:
        raise DimensionMismatchError("mixed system shapes differ", int_rows=A_int.rows, rat_rows=A_rat.rows, length=len(b))
    bq = tuple(as_fraction(x) for x in b)
    P = A_rat.left_nullspace() if A_rat.cols else RatMatrix.identity(A_rat.rows)
    system = RatMatrix.hstack(P @ A_int, RatMatrix(P.rows, 1, P.apply(bq)), rows=P.rows)
    cleared = row_denominators_cleared(system)
    lhs = cleared.submatrix(range(cleared.rows), range(A_int.cols))
    rhs = cleared.column(A_int.cols)
    x = solve_integral(lhs, rhs)
    if x is None:
        return None
    residual = tuple(bi - ai for bi, ai in zip(bq, A_int.apply(x)))
    if A_rat.cols == 0:
        if any(residual):
            raise ContractViolation("mixed solve left a nonzero residual")
        return x, ()
    y = A_rat.solve(residual)
    if y is None:
        raise ContractViolation("rational back-substitution failed after elimination")
    return x, y


def determinantal_divisor(A: IntMatrix, k: int) -> int:
    """Gcd of all k x k minors of A (brute force, test oracle)."""
    if k == 0:
        return 1
    g = 0
    for rs in combinations(range(A.rows), k):
        for cs in combinations(range(A.cols), k):
            g = gcd(g, A.submatrix(rs, cs).det())
    return g


def elementary_divisors_oracle(A: IntMatrix) -> Tuple[int, ...]:
    """Invariant factors via ratios of determinantal divisors."""
    out = []
    previous = 1
    for k in range(1, min(A.rows, A.cols) + 1):
        current = determinantal_divisor(A, k)
        if current == 0:
            break
        out.append(current // previous)
        previous = current
    return tuple(out)


def unit_vector(k: int, n: int) -> List[Fraction]:
    return [Fraction(1) if t == k else Fraction(0) for t in range(n)]
