"""Exact integer linear algebra: Smith normal form, kernels, cokernels.

All matrices are dense, row-major ``list[list[int]]`` with arbitrary-precision
Python integers; SNF pivots overflow fixed-width integers even on small
inputs, so nothing here ever touches floating point or numpy integer dtypes.

The pivoting strategy is smallest-nonzero-magnitude, which keeps coefficient
growth modest at the scales we care about (boundary matrices of a few hundred
cells, abelianization matrices of a dozen generators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


IntMatrix = "list[list[int]]"


def shape(M: list[list[int]]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy(M: list[list[int]]) -> list[list[int]]:
    return [row[:] for row in M]


def transpose(M: list[list[int]]) -> list[list[int]]:
    rows, cols = shape(M)
    return [[M[i][j] for i in range(rows)] for j in range(cols)]


def matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise ValueError(f"shape mismatch {ra}x{ca} @ {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        Ai = A[i]
        for k in range(ca):
            a = Ai[k]
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(cb):
                    row[j] += a * Bk[j]
    return out


def matvec(M: list[list[int]], v: list[int]) -> list[int]:
    rows, cols = shape(M)
    if len(v) != cols:
        raise ValueError("shape mismatch")
    return [sum(M[i][j] * v[j] for j in range(cols)) for i in range(rows)]


def int_det(M: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, m = shape(M)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def int_inverse(M: list[list[int]]) -> list[list[int]]:
    """Inverse of an integer matrix with determinant +-1.

    Unimodularity is exactly invertibility over the integers, which is what
    point-group actions on the lattice must satisfy.
    """
    n, m = shape(M)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    d = int_det(M)
    if d not in (1, -1):
        raise ValueError(f"matrix is not invertible over the integers (det={d})")
    # Gauss-Jordan over the rationals; entries of the result are integers.
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    inv = [[A[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, dst, src, mult):
    # row[dst] += mult * row[src]
    M[dst] = [a + mult * b for a, b in zip(M[dst], M[src])]


def _add_col(M, dst, src, mult):
    for row in M:
        row[dst] += mult * row[src]


def smith_normal_form(M: list[list[int]]):
    """Return unimodular U, V and diagonal D with U @ M @ V == D.

    The nonzero diagonal entries of D are positive and each divides the next.
    Total function: any shape including empty and all-zero matrices.
    """
    rows, cols = shape(M)
    A = copy(M)
    U = identity(rows)
    V = identity(cols)
    t = 0
    while t < min(rows, cols):
        # smallest-magnitude nonzero pivot in the trailing block
        # (early exit on +-1: boundary matrices are full of them)
        pivot = None
        best = None
        for i in range(t, rows):
            row = A[i]
            for j in range(t, cols):
                a = row[j]
                if a != 0 and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            _swap_rows(A, t, i)
            _swap_rows(U, t, i)
        if j != t:
            _swap_cols(A, t, j)
            _swap_cols(V, t, j)

        dirty = False
        for i in range(t + 1, rows):
            if A[i][t] != 0:
                q = A[i][t] // A[t][t]
                if q:
                    _add_row(A, i, t, -q)
                    _add_row(U, i, t, -q)
                if A[i][t] != 0:
                    dirty = True  # remainder strictly smaller than pivot
        if dirty:
            continue
        for j in range(t + 1, cols):
            if A[t][j] != 0:
                q = A[t][j] // A[t][t]
                if q:
                    _add_col(A, j, t, -q)
                    _add_col(V, j, t, -q)
                if A[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry for the divisibility chain
        offender = None
        p = A[t][t]
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if A[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(A, t, offender, 1)
            _add_row(U, t, offender, 1)
            continue
        t += 1

    for i in range(min(rows, cols)):
        if A[i][i] < 0:
            for k in range(cols):
                A[i][k] = -A[i][k]
            # negating a row of D is a row operation: negate the row of U
            for k in range(rows):
                U[i][k] = -U[i][k]
    return U, A, V


def diagonal_of(D: list[list[int]]) -> list[int]:
    rows, cols = shape(D)
    return [D[i][i] for i in range(min(rows, cols))]


def invariant_factors(M: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, D, _ = smith_normal_form(M)
    return [d for d in diagonal_of(D) if d != 0]


def rank(M: list[list[int]]) -> int:
    return len(invariant_factors(M))


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated abelian group: Z^free_rank + sum of Z/d cyclic parts.

    torsion entries are >= 2 and each divides the next.
    """

    free_rank: int
    torsion: tuple = field(default_factory=tuple)

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        object.__setattr__(self, "torsion", tors)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in tors:
            if t < 2:
                raise ValueError(f"torsion entry {t} < 2")
        for a, b in zip(tors, tors[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @property
    def order(self):
        """Group order: product of torsion orders, or None if infinite."""
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        tors = list(self.torsion)
        while i < len(tors):
            j = i
            while j < len(tors) and tors[j] == tors[i]:
                j += 1
            if j - i == 1:
                parts.append(f"Z/{tors[i]}")
            else:
                parts.append(f"(Z/{tors[i]})^{j - i}")
            i = j
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def cokernel_invariants(M: list[list[int]], ambient_rank: int) -> AbelianInvariants:
    """Invariants of Z^ambient_rank modulo the column span of M.

    Diagonal 1s of the Smith form are dropped, entries > 1 become torsion, and
    rows not hit by any invariant factor contribute free rank.
    """
    rows, cols = (shape(M) if M else (ambient_rank, 0))
    if M and rows != ambient_rank:
        raise ValueError(f"matrix has {rows} rows, ambient rank is {ambient_rank}")
    if cols == 0:
        return AbelianInvariants(ambient_rank, ())
    invs = invariant_factors(M)
    torsion = tuple(d for d in invs if d > 1)
    return AbelianInvariants(ambient_rank - len(invs), torsion)


def integer_kernel(M: list[list[int]]) -> list[list[int]]:
    """Lattice basis of {x : M @ x = 0}, returned as a list of column vectors.

    With U M V = D of rank r, the kernel lattice is spanned by the last
    cols - r columns of V.
    """
    rows, cols = shape(M)
    _, D, V = smith_normal_form(M)
    r = len([d for d in diagonal_of(D) if d != 0])
    return [[V[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_int(M: list[list[int]], b: list[int]) -> list[int]:
    """One exact integer solution x of M @ x = b; raises if none exists."""
    rows, cols = shape(M)
    if len(b) != rows:
        raise ValueError("shape mismatch")
    U, D, V = smith_normal_form(M)
    c = matvec(U, b)
    d = diagonal_of(D)
    y = [0] * cols
    for i in range(rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                raise ValueError("no integer solution")
        else:
            q, r = divmod(c[i], di)
            if r != 0:
                raise ValueError("no integer solution")
            if i < cols:
                y[i] = q
    return matvec(V, y)


class LatticeSolver:
    """Repeated exact solves against a fixed integer matrix.

    Factors M once (U M V = D) so that each solve_int-style query is two
    matrix-vector products instead of a fresh Smith reduction.
    """

    def __init__(self, M: list[list[int]]):
        self.rows, self.cols = shape(M)
        self.U, D, self.V = smith_normal_form(M)
        self.diag = diagonal_of(D)

    def solve(self, b: list[int]) -> list[int]:
        if len(b) != self.rows:
            raise ValueError("shape mismatch")
        c = matvec(self.U, b)
        y = [0] * self.cols
        for i in range(self.rows):
            di = self.diag[i] if i < len(self.diag) else 0
            if di == 0:
                if c[i] != 0:
                    raise ValueError("no integer solution")
            else:
                q, r = divmod(c[i], di)
                if r != 0:
                    raise ValueError("no integer solution")
                if i < self.cols:
                    y[i] = q
        return matvec(self.V, y)


def columns_matrix(cols: list[list[int]], nrows: int | None = None) -> list[list[int]]:
    """Assemble a list of column vectors into a row-major matrix."""
    if not cols:
        return [[] for _ in range(nrows)] if nrows else []
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("ragged columns")
    return [[c[i] for c in cols] for i in range(n)]


def lattice_contains(basis_cols: list[list[int]], v: list[int]) -> bool:
    """Whether v lies in the integer span of the given column vectors."""
    if not basis_cols:
        return all(x == 0 for x in v)
    M = columns_matrix(basis_cols)
    try:
        solve_int(M, v)
        return True
    except ValueError:
        return False


def lattices_equal(basis_a: list[list[int]], basis_b: list[list[int]]) -> bool:
    return all(lattice_contains(basis_b, v) for v in basis_a) and \
        all(lattice_contains(basis_a, v) for v in basis_b)
