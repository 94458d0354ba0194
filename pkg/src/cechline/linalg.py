"""Small exact linear algebra kernels over Q and Z.

Matrices are lists of rows.  Everything here is exact; sizes stay tiny
(a few dozen unknowns at most), so plain Gaussian elimination is enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def det_int(a: Matrix) -> int:
    """Determinant by fraction-based elimination; exact for integer input."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(det)


def inverse_unimodular(a: Matrix) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    inv = [row[n:] for row in m]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def solve_rational(a: Matrix, b: Sequence, ncols: Optional[int] = None) -> Optional[list]:
    """One solution of ``a x = b`` over Q (free variables set to 0), or None."""
    ncols = len(a[0]) if a else (ncols or 0)
    rows = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def nullspace_rational(a: Matrix, ncols: int) -> List[list]:
    """Basis of ``{x : a x = 0}`` over Q."""
    rows = [[Fraction(x) for x in row] for row in a]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(v)
    return basis


def smith_normal_form(a: Matrix) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U a V = D`` diagonal, U and V unimodular.

    The diagonal entries are nonnegative and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    D = [[int(x) for x in row] for row in a]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        D[dst] = [x + k * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def diagonal(D: Matrix) -> list:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def solve_integer(a: Matrix, b: Sequence[int], ncols: Optional[int] = None) -> Optional[list]:
    """One integer solution of ``a x = b`` or None."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if m == 0:
        return [0] * n
    if n == 0:
        return [] if not any(b) else None
    D, U, V = smith_normal_form(a)
    ub = matvec(U, b)
    y = [0] * n
    for i in range(m):
        dii = D[i][i] if i < n else 0
        if dii:
            if ub[i] % dii:
                return None
            y[i] = ub[i] // dii
        elif ub[i]:
            return None
    return matvec(V, y)


def kernel_integer(a: Matrix, ncols: int) -> List[list]:
    """Basis of the integer kernel ``{x in Z^n : a x = 0}``."""
    if not a:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    D, U, V = smith_normal_form(a)
    rank = sum(1 for x in diagonal(D) if x)
    return [[V[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def cokernel(a: Matrix, nrows: int):
    """Structure of ``Z^nrows / image(a)``.

    Returns ``(U, invariants)`` where row ``k`` of ``U`` applied to a vector
    gives its ``k``-th coordinate, to be read modulo ``invariants[k]``
    (0 means a free summand, 1 a trivial one).
    """
    if not a or not a[0]:
        return identity(nrows), [0] * nrows
    D, U, V = smith_normal_form(a)
    invariants = [D[i][i] if i < len(D[0]) else 0 for i in range(nrows)]
    return U, invariants
