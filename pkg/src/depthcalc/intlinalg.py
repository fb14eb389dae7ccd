"""Integer matrix helpers: Smith and Hermite normal forms, kernels.

Matrices are plain lists of lists of Python ints so that entries never
overflow.  Only what the lattice code needs is here.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def copy(M) -> Matrix:
    return [list(row) for row in M]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def hstack(blocks, nrows: int):
    out = [[] for _ in range(nrows)]
    for B in blocks:
        for i in range(nrows):
            out[i].extend(B[i])
    return out


def sub_identity(M):
    """``M - 1`` for a square matrix."""
    return [[M[i][j] - int(i == j) for j in range(len(M))] for i in range(len(M))]


def as_key(M) -> tuple:
    return tuple(tuple(row) for row in M)


def smith(M, nrows: int | None = None, ncols: int | None = None):
    """Smith normal form ``U M V = D`` with ``U``, ``V`` unimodular.

    Returns ``(U, D, V, Uinv)``.  Diagonal entries are nonnegative and each
    divides the next.
    """
    A = copy(M)
    m = nrows if nrows is not None else len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        A = zeros(m, n)
    U, Uinv, V = identity(m), identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c == 0:
            return
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for row in Uinv:  # inverse gets col_src -= c * col_dst
            row[src] -= c * row[dst]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, c):
        if c == 0:
            return
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def neg_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and A[t][t] < 0:
            neg_row(t)
    D = A
    return U, D, V, Uinv


def diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rank(M, ncols: int | None = None) -> int:
    if not M:
        return 0
    _, D, _, _ = smith(M, ncols=ncols)
    return sum(1 for d in diagonal(D) if d)


def kernel(M, ncols: int) -> Matrix:
    """Basis (as columns of the returned ``ncols x k`` matrix) of ``{x : Mx = 0}``."""
    if not M:
        return identity(ncols)
    _, D, V, _ = smith(M, ncols=ncols)
    r = sum(1 for d in diagonal(D) if d)
    return [row[r:] for row in V]


def hnf_rows(vectors, n: int) -> Matrix:
    """Row-style Hermite normal form basis of the Z-span of ``vectors``."""
    A = [list(v) for v in vectors if any(v)]
    out = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in A if r[col]]) > 1:
            nz = sorted((r for r in A if r[col]), key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(n):
                    r[k] -= q * piv[k]
            A = [r for r in A if any(r)]
        piv = next(r for r in A if r[col])
        A.remove(piv)
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(out):
        c = next(k for k in range(n) if row[k])
        for above in out[:i]:
            q = above[c] // row[c]
            if q:
                for k in range(n):
                    above[k] -= q * row[k]
    return out


def rational_inverse(M) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise ValueError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def integer_inverse(M) -> Matrix:
    inv = rational_inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def solve_in_basis(basis_rows, v):
    """Integer coordinates of ``v`` in the lattice spanned by ``basis_rows``.

    Returns ``None`` when ``v`` is outside the lattice.
    """
    k = len(basis_rows)
    if k == 0:
        return [] if not any(v) else None
    n = len(v)
    # least squares over Q would be overkill; the basis is in echelon form
    # when it comes from hnf_rows, so back-substitute on pivot columns
    coords = [Fraction(0)] * k
    residual = [Fraction(x) for x in v]
    for i, row in enumerate(basis_rows):
        c = next(j for j in range(n) if row[j])
        coeff = residual[c] / row[c]
        coords[i] = coeff
        residual = [r - coeff * b for r, b in zip(residual, row)]
    if any(residual) or any(c.denominator != 1 for c in coords):
        return None
    return [int(c) for c in coords]
