"""Exact integer / rational matrix routines.

Matrices are plain lists of lists holding python ints (Fractions where
stated).  Everything is exact; no floating point is used anywhere.  The
Smith form keeps track of its transforms because the kernels and
saturation tests downstream need them, which is also why this is written
here instead of delegating to sympy (whose smith_normal_form drops U, V).
"""

from __future__ import annotations

from fractions import Fraction


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_copy(mat):
    return [list(row) for row in mat]


def transpose(mat):
    if not mat:
        return []
    return [list(col) for col in zip(*mat)]


def mat_mul(a, b):
    """Matrix product; works for int and Fraction entries alike."""
    if not a or not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(mat, vec):
    return [sum(x * y for x, y in zip(row, vec)) for row in mat]


def vec_mat(vec, mat):
    out = [0] * (len(mat[0]) if mat else 0)
    for x, row in zip(vec, mat):
        if x:
            for j, y in enumerate(row):
                out[j] += x * y
    return out


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def is_symmetric(mat):
    n = len(mat)
    return all(len(row) == n for row in mat) and all(
        mat[i][j] == mat[j][i] for i in range(n) for j in range(i))


def smith_normal_form(mat):
    """Return (D, U, V) with U*mat*V = D diagonal, d1 | d2 | ...

    U and V are unimodular.  D has the same shape as mat; its diagonal is
    non-negative with the divisibility chain enforced.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[int(x) for x in row] for row in mat]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, c):
        Ai, Aj = A[i], A[j]
        for k in range(n):
            Ai[k] += c * Aj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] += c * Uj[k]

    def col_op(i, j, c):
        for r in A:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    t = 0
    lim = min(m, n)
    while t < lim:
        piv = None
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v:
                    a = abs(v)
                    if best is None or a < best:
                        best = a
                        piv = (i, j)
        if piv is None:
            break
        if piv != (t, t):
            if piv[0] != t:
                row_swap(t, piv[0])
            if piv[1] != t:
                col_swap(t, piv[1])
        # kill column t then row t; pivot may shrink along the way
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, -q)
                    if A[i][t]:
                        row_swap(t, i)
            if any(A[i][t] for i in range(t + 1, m)):
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, -q)
                    if A[t][j]:
                        col_swap(t, j)
            if any(A[t][j] for j in range(t + 1, n)):
                continue
            break
        # divisibility: pivot must divide the rest of the block
        offender = None
        p = A[t][t]
        for i in range(t + 1, m):
            Ai = A[i]
            for j in range(t + 1, n):
                if Ai[j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, 1)
            continue
        if p < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def invariant_factors(mat):
    """Nonzero diagonal of the Smith form."""
    D, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(D[i][i])
    return out


def det_bareiss(mat):
    """Exact integer determinant, fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    A = [[int(x) for x in row] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            Ai = A[i]
            aik = Ai[k]
            Ak = A[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = akk
    return sign * A[-1][-1]


def hnf_rows(mat):
    """Hermite form of the row lattice; returns the pivot rows only."""
    A = [[int(x) for x in row] for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            while A[i][c]:
                q = A[r][c] // A[i][c]
                A[r] = [x - q * y for x, y in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r] if any(row)]


def left_kernel(mat):
    """Basis of {x integer row : x*mat = 0}; saturated by construction."""
    m = len(mat)
    if m == 0:
        return []
    n = len(mat[0])
    if n == 0:
        return identity_matrix(m)
    D, U, _ = smith_normal_form(mat)
    r = sum(1 for i in range(min(m, n)) if D[i][i])
    return [list(U[i]) for i in range(r, m)]


def right_kernel(mat):
    """Vectors v with mat*v = 0 (returned as rows)."""
    return left_kernel(transpose(mat))


def solve_right(mat, vec):
    """One rational solution x of mat*x = vec, or None if inconsistent."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[Fraction(x) for x in row] + [Fraction(v)]
         for row, v in zip(mat, vec)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c]
        A[r] = [x / inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if A[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][n]
    return x


def solve_left(rows, vec):
    """Rational x with x*rows = vec, or None."""
    return solve_right(transpose(rows), vec)


def express_rows(rows_a, rows_b):
    """Matrix C (rational) with C*rows_b = rows_a, or None."""
    bt = transpose(rows_b)
    out = []
    for a in rows_a:
        x = solve_right(bt, a)
        if x is None:
            return None
        out.append(x)
    return out


def frac_mat_inv(mat):
    n = len(mat)
    A = [[Fraction(x) for x in row] +
         [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c]
        A[c] = [x / inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def is_integer_vector(vec):
    return all(Fraction(x).denominator == 1 for x in vec)


def gram_matrix(rows, gram):
    """Pairing matrix R*G*R^T of row vectors under a Gram matrix."""
    gr = [vec_mat(r, gram) for r in rows]
    return [[dot(g, s) for s in rows] for g in gr]
