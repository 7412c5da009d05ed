"""Exact linear algebra over Q and Z: no floats anywhere.

Matrices are plain lists of lists holding ints or Fractions.  Sizes in this
package never exceed a few dozen rows, so everything is dense and direct.

    >>> from fractions import Fraction
    >>> mat_inverse([[2, 1], [1, 1]])
    [[Fraction(1, 1), Fraction(-1, 1)], [Fraction(-1, 1), Fraction(2, 1)]]
    >>> det_bareiss([[2, 0], [0, 3]])
    6
    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> [D[0][0], D[1][1]]
    [2, 4]
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "SingularMatrixError",
    "identity_matrix",
    "transpose",
    "mat_mul",
    "mat_vec",
    "mat_inverse",
    "det_bareiss",
    "det_fraction",
    "hnf_rows",
    "smith_normal_form",
    "elementary_divisors",
    "lattice_index",
    "in_hnf_lattice",
    "in_local_span",
    "p_valuation_at_least",
    "is_p_integral",
    "parse_fraction",
    "format_fraction",
]


class SingularMatrixError(Exception):
    pass


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    nb = len(B)
    if any(len(row) != nb for row in A):
        raise ValueError("shape mismatch")
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def mat_inverse(A):
    """Exact inverse of a square matrix, entries returned as Fractions."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("singular at column %d" % col)
        M[col], M[piv] = M[piv], M[col]
        inv = Fraction(1) / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [row[n:] for row in M]


def det_bareiss(A):
    """Fraction-free determinant of an integer matrix (exact int)."""
    n = len(A)
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    if any(len(row) != n for row in M):
        raise ValueError("not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det_fraction(A):
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = Fraction(1) / M[col][col]
        for i in range(col + 1, n):
            if M[i][col] != 0:
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


def hnf_rows(A):
    """Canonical row Hermite normal form of the row lattice of A.

    Returns only the nonzero rows: echelon shape, positive pivots, entries
    above each pivot reduced into [0, pivot).  Two integer matrices span the
    same row lattice iff their hnf_rows agree.
    """
    rows = [[int(x) for x in row] for row in A]
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if rows[i][c] != 0]
            if not nz:
                break
            if len(nz) == 1:
                i0 = nz[0]
                rows[r], rows[i0] = rows[i0], rows[r]
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            a = rows[r][c]
            for i in range(r + 1, m):
                if rows[i][c] != 0:
                    q = rows[i][c] // a
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        a = rows[r][c]
        for i in range(r):
            q = rows[i][c] // a
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows[:r]


def smith_normal_form(A):
    """(U, D, V) with D = U*A*V diagonal, d_i | d_{i+1}, U and V unimodular."""
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):
        # row i -= q * row j
        D[i] = [x - q * y for x, y in zip(D[i], D[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def add_col(i, j, q):
        # col i -= q * col j
        for row in D:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            d = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    add_row(i, t, D[i][t] // d)
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    add_col(j, t, D[t][j] // d)
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                if any(D[i][j] % d for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def elementary_divisors(A):
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i] != 0]


def lattice_index(gens, n=None):
    """Index [Z^n : L] for the row lattice L spanned by gens (must be full rank)."""
    H = hnf_rows(gens)
    if n is None:
        n = len(gens[0])
    if len(H) != n:
        raise ValueError("lattice has rank %d < %d, index is infinite" % (len(H), n))
    idx = 1
    for i, row in enumerate(H):
        piv = next(x for x in row if x != 0)
        idx *= piv
    return idx


def in_hnf_lattice(v, H):
    """Membership of integer vector v in the row lattice given by hnf_rows output."""
    v = list(v)
    for row in H:
        c = next(j for j, x in enumerate(row) if x != 0)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return all(x == 0 for x in v)


def p_valuation_at_least(x, p, k):
    """True iff v_p(x) >= k for a Fraction or int x (0 passes every bound)."""
    x = Fraction(x)
    if x == 0:
        return True
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v >= k


def is_p_integral(x, p):
    return Fraction(x).denominator % p != 0


def _p_val(x, p):
    # valuation of a nonzero integer
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def in_local_span(gens, v, p):
    """Is v in the Z_(p)-span of the integer row vectors gens?

    Solvability of q*G = v with every q entry p-integral, decided through the
    Smith form of G.  v may have Fraction entries.
    """
    if not gens:
        return all(Fraction(x) == 0 for x in v)
    U, D, V = smith_normal_form(gens)
    k, n = len(gens), len(gens[0])
    w = [sum(Fraction(v[i]) * V[i][j] for i in range(n)) for j in range(n)]
    for j in range(n):
        d = D[j][j] if j < k and j < n else 0
        if d == 0:
            if w[j] != 0:
                return False
        else:
            need = _p_val(d, p)
            if need and not p_valuation_at_least(w[j], p, need):
                return False
            if not is_p_integral(w[j], p):
                return False
    return True


def parse_fraction(text):
    return Fraction(str(text).strip())


def format_fraction(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)
