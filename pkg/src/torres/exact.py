"""Exact rational and integer-lattice linear algebra.

Scalars are ``fractions.Fraction`` (always in lowest terms with a positive
denominator); vectors and matrices are plain tuples/lists of them.  Nothing
here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

Vector = Sequence
Matrix = Sequence[Sequence]


def frac_vector(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def frac_matrix(M) -> list:
    return [[Fraction(x) for x in row] for row in M]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M) -> list:
    return [list(col) for col in zip(*M)]


def matmul(A, B) -> list:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(M, v) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _check_square(M) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError(f"expected a square matrix, got {n} rows of lengths "
                         f"{sorted({len(row) for row in M})}")
    return n


def _integer_rows(M) -> tuple[list, int]:
    """Scale each row to integers; return (int matrix, product of scales)."""
    rows, scale = [], 1
    for row in M:
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        rows.append([int(x * den) for x in fr])
        scale *= den
    return rows, scale


def _bareiss(A: list) -> int:
    """Determinant of an integer matrix by fraction-free elimination (in place)."""
    n = len(A)
    sign, prev = 1, 1
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
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def det(M) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = _check_square(M)
    if n == 0:
        return Fraction(1)
    A, scale = _integer_rows(M)
    return Fraction(_bareiss(A), scale)


def orientation_sign(vectors) -> int:
    """Sign of det of r vectors in dimension r (lattice coordinates)."""
    d = det(vectors)
    return (d > 0) - (d < 0)


def rref(M) -> tuple[list, list]:
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    R = frac_matrix(M)
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols: Optional[int] = None) -> list:
    """Rational basis of {x : M x = 0}."""
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_rational(M, b) -> Optional[tuple[tuple, list]]:
    """Solve M x = b exactly.

    Returns ``(x, kernel)`` where ``x`` has its free coordinates set to zero
    and ``kernel`` is a rational basis of the solution directions, or ``None``
    when the system is inconsistent.
    """
    if len(M) != len(b):
        raise ValueError(f"dimension mismatch: {len(M)} rows vs rhs of length {len(b)}")
    if not M:
        return (), []
    n = len(M[0])
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return tuple(x), nullspace(M, n)


def solve_unique(M, b) -> tuple:
    """Solve a square nonsingular system; raises on singular input."""
    sol = solve_rational(M, b)
    if sol is None or sol[1]:
        raise ZeroDivisionError("singular system")
    return sol[0]


def inverse(M) -> list:
    n = _check_square(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R[:n]]


def coordinates(basis, v) -> tuple:
    """Coordinates of v in the given basis (vectors as rows)."""
    return solve_unique(transpose(basis), list(v))


# ---------------------------------------------------------------------------
# integer lattices

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(M) -> tuple[list, list]:
    """Row-style Hermite normal form of an integer matrix.

    Returns ``(H, U)`` with ``U @ M == H``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots and entries above each pivot reduced
    into ``[0, pivot)``.  Zero rows of ``H`` sit at the bottom.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    k = len(A[0]) if m else 0
    U = identity(m)
    row = 0
    for col in range(k):
        if row >= m:
            break
        for i in range(row + 1, m):
            if A[i][col] == 0:
                continue
            a, b = A[row][col], A[i][col]
            g, x, y = xgcd(a, b)
            p, q = a // g, b // g
            A[row], A[i] = ([x * s + y * t for s, t in zip(A[row], A[i])],
                            [-q * s + p * t for s, t in zip(A[row], A[i])])
            U[row], U[i] = ([x * s + y * t for s, t in zip(U[row], U[i])],
                            [-q * s + p * t for s, t in zip(U[row], U[i])])
        if A[row][col] == 0:
            continue
        if A[row][col] < 0:
            A[row] = [-v for v in A[row]]
            U[row] = [-v for v in U[row]]
        piv = A[row][col]
        for i in range(row):
            f = A[i][col] // piv
            if f:
                A[i] = [s - f * t for s, t in zip(A[i], A[row])]
                U[i] = [s - f * t for s, t in zip(U[i], U[row])]
        row += 1
    return A, U


def smith(M) -> tuple[list, list, list]:
    """Smith normal form ``S = P @ M @ Q`` with unimodular P, Q.

    The diagonal of S is nonnegative and each entry divides the next.
    """
    S = [[int(x) for x in row] for row in M]
    m = len(S)
    k = len(S[0]) if m else 0
    P, Q = identity(m), identity(k)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
        P[dst] = [a + f * b for a, b in zip(P[dst], P[src])]

    def add_col(dst, src, f):
        for row in S:
            row[dst] += f * row[src]
        for row in Q:
            row[dst] += f * row[src]

    for t in range(min(m, k)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, k) if S[i][j]]
            if not nz:
                return S, P, Q
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = S[t][t]
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // piv))
                    if S[i][t]:
                        done = False
            for j in range(t + 1, k):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // piv))
                    if S[t][j]:
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, k)
                        if S[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            P[t] = [-v for v in P[t]]
    return S, P, Q


def invariant_factors(M) -> list:
    S, _, _ = smith(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def integer_kernel(M) -> list:
    """Basis of the saturated lattice {v in Z^n : M v = 0}.

    Rows returned are the integer kernel vectors, reduced to Hermite form so
    the answer is canonical for a given lattice.
    """
    n = len(M[0])
    H, U = hnf(transpose(M))
    basis = [U[i] for i in range(n) if not any(H[i])]
    if basis:
        basis, _ = hnf(basis)
        basis = [row for row in basis if any(row)]
    return [tuple(row) for row in basis]


def is_unimodular(M) -> bool:
    return all(Fraction(x).denominator == 1 for row in M for x in row) and abs(det(M)) == 1


def primitive(v) -> tuple:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = gcd(*ints)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def normal_vector(vectors, dim: int) -> tuple:
    """Generalised cross product of ``dim - 1`` vectors in dimension ``dim``.

    Component i is the signed maximal minor with column i removed, so that
    ``dot(normal, x) == det(vectors + [x])``.
    """
    rows = [list(v) for v in vectors]
    out = []
    for i in range(dim):
        minor = [[row[j] for j in range(dim) if j != i] for row in rows]
        out.append(det(minor) * (-1) ** (dim - 1 + i))
    return tuple(out)


def supporting_normals(vectors, dim: int) -> list:
    """Primitive inner normals of the cone spanned by ``vectors``.

    For a full-dimensional cone these are exactly the facet normals, so the
    cone equals ``{x : dot(n, x) >= 0 for all n}``; dually they generate the
    dual cone.  Requires the vectors to span.
    """
    from itertools import combinations

    vecs = [frac_vector(v) for v in vectors]
    if dim == 1:
        signs = {(v[0] > 0) - (v[0] < 0) for v in vecs}
        return [(s,) for s in (1, -1) if -s not in signs]
    found = []
    seen = set()
    for combo in combinations(range(len(vecs)), dim - 1):
        nv = normal_vector([vecs[i] for i in combo], dim)
        if not any(nv):
            continue
        vals = [dot(nv, v) for v in vecs]
        if all(x >= 0 for x in vals):
            cand = primitive(nv)
        elif all(x <= 0 for x in vals):
            cand = primitive([-x for x in nv])
        else:
            continue
        if cand not in seen:
            seen.add(cand)
            found.append(cand)
    return sorted(found)


def in_cone(generators, v, dim: int) -> bool:
    """Exact membership of v in the closed cone spanned by ``generators``."""
    from itertools import combinations

    gens = [frac_vector(g) for g in generators if any(g)]
    v = frac_vector(v)
    if not any(v):
        return True
    for size in range(1, min(dim, len(gens)) + 1):
        for combo in combinations(gens, size):
            sol = solve_rational(transpose(list(combo)), list(v))
            if sol is None or sol[1]:
                continue
            if all(c >= 0 for c in sol[0]):
                return True
    return False
