"""Exact integer and rational linear algebra.

Vectors are tuples of ``int`` or :class:`fractions.Fraction`; matrices are
sequences of row vectors.  Nothing in here touches floating point.
"""

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd

from .errors import DimensionError, NotSimplicialError, ZeroVectorError


def as_fraction(x):
    """Parse ``x`` (int, Fraction or a ``"p/q"`` string) into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            num, den = int(num), int(den)
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
            return Fraction(num, den)
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def frac_vector(v):
    return tuple(as_fraction(x) for x in v)


def int_vector(v):
    out = []
    for x in v:
        x = as_fraction(x)
        if x.denominator != 1:
            raise ValueError(f"{v!r} is not an integer vector")
        out.append(int(x))
    return tuple(out)


def dot(u, v):
    if len(u) != len(v):
        raise DimensionError(f"length {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def lin_comb(coeffs, vectors, n=None):
    if n is None:
        n = len(vectors[0])
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def is_zero(v):
    return all(a == 0 for a in v)


def transpose(M):
    return [tuple(col) for col in zip(*M)]


def primitive_part(v):
    """Divide an integer vector by the gcd of its entries.

    >>> primitive_part((0, -3, 0))
    (0, -1, 0)
    """
    v = int_vector(v)
    g = reduce(gcd, (abs(a) for a in v), 0)
    if g == 0:
        raise ZeroVectorError(f"{v!r} has no primitive part")
    return tuple(a // g for a in v)


def integral_direction(v):
    """The primitive integer vector on the ray through a nonzero rational vector."""
    v = frac_vector(v)
    lcm = 1
    for a in v:
        lcm = lcm * a.denominator // gcd(lcm, a.denominator)
    return primitive_part(tuple(int(a * lcm) for a in v))


def rref(M, ncols=None):
    """Reduced row echelon form over Q.

    Returns ``(rows, pivots)`` with the zero rows dropped.  The result is
    canonical for the row space, which is what makes downstream bases
    deterministic.
    """
    rows = [list(frac_vector(r)) for r in M]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [a / pv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def _integer_rows(M):
    out = []
    for row in M:
        row = frac_vector(row)
        lcm = 1
        for a in row:
            lcm = lcm * a.denominator // gcd(lcm, a.denominator)
        out.append([int(a * lcm) for a in row])
    return out


def rank(M):
    """Rank over Q by fraction-free (Bareiss) elimination."""
    A = _integer_rows(M)
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    prev = 1
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, m):
            A[i] = [(A[r][c] * A[i][j] - A[i][c] * A[r][j]) // prev for j in range(n)]
        prev = A[r][c]
        r += 1
        if r == m:
            break
    return r


def det(M):
    """Determinant of a square matrix (Bareiss on cleared denominators)."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(row) != n for row in M):
        raise DimensionError("determinant of a non-square matrix")
    rows = [frac_vector(r) for r in M]
    denom = Fraction(1)
    A = []
    for row in rows:
        lcm = 1
        for a in row:
            lcm = lcm * a.denominator // gcd(lcm, a.denominator)
        denom *= lcm
        A.append([int(a * lcm) for a in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    result = Fraction(sign * A[n - 1][n - 1]) / denom
    return int(result) if result.denominator == 1 else result


def solve(A, b):
    """One exact solution of ``A x = b``, or ``None`` if inconsistent.

    When the system is underdetermined the free variables are set to zero
    in the reduced echelon form, so the answer is a deterministic function
    of ``(A, b)``.
    """
    A = [frac_vector(r) for r in A]
    b = frac_vector(b)
    if len(A) != len(b):
        raise DimensionError(f"{len(A)} equations but {len(b)} right-hand sides")
    if not A:
        return None
    n = len(A[0])
    if any(len(r) != n for r in A):
        raise DimensionError("ragged coefficient matrix")
    aug = [row + (bi,) for row, bi in zip(A, b)]
    R, pivots = rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, pivots):
        x[c] = row[n]
    return tuple(x)


def nullspace(M, n=None):
    """Basis of ``{x : M x = 0}``, one vector per free column of the RREF."""
    if n is None:
        n = len(M[0])
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    R, pivots = rref(M, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, c in zip(R, pivots):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


def row_space_basis(vectors, n=None):
    """Canonical (RREF) basis of the span of ``vectors``."""
    vectors = list(vectors)
    if not vectors:
        return []
    R, _ = rref(vectors, n)
    return R


def in_span(v, basis):
    if not basis:
        return is_zero(v)
    return rank(list(basis) + [v]) == rank(basis)


def orthogonal_complement(basis, n):
    """Basis of the annihilator of ``span(basis)`` inside the dual space."""
    if not basis:
        return nullspace([], n)
    return nullspace(list(basis), n)


def gcd_of_maximal_minors(gens):
    gens = [int_vector(g) for g in gens]
    k = len(gens)
    if k == 0:
        return 1
    n = len(gens[0])
    if k > n:
        return 0
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, abs(int(det([[row[c] for c in cols] for row in gens]))))
        if g == 1:
            break
    return g


def cone_multiplicity(generators):
    """Index of the sublattice spanned by the generators inside its saturation.

    This is the gcd of the maximal minors of the generator matrix; it is 1
    exactly when the cone is smooth.
    """
    m = gcd_of_maximal_minors(generators)
    if m == 0:
        raise NotSimplicialError(f"generators {list(generators)!r} are linearly dependent")
    return m


def smith_normal_form(A):
    """Smith normal form ``D = U A W`` of an integer matrix.

    Returns ``(D, U, W)`` with ``U``, ``W`` unimodular.  The diagonal of ``D``
    is non-negative and each entry divides the next.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(int_vector(r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in D:
            row[dst] += c * row[src]
        for row in W:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
            if not entries:
                return D, U, W
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return D, U, W


def matmul(A, B):
    Bt = list(zip(*B))
    return [tuple(dot(row, col) for col in Bt) for row in A]
