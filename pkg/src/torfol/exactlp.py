"""A small exact linear-programming solver (two-phase simplex, Bland's rule).

Used for boundedness certificates and strict-feasibility questions where a
floating-point tolerance would decide a sign.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import frac_vector


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple | None = None
    ray: tuple | None = None  # improving recession direction when unbounded


def _pivot(T, basis, row, col):
    pv = T[row][col]
    T[row] = [a / pv for a in T[row]]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            f = T[i][col]
            T[i] = [a - f * b for a, b in zip(T[i], T[row])]
    basis[row] = col


def _simplex(T, basis, cost, allowed):
    """Maximise ``cost . y`` on the tableau in place.

    Returns ``None`` at optimum, or the entering column if unbounded.
    """
    m = len(T)
    ncols = len(T[0]) - 1
    while True:
        # reduced costs: c_j - c_B B^-1 A_j
        cb = [cost[b] for b in basis]
        entering = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            rc = cost[j] - sum((cb[i] * T[i][j] for i in range(m)), Fraction(0))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return None
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return entering
        _pivot(T, basis, best[1], entering)


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Maximise ``c . x`` over ``A_ub x <= b_ub, A_eq x == b_eq`` with ``x`` free."""
    c = frac_vector(c)
    n = len(c)
    A_ub = [frac_vector(r) for r in A_ub]
    A_eq = [frac_vector(r) for r in A_eq]
    b_ub = frac_vector(b_ub)
    b_eq = frac_vector(b_eq)
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    # columns: x+ (n), x- (n), slacks (m_ub), artificials (m)
    nv = 2 * n + m_ub
    ncols = nv + m
    T = []
    for i, (row, rhs) in enumerate(zip(A_ub + A_eq, b_ub + b_eq)):
        line = list(row) + [-a for a in row] + [Fraction(0)] * m_ub + [Fraction(0)] * m
        if i < m_ub:
            line[2 * n + i] = Fraction(1)
        if rhs < 0:
            line = [-a for a in line]
            rhs = -rhs
        line[nv + i] = Fraction(1)
        T.append(line + [rhs])
    basis = [nv + i for i in range(m)]

    if m:
        phase1 = [Fraction(0)] * nv + [Fraction(-1)] * m
        _simplex(T, basis, phase1, [True] * ncols)
        if sum(T[i][-1] for i in range(m) if basis[i] >= nv) != 0:
            return LPResult("infeasible")
        # drive remaining (zero-level) artificials out of the basis
        for i in range(m):
            if basis[i] >= nv:
                col = next((j for j in range(nv) if T[i][j] != 0), None)
                if col is not None:
                    _pivot(T, basis, i, col)
    cost = list(c) + [-a for a in c] + [Fraction(0)] * (m_ub + m)
    allowed = [True] * nv + [False] * m
    entering = _simplex(T, basis, cost, allowed)
    if entering is not None:
        d = [Fraction(0)] * ncols
        d[entering] = Fraction(1)
        for i, b in enumerate(basis):
            d[b] = -T[i][entering]
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return LPResult("unbounded", ray=ray)
    y = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        y[b] = T[i][-1]
    x = tuple(y[j] - y[n + j] for j in range(n))
    value = sum((a * b for a, b in zip(c, x)), Fraction(0))
    return LPResult("optimal", value=value, x=x)


def minimize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    res = maximize([-as_ for as_ in frac_vector(c)], A_ub, b_ub, A_eq, b_eq)
    if res.status == "optimal":
        return LPResult("optimal", value=-res.value, x=res.x)
    return res
