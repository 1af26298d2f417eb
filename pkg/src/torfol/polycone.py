"""Rational polyhedral cones and polytopes.

Conversion between generators and facet inequalities uses the double
description method; lattice points of polytopes are listed by
branch-and-bound on exact LP coordinate ranges.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from . import exactlp
from .errors import ConeHasLinealityError, UnboundedError
from .exactlin import (
    dot,
    frac_vector,
    integral_direction,
    is_zero,
    lin_comb,
    nullspace,
    primitive_part,
    orthogonal_complement,
    rank,
    row_space_basis,
    solve,
)


@dataclass(frozen=True)
class RatCone:
    """Cone spanned by ``generators`` in ``Q^dim``."""

    generators: tuple
    dim: int

    def __init__(self, generators, dim=None):
        gens = tuple(frac_vector(g) for g in generators)
        if dim is None:
            if not gens:
                raise ValueError("ambient dimension needed for the zero cone")
            dim = len(gens[0])
        gens = tuple(g for g in gens if not is_zero(g))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "dim", dim)

    def span_dim(self):
        return rank(self.generators) if self.generators else 0


@dataclass(frozen=True)
class HRep:
    """``{x : eq . x = 0 for eq in equations, ineq . x >= 0 for ineq in inequalities}``."""

    equations: tuple
    inequalities: tuple


@dataclass
class RatPolytope:
    """``{x : a . x <= b for (a, b) in halfspaces, a . x == b for (a, b) in equations}``."""

    dim: int
    halfspaces: list = field(default_factory=list)
    equations: list = field(default_factory=list)

    def contains(self, x):
        return all(dot(a, x) <= b for a, b in self.halfspaces) and all(
            dot(a, x) == b for a, b in self.equations
        )


def _sign(x):
    return (x > 0) - (x < 0)


def _idot(u, v):
    return sum(a * b for a, b in zip(u, v))


def dd_extreme_rays(inequalities, equations, n):
    """Extreme rays of the pointed cone ``{A x >= 0, E x = 0}`` in ``Q^n``.

    Double description (Motzkin) with the combinatorial adjacency test.
    Constraints are inserted in the given order, rays are returned as
    primitive integer vectors in lexicographic order.
    """
    inequalities = [frac_vector(a) for a in inequalities]
    equations = [frac_vector(e) for e in equations if not is_zero(e)]
    K = nullspace(equations, n) if equations else [
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    ]
    k = len(K)
    if k == 0:
        return []
    # constraints in the coordinates y of x = sum y_i K_i, scaled to primitive integer rows
    A = [tuple(dot(a, Ki) for Ki in K) for a in inequalities]
    A = [integral_direction(a) for a in A if not is_zero(a)]
    if not A or rank(A) < k:
        raise ConeHasLinealityError("cone contains a line")

    chosen = []
    for idx, a in enumerate(A):
        if rank([A[i] for i in chosen] + [a]) > len(chosen):
            chosen.append(idx)
            if len(chosen) == k:
                break
    B = [A[i] for i in chosen]
    rays = []
    for j in range(k):
        e = [Fraction(int(i == j)) for i in range(k)]
        rays.append(integral_direction(solve(B, e)))
    zero_sets = [frozenset(i for i in chosen if _idot(A[i], r) == 0) for r in rays]

    for idx in range(len(A)):
        if idx in chosen:
            continue
        a = A[idx]
        vals = [_idot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos + zer]
        new_zero = [zero_sets[i] for i in pos] + [zero_sets[i] | {idx} for i in zer]
        for p in pos:
            for q in neg:
                common = zero_sets[p] & zero_sets[q]
                if len(common) < k - 2:
                    continue
                if any(
                    s != p and s != q and common <= zero_sets[s] for s in range(len(rays))
                ):
                    continue
                r = tuple(vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q]))
                new_rays.append(primitive_part(r))
                new_zero.append(common | {idx})
        rays, zero_sets = new_rays, new_zero
        if not rays:
            break

    out = {integral_direction(lin_comb(r, K, n)) for r in rays}
    return sorted(out)


def hrep(cone):
    """Facet inequalities and span equations of a cone given by generators.

    Facets are the extreme rays of the dual cone, computed by double
    description in coordinates on the linear span.  All normals are
    primitive integer vectors.
    """
    n = cone.dim
    gens = cone.generators
    if not gens:
        eqs = tuple(integral_direction(e) for e in nullspace([], n))
        return HRep(eqs, ())
    L = row_space_basis(gens, n)
    d = len(L)
    eqs = tuple(integral_direction(e) for e in orthogonal_complement(L, n))
    Lt = list(zip(*L))
    coords = [solve(Lt, g) for g in gens]
    try:
        dual_rays = dd_extreme_rays(coords, [], d)
    except ConeHasLinealityError:  # pragma: no cover - dual of full-dim cone is pointed
        raise
    gram = [tuple(dot(Li, Lj) for Lj in L) for Li in L]
    facets = []
    for z in dual_rays:
        t = solve(gram, z)
        facets.append(integral_direction(lin_comb(t, L, n)))
    return HRep(eqs, tuple(sorted(set(facets))))


def contains(cone, x, h=None):
    h = h or hrep(cone)
    return all(dot(e, x) == 0 for e in h.equations) and all(
        dot(f, x) >= 0 for f in h.inequalities
    )


def in_relative_interior(cone, x, h=None):
    h = h or hrep(cone)
    return all(dot(e, x) == 0 for e in h.equations) and all(
        dot(f, x) > 0 for f in h.inequalities
    )


def extreme_rays(cone):
    """Primitive generators of the extreme rays, lexicographically sorted.

    Raises :class:`ConeHasLinealityError` when the cone is not pointed.
    """
    h = hrep(cone)
    if not cone.generators:
        return []
    return dd_extreme_rays(h.inequalities, h.equations, cone.dim)


def subspace_equations(V, n):
    return [integral_direction(e) for e in orthogonal_complement(list(V), n)] if V else [
        integral_direction(e) for e in nullspace([], n)
    ]


def intersect_subspace(cone, V):
    """The cone ``cone ∩ span(V)``, returned by its extreme rays."""
    n = cone.dim
    h = hrep(cone)
    eqs = list(h.equations) + subspace_equations(V, n)
    rays = dd_extreme_rays(h.inequalities, eqs, n)
    return RatCone(rays, n)


def _coordinate_range(A, b, E, e, i, nvars):
    c = [0] * nvars
    c[i] = 1
    hi = exactlp.maximize(c, A, b, E, e)
    if hi.status == "infeasible":
        return None
    if hi.status == "unbounded":
        raise UnboundedError("polytope is unbounded", direction=hi.ray)
    lo = exactlp.minimize(c, A, b, E, e)
    if lo.status == "unbounded":
        raise UnboundedError("polytope is unbounded", direction=tuple(-x for x in lo.ray))
    return lo.value, hi.value


def certify_bounded(P):
    """Raise :class:`UnboundedError` (with a recession direction) unless ``P`` is bounded.

    Returns the coordinate box ``[(lo, hi), ...]`` or ``None`` if ``P`` is empty.
    """
    A = [a for a, _ in P.halfspaces]
    b = [bb for _, bb in P.halfspaces]
    E = [a for a, _ in P.equations]
    e = [bb for _, bb in P.equations]
    box = []
    for i in range(P.dim):
        r = _coordinate_range(A, b, E, e, i, P.dim)
        if r is None:
            return None
        box.append(r)
    return box


def lattice_points(P):
    """All integer points of a bounded rational polytope, in lexicographic order."""
    if certify_bounded(P) is None:
        return []
    halfspaces = [(frac_vector(a), Fraction(b)) for a, b in P.halfspaces]
    equations = [(frac_vector(a), Fraction(b)) for a, b in P.equations]
    n = P.dim
    out = []

    def recurse(prefix):
        i = len(prefix)
        if i == n:
            point = tuple(prefix)
            if all(dot(a, point) <= b for a, b in halfspaces) and all(
                dot(a, point) == b for a, b in equations
            ):
                out.append(point)
            return
        A, bs, E, es = [], [], [], []
        for a, b in halfspaces:
            A.append(a[i:])
            bs.append(b - dot(a[:i], prefix))
        for a, b in equations:
            E.append(a[i:])
            es.append(b - dot(a[:i], prefix))
        r = _coordinate_range(A, bs, E, es, 0, n - i)
        if r is None:
            return
        lo, hi = r
        for value in range(ceil(lo), floor(hi) + 1):
            recurse(prefix + [value])

    recurse([])
    return out


def relint_rational_point(cone, V):
    """A point of ``relint(cone) ∩ span(V)``, or ``None``.

    Works on the cone of coefficient vectors ``λ >= 0`` with
    ``sum λ_i g_i`` in ``V``: the sum of its extreme rays lies in its
    relative interior, so a strictly positive coefficient vector exists iff
    that sum is strictly positive.  The witness is the primitive integer
    vector on the resulting ray.
    """
    gens = [tuple(g) for g in cone.generators]
    n = cone.dim
    k = len(gens)
    if k == 0:
        return None
    eqs_V = subspace_equations(V, n)
    eqs = [tuple(dot(e, g) for g in gens) for e in eqs_V]
    ineqs = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
    rays = dd_extreme_rays(ineqs, eqs, k)
    if not rays:
        return None
    total = [sum(r[i] for r in rays) for i in range(k)]
    if any(t <= 0 for t in total):
        return None
    return integral_direction(lin_comb(total, gens, n))
