"""Toric foliations ``F_V`` given by a rational subspace ``V`` of ``N_Q``."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import TorfolError
from .exactlin import (
    dot,
    frac_vector,
    in_span,
    nullspace,
    orthogonal_complement,
    rank,
    row_space_basis,
    solve,
)
from .fan import find_wall
from .polycone import RatCone, relint_rational_point


class FoliationDatum:
    """The subspace ``V`` stored by its reduced row echelon basis."""

    def __init__(self, basis, n=None, allow_degenerate=False):
        vectors = [frac_vector(b) for b in basis]
        if n is None:
            if not vectors:
                raise ValueError("ambient rank needed for an empty basis")
            n = len(vectors[0])
        if any(len(b) != n for b in vectors):
            raise TorfolError(f"basis vectors must have length {n}", kind="DimensionMismatch")
        self.n = n
        self.basis = tuple(row_space_basis(vectors, n)) if vectors else ()
        self.rank = len(self.basis)
        if not allow_degenerate and not 0 < self.rank < n:
            raise TorfolError(
                f"foliation rank must satisfy 1 <= r < {n}, got {self.rank}", kind="BadFoliationRank"
            )

    def __eq__(self, other):
        return isinstance(other, FoliationDatum) and (self.n, self.basis) == (other.n, other.basis)

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"FoliationDatum([{rows}])"

    def contains(self, v):
        return in_span(frac_vector(v), list(self.basis))

    def annihilator(self):
        """Basis of ``W = V^perp`` in ``M_Q``."""
        return [tuple(w) for w in orthogonal_complement(list(self.basis), self.n)]


@dataclass(frozen=True)
class TorusDivisor:
    """``sum_i coeffs[i] * D_i`` over the rays of a fan."""

    coeffs: tuple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __add__(self, other):
        return TorusDivisor(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return TorusDivisor(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return TorusDivisor(-a for a in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def dot(self, curve):
        """Intersection number with a curve given by its vector of ``D_i . C``."""
        return sum((a * b for a, b in zip(self.coeffs, curve)), Fraction(0))

    @classmethod
    def zero(cls, nrays):
        return cls([0] * nrays)

    def pretty(self, rays=None):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            name = f"D{tuple(rays[i])}".replace(" ", "") if rays is not None else f"D[{i}]"
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class Filtration:
    """Per-ray increasing filtrations of an ambient space of dimension ``ambient_dim``.

    ``steps[k]`` lists ``(i, basis)`` pairs: from index ``i`` on (until the
    next listed index) the filtered piece is ``span(basis)``; below the
    first listed index it is zero.
    """

    ambient_dim: int
    steps: tuple

    def dim_at(self, ray, i):
        current = 0
        for j, basis in self.steps[ray]:
            if j > i:
                break
            current = len(basis)
        return current

    def jumps(self, ray):
        """``(i, dim F(i) - dim F(i-1))`` for every listed index."""
        out, prev = [], 0
        for j, basis in self.steps[ray]:
            out.append((j, len(basis) - prev))
            prev = len(basis)
        return out


def rays_in_V(F, V):
    """Indices of rays whose generator lies in ``V``."""
    return [i for i, r in enumerate(F.rays) if V.contains(r)]


def canonical_divisor(F, V):
    """``K_F = -sum of D_rho over rays rho inside V``."""
    inside = set(rays_in_V(F, V))
    return TorusDivisor([-1 if i in inside else 0 for i in range(len(F.rays))])


def _identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def tangent_filtration(F):
    n = F.n
    full = _identity(n)
    return Filtration(n, tuple(((-1, (frac_vector(r),)), (0, full)) for r in F.rays))


def cotangent_filtration(F):
    n = F.n
    full = _identity(n)
    steps = []
    for r in F.rays:
        perp = tuple(row_space_basis(nullspace([r], n), n))
        steps.append(((0, perp), (1, full)))
    return Filtration(n, tuple(steps))


def foliation_filtration(F, V):
    steps = []
    for r in F.rays:
        if V.contains(r):
            steps.append(((-1, tuple(row_space_basis([r], F.n))), (0, V.basis)))
        else:
            steps.append(((0, V.basis),))
    return Filtration(V.rank, tuple(steps))


def conormal_filtration(F, V):
    """Filtrations of the conormal sheaf, a subsheaf of ``Omega^1`` with fibre ``W = V^perp``."""
    n = F.n
    W = tuple(row_space_basis(V.annihilator(), n)) if V.rank < n else ()
    steps = []
    for r in F.rays:
        if any(dot(w, r) != 0 for w in W):
            cut = nullspace(list(V.basis) + [frac_vector(r)], n)
            steps.append(((0, tuple(row_space_basis(cut, n)) if cut else ()), (1, W)))
        else:
            steps.append(((0, W),))
    return Filtration(n - V.rank, tuple(steps))


def c1_from_filtration(F, filtration):
    """``c_1 = -sum_rho sum_i i * dim F^[rho](i) * D_rho``."""
    coeffs = []
    for k in range(len(F.rays)):
        total = sum(i * d for i, d in filtration.jumps(k))
        coeffs.append(-total)
    return TorusDivisor(coeffs)


def canonical_divisor_via_conormal(F, V):
    """``-sum of D_rho over rays with V^perp inside rho^perp``."""
    W = V.annihilator()
    return TorusDivisor(
        [-1 if all(dot(w, r) == 0 for w in W) else 0 for r in F.rays]
    )


@dataclass(frozen=True)
class SingularLocus:
    """Cones whose orbit closures lie in ``Sing(F_V)``."""

    cones: tuple  # every singular cone, sorted by (size, indices)

    @property
    def minimal(self):
        return tuple(c for c in self.cones if not any(set(d) < set(c) for d in self.cones))

    @property
    def empty(self):
        return not self.cones

    def contains(self, cone):
        return tuple(sorted(cone)) in self.cones


def _chart_basis(F, cone):
    """Cone generators extended by standard vectors to a basis of ``Q^n``."""
    basis = [tuple(F.rays[i]) for i in cone]
    for j in range(F.n):
        if len(basis) == F.n:
            break
        e = tuple(int(i == j) for i in range(F.n))
        if rank(basis + [e]) > len(basis):
            basis.append(e)
    return basis


def chart_is_singular(F, V, cone, face):
    """Rank rule on the smooth cover of ``U_cone`` at the generic point of ``O(face)``.

    Coordinates are the generators of ``cone`` (completed to a basis).  The
    foliation is generated by ``d/dx_i`` for generators in ``V`` and by the
    Euler-type fields of ``V``; at ``O(face)`` the latter lose their
    ``face`` coordinates.
    """
    basis = _chart_basis(F, cone)
    cols = [tuple(b[i] for b in basis) for i in range(F.n)]
    coords = [solve(cols, v) for v in V.basis]
    face_pos = {cone.index(i) for i in face}
    rows = []
    for pos, i in enumerate(cone):
        if V.contains(F.rays[i]):
            rows.append(tuple(Fraction(int(j == pos)) for j in range(F.n)))
    for c in coords:
        rows.append(tuple(Fraction(0) if j in face_pos else x for j, x in enumerate(c)))
    return rank(rows) < V.rank


def singular_locus(F, V):
    singular = set()
    for cone in F.max_cones:
        for k in range(1, len(cone) + 1):
            for face in combinations(cone, k):
                if face in singular:
                    continue
                if chart_is_singular(F, V, cone, face):
                    singular.add(face)
    return SingularLocus(tuple(sorted(singular, key=lambda t: (len(t), t))))


def curve_tangent(F, V, wall):
    """Whether the invariant curve of an interior wall is tangent to ``F_V``."""
    if not hasattr(wall, "rays"):
        wall = find_wall(F, wall)
    if not wall.interior:
        raise TorfolError(f"wall {wall.rays} is on the boundary", kind="BoundaryWall")
    span = [F.rays[i] for i in wall.rays]
    return not all(in_span(b, span) for b in V.basis)


@dataclass(frozen=True)
class Dicriticality:
    dicritical: bool
    cone: tuple | None = None
    ray: tuple | None = None

    def __bool__(self):
        return self.dicritical


def is_dicritical(F, V, locus=None):
    """Look for a non-invariant exceptional ray centred in the singular locus.

    A singular cone ``tau`` whose relative interior meets ``V`` away from
    the origin yields such a ray; the first one in cone order is the witness.
    """
    locus = locus if locus is not None else singular_locus(F, V)
    for tau in locus.cones:
        p = relint_rational_point(RatCone(F.generators(tau), F.n), V.basis)
        if p is not None:
            return Dicriticality(True, tau, p)
    return Dicriticality(False)
