"""Brute-force oracles for the main formulas, and seeded random fans."""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .errors import ConsistencyError, TorfolError
from .exactlin import cone_multiplicity, dot, frac_vector, primitive_part, rank, solve
from .fan import FanData, is_complete, minimal_cone_containing, star_subdivide, walls
from .foliation import (
    FoliationDatum,
    TorusDivisor,
    c1_from_filtration,
    canonical_divisor,
    canonical_divisor_via_conormal,
    conormal_filtration,
    cotangent_filtration,
    curve_tangent,
    foliation_filtration,
    singular_locus,
)
from .mori import curve_class, extremal_rays, kf_dot
from .singclass import discrepancy

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class SupportFunction:
    """Piecewise linear function given by one functional per maximal cone."""

    fan: FanData
    divisor: TorusDivisor
    functionals: dict

    def evaluate(self, x):
        x = frac_vector(x)
        cone = minimal_cone_containing(self.fan, x)
        if cone is None:
            raise TorfolError(f"{x} is outside the support", kind="OutsideSupport")
        for c, m in self.functionals.items():
            if set(cone) <= set(c):
                return dot(m, x)
        raise ConsistencyError(f"no maximal cone contains {cone}")  # pragma: no cover

    def to_divisor(self):
        coeffs = []
        for i, r in enumerate(self.fan.rays):
            c = next(c for c in self.functionals if i in c)
            coeffs.append(-dot(self.functionals[c], r))
        return TorusDivisor(coeffs)


def support_function(F, D):
    """Per-cone functionals ``m`` with ``<m, v_rho> = -a_rho`` for ``D = sum a_rho D_rho``."""
    D = D if isinstance(D, TorusDivisor) else TorusDivisor(D)
    funcs = {}
    for c in F.max_cones:
        gens = F.generators(c)
        m = solve(gens, [-D.coeffs[i] for i in c])
        if m is None:  # pragma: no cover - simplicial cones always solve
            raise ConsistencyError(f"divisor is not Q-Cartier on cone {c}")
        funcs[c] = m
    # agreement on shared faces
    for a, b in combinations(F.max_cones, 2):
        for i in set(a) & set(b):
            if dot(funcs[a], F.rays[i]) != dot(funcs[b], F.rays[i]):  # pragma: no cover
                raise ConsistencyError(f"functionals of {a} and {b} disagree on ray {i}")
    return SupportFunction(F, D, funcs)


def discrepancy_oracle(F, V, v):
    """Discrepancy of the new divisor after star-subdividing at ``v``.

    Coefficient of the new ray in ``K_{F'} - phi^* K_F``, where the pullback
    is read off the support function of ``K_F``.
    """
    G = star_subdivide(F, v)
    new = len(G.rays) - 1
    kf_new = canonical_divisor(G, V).coeffs[new]
    psi = support_function(F, canonical_divisor(F, V))
    # phi^* K_F has coefficient -psi(v) on the new ray
    return kf_new + psi.evaluate(G.rays[new])


def _det(M):
    """Determinant by permutation expansion (small matrices only)."""
    k = len(M)
    total = Fraction(0)
    for perm in permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= M[i][j]
            if term == 0:
                break
        total += term
    return total


def _has_nonzero_minor(A, r):
    cols = len(A[0]) if A else 0
    for chosen in combinations(range(cols), r):
        if _det([[row[j] for j in chosen] for row in A]) != 0:
            return True
    return False


def generator_matrix(F, V, cone, point):
    """Coefficient matrix of the local generators of ``F_V`` on a smooth chart, at ``point``.

    Columns are the coordinates dual to the cone's generators; rows are
    ``d/dx_i`` for generators in ``V`` followed by the Euler fields
    ``delta_w`` of a completing basis of ``V``.
    """
    gens = F.generators(cone)
    n = F.n
    # dual basis m_j:  <m_j, v_i> = [i == j]
    duals = [solve(gens, [int(i == j) for i in range(n)]) for j in range(n)]
    inside = [j for j, g in enumerate(gens) if V.contains(g)]
    basis = [frac_vector(gens[j]) for j in inside]
    for b in V.basis:
        if rank(basis + [b]) > len(basis):
            basis.append(b)
    rows = [[Fraction(int(j == i)) for j in range(n)] for i in inside]
    for w in basis[len(inside):]:
        rows.append([dot(duals[j], w) * point[j] for j in range(n)])
    return rows


def minor_rank_oracle(F, cone, V, face):
    """Whether ``F_V`` is singular along the orbit of ``face`` inside the smooth chart ``cone``."""
    cone = tuple(cone)
    if len(cone) != F.n or cone_multiplicity(F.generators(cone)) != 1:
        raise TorfolError(f"cone {cone} is not a smooth full-dimensional cone", kind="SmoothChartOnly")
    pos = {cone.index(i) for i in face}
    verdicts = []
    for shift in (0, F.n):
        point = [0 if j in pos else PRIMES[j + shift] for j in range(F.n)]
        verdicts.append(not _has_nonzero_minor(generator_matrix(F, V, cone, point), V.rank))
    if verdicts[0] != verdicts[1]:  # pragma: no cover - generic points agree
        raise ConsistencyError(f"generic evaluations disagree on face {face}")
    return verdicts[0]


def smooth_cones(F):
    return [c for c in F.full_dimensional_cones() if cone_multiplicity(F.generators(c)) == 1]


def singular_locus_agreement(F, V):
    """Compare :func:`singular_locus` with the minor oracle on every face of every smooth cone."""
    locus = singular_locus(F, V)
    mismatches = []
    for c in smooth_cones(F):
        for k in range(len(c) + 1):
            for face in combinations(c, k):
                if minor_rank_oracle(F, c, V, face) != locus.contains(face):
                    mismatches.append((c, face))
    return mismatches


def canonical_divisor_three_ways(F, V):
    """``K_F`` from ray membership, from the filtration of ``F_V``, and from the conormal sheaf."""
    direct = canonical_divisor(F, V)
    via_filtration = -c1_from_filtration(F, foliation_filtration(F, V))
    k_x = c1_from_filtration(F, cotangent_filtration(F))
    via_conormal = k_x - c1_from_filtration(F, conormal_filtration(F, V))
    return direct, via_filtration, via_conormal, canonical_divisor_via_conormal(F, V)


def principal_divisor_defects(F, characters):
    """``sum <m, v_rho> (D_rho . C)`` for every interior wall class and character ``m`` (all should be 0)."""
    out = []
    for w in walls(F):
        if not w.interior:
            continue
        C = curve_class(F, w).intersections
        for m in characters:
            out.append((w.rays, tuple(m), sum(dot(m, r) * c for r, c in zip(F.rays, C))))
    return out


@dataclass(frozen=True)
class RandomFanSpec:
    seed: int
    rank: int
    base: str = "projective"  # or "p1product"
    subdivisions: int = 0


def base_fan(kind, n):
    e = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if kind == "projective":
        rays = e + [tuple([-1] * n)]
        return FanData(n, rays, list(combinations(range(n + 1), n)))
    if kind == "p1product":
        rays = e + [tuple(-x for x in v) for v in e]
        cones = []
        for signs in range(2 ** n):
            cones.append(tuple(i + n * ((signs >> i) & 1) for i in range(n)))
        return FanData(n, rays, cones)
    raise ValueError(f"unknown base fan {kind!r}")


def random_subdivision_point(F, rng):
    """A primitive point in the relative interior of a random face of dimension >= 2."""
    cone = rng.choice(F.max_cones)
    k = rng.randint(2, len(cone))
    face = rng.sample(cone, k)
    coeffs = [rng.randint(1, 2) for _ in face]
    v = [0] * F.n
    for c, i in zip(coeffs, face):
        v = [a + c * b for a, b in zip(v, F.rays[i])]
    return primitive_part(v)


def random_subspace(F, rng, dim=None):
    n = F.n
    dim = dim or rng.randint(1, n - 1)
    vectors = []
    if rng.random() < 0.5:
        vectors.append(rng.choice(F.rays))
    while len(vectors) < dim:
        cand = tuple(Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2))) for _ in range(n))
        if rank(vectors + [cand]) > len(vectors):
            vectors.append(cand)
    return FoliationDatum(vectors, n)


def random_complete_fan(spec):
    """Seeded complete simplicial fan plus a random rational foliation of rank ``1..n-1``."""
    rng = random.Random(spec.seed)
    F = base_fan(spec.base, spec.rank)
    for _ in range(spec.subdivisions):
        F = star_subdivide(F, random_subdivision_point(F, rng))
    if not is_complete(F):  # pragma: no cover - star subdivision keeps the support
        raise ConsistencyError("random fan is not complete")
    return F, random_subspace(F, rng)


def exceptional_candidates(F, rng, count, height=3):
    """Up to ``count`` random primitive points in relative interiors of faces of dimension >= 2.

    Drawn from the points ``sum c_i v_i`` with ``1 <= c_i <= height`` over such faces.
    """
    pool = set()
    for cone in F.max_cones:
        for k in range(2, len(cone) + 1):
            for face in combinations(cone, k):
                for coeffs in product(range(1, height + 1), repeat=k):
                    v = [0] * F.n
                    for c, i in zip(coeffs, face):
                        v = [a + c * b for a, b in zip(v, F.rays[i])]
                    pool.add(primitive_part(v))
    pool = sorted(pool - set(F.rays))
    return rng.sample(pool, min(count, len(pool)))


def discrepancy_agreement(F, V, points):
    """``(point, formula, oracle)`` for every point where the two discrepancies differ."""
    out = []
    for v in points:
        tau = minimal_cone_containing(F, v)
        cone = next(c for c in F.max_cones if set(tau) <= set(c))
        a, b = discrepancy(F.generators(cone), V, v), discrepancy_oracle(F, V, v)
        if a != b:
            out.append((tuple(v), a, b))
    return out


def cone_theorem_failures(F, V):
    """K_F-negative extremal rays none of whose walls is tangent to the foliation."""
    bad = []
    for R in extremal_rays(F):
        if kf_dot(F, V, R.representative) < 0 and not any(curve_tangent(F, V, w) for w in R.walls):
            bad.append(R)
    return bad


def run_suite(F, V, seed=0, candidates=20, characters=10):
    """Every oracle applicable to ``(F, V)``; returns ``(name, passed, detail)`` triples."""
    rng = random.Random(seed)
    results = []
    ways = canonical_divisor_three_ways(F, V)
    results.append(("canonical divisor three ways", all(w == ways[0] for w in ways), ways[0].pretty(F.rays)))
    K = ways[0]
    results.append(("support function round trip", support_function(F, K).to_divisor() == K, ""))
    points = [] if all(len(c) < 2 for c in F.max_cones) else exceptional_candidates(F, rng, candidates)
    bad = discrepancy_agreement(F, V, points)
    results.append(("discrepancy oracle", not bad, f"{len(points)} candidates" + (f", mismatches {bad}" if bad else "")))
    smooth = smooth_cones(F)
    mism = singular_locus_agreement(F, V)
    results.append(("singular locus minor oracle", not mism, f"{len(smooth)} smooth cones" + (f", mismatches {mism}" if mism else "")))
    chars = [tuple(rng.randint(-5, 5) for _ in range(F.n)) for _ in range(characters)]
    defects = [d for d in principal_divisor_defects(F, chars) if d[2] != 0]
    results.append(("principal divisors kill curve classes", not defects, f"{characters} characters"))
    if is_complete(F):
        fails = cone_theorem_failures(F, V)
        results.append(("negative extremal rays have tangent walls", not fails, ""))
    return results
