"""Discrepancies of toric exceptional divisors and terminal/canonical classification."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import ConsistencyError, TorfolError
from .exactlin import add, dot, frac_vector, int_vector, primitive_part, scale, solve
from .polycone import (
    RatCone,
    RatPolytope,
    hrep,
    intersect_subspace,
    lattice_points,
    subspace_equations,
)

TERMINAL = "terminal"
CANONICAL = "canonical_not_terminal"
NOT_CANONICAL = "not_canonical"
_RANK = {TERMINAL: 0, CANONICAL: 1, NOT_CANONICAL: 2}


@dataclass(frozen=True)
class ConeFunctional:
    """A linear functional on ``span(cone)`` with prescribed generator values.

    ``extension`` is one functional on all of ``N_Q`` restricting to it (the
    echelon-canonical solution); only its values on ``span(cone)`` matter.
    """

    generators: tuple
    values: tuple
    extension: tuple

    def __call__(self, x):
        return dot(self.extension, frac_vector(x))

    def __sub__(self, other):
        return ConeFunctional(
            self.generators,
            tuple(a - b for a, b in zip(self.values, other.values)),
            tuple(a - b for a, b in zip(self.extension, other.extension)),
        )


def cone_functional(generators, values):
    gens = tuple(tuple(g) for g in generators)
    values = tuple(Fraction(v) for v in values)
    ext = solve(list(gens), values)
    if ext is None:
        raise TorfolError("generators are not linearly independent", kind="NotSimplicial")
    return ConeFunctional(gens, values, ext)


@dataclass(frozen=True)
class ConeFunctionals:
    m_sigma: ConeFunctional
    m_prime: ConeFunctional
    m_sigma_V: ConeFunctional


def m_sigma_V(generators, V):
    """``m_sigma`` (all ones), ``m_sigma_V`` (one on generators in ``V``), and their difference."""
    inside = [1 if V.contains(g) else 0 for g in generators]
    m = cone_functional(generators, [1] * len(generators))
    mv = cone_functional(generators, inside)
    return ConeFunctionals(m, m - mv, mv)


def _cone_coordinates(generators, v):
    gens = [tuple(g) for g in generators]
    n = len(v)
    cols = [tuple(g[i] for g in gens) for i in range(n)]
    return solve(cols, v)


def discrepancy(generators, V, v, functionals=None):
    """Discrepancy of the divisor of the ray through ``v`` over ``U_sigma``.

    ``-1 + m_sigma_V(v)`` when ``v`` lies in ``V``, ``m_sigma_V(v)`` otherwise.
    """
    v = int_vector(v)
    if primitive_part(v) != v:
        raise TorfolError(f"{v} is not primitive", kind="NonPrimitive")
    gens = [tuple(g) for g in generators]
    lam = _cone_coordinates(gens, v)
    if lam is None or any(x < 0 for x in lam):
        raise TorfolError(f"{v} is not in the cone", kind="NotInCone")
    if v in gens:
        raise TorfolError(f"{v} spans an existing ray", kind="NotExceptional")
    mv = (functionals or m_sigma_V(gens, V)).m_sigma_V(v)
    return mv - 1 if V.contains(v) else mv


@dataclass(frozen=True)
class Witness:
    cone: tuple
    point: tuple
    discrepancy: Fraction


@dataclass
class ConeReport:
    cone: tuple
    verdict: str
    terminal_breakers: list = field(default_factory=list)
    canonical_breakers: list = field(default_factory=list)

    @property
    def witness(self):
        pool = self.canonical_breakers or self.terminal_breakers
        return min(pool, key=lambda w: w.point) if pool else None


@dataclass
class SingularityReport:
    verdict: str
    cones: list
    witness: Witness | None

    @property
    def is_terminal(self):
        return self.verdict == TERMINAL

    @property
    def is_canonical(self):
        return self.verdict != NOT_CANONICAL


def _pair_candidates(a, b):
    for c in ((1, 1), (2, 1), (1, 2)):
        yield primitive_part(add(scale(c[0], a), scale(c[1], b)))


def classify_cone(F, V, cone):
    gens = [F.rays[i] for i in cone]
    n = F.n
    fs = m_sigma_V(gens, V)
    m = fs.m_sigma_V
    if any(x < 0 for x in m.values):  # pragma: no cover - values are 0/1 by construction
        raise ConsistencyError("m_sigma_V negative on a generator")
    found = {}

    def record(point):
        if point in found or point in gens:
            return
        found[point] = discrepancy(gens, V, point, fs)

    # (a) two or more invariant generators: a 2-face with m = 0 off V
    outside = [g for g in gens if not V.contains(g)]
    for a, b in combinations(outside, 2):
        for p in _pair_candidates(a, b):
            record(p)

    # (b) extreme rays of sigma ∩ V on which m vanishes
    cap = intersect_subspace(RatCone(gens, n), V.basis)
    zero_ray = False
    for u in cap.generators:
        u = int_vector(u)
        val = m(u)
        if val < 0:  # pragma: no cover - m >= 0 on sigma
            raise ConsistencyError("m_sigma_V negative on sigma ∩ V")
        if val == 0:
            zero_ray = True
            record(u)

    # (c) m > 0 on the cap: list its lattice points with m <= 1
    if not zero_ray and cap.generators:
        h = hrep(RatCone(gens, n))
        eqs = list(h.equations) + subspace_equations(V.basis, n)
        P = RatPolytope(
            n,
            [(tuple(-x for x in f), 0) for f in h.inequalities] + [(m.extension, 1)],
            [(e, 0) for e in eqs],
        )
        for p in lattice_points(P):
            if all(x == 0 for x in p):
                continue
            record(primitive_part(p))

    report = ConeReport(tuple(cone), TERMINAL)
    for point in sorted(found):
        w = Witness(tuple(cone), point, found[point])
        if w.discrepancy < 0:
            report.canonical_breakers.append(w)
        elif w.discrepancy == 0:
            report.terminal_breakers.append(w)
    if report.canonical_breakers:
        report.verdict = NOT_CANONICAL
    elif report.terminal_breakers:
        report.verdict = CANONICAL
    return report


def classify(F, V):
    """Terminal / canonical classification of ``(X_F, F_V)`` with a witness.

    Only primitive lattice points off the existing rays count as exceptional
    candidates.  Per maximal cone: an invariant 2-face gives a
    discrepancy-zero divisor; an extreme ray of ``sigma ∩ V`` where
    ``m_sigma_V`` vanishes gives discrepancy ``-1``; otherwise the bounded
    region ``{m_sigma_V <= 1}`` of ``sigma ∩ V`` is enumerated exactly.
    """
    reports = [classify_cone(F, V, c) for c in F.max_cones]
    verdict = max((r.verdict for r in reports), key=_RANK.__getitem__, default=TERMINAL)
    witness = None
    if verdict != TERMINAL:
        pool = [
            w
            for r in reports
            for w in (r.canonical_breakers if verdict == NOT_CANONICAL else r.terminal_breakers)
        ]
        witness = min(pool, key=lambda w: (w.point, w.cone))
    return SingularityReport(verdict, reports, witness)
