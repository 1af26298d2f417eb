"""Wall relations, curve classes, extremal rays, contractions, flips and the MMP driver."""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ConeHasLinealityError,
    ConsistencyError,
    FanError,
    FlipCapExceeded,
    TorfolError,
    UnsupportedError,
)
from .exactlin import (
    cone_multiplicity,
    dot,
    integral_direction,
    row_space_basis,
    solve,
)
from .fan import (
    FanData,
    find_wall,
    interior_walls,
    is_complete,
    opposite_ray,
    quotient_fan,
    validate,
)
from .foliation import (
    FoliationDatum,
    canonical_divisor,
    curve_tangent,
    is_dicritical,
    rays_in_V,
)
from .polycone import RatCone, extreme_rays
from .singclass import classify

FIBRE = "fibre"
DIVISORIAL = "divisorial"
SMALL = "small"


@dataclass(frozen=True)
class WallRelation:
    """``sum a_i v_i = 0`` over the rays of a wall and its two opposite rays.

    ``rays`` lists the wall's rays (sorted) followed by ``v_n`` and
    ``v_{n+1}``, the opposite rays of the first and second side.
    """

    wall: object
    rays: tuple
    coeffs: tuple

    def coefficient(self, ray):
        return self.coeffs[self.rays.index(ray)] if ray in self.rays else Fraction(0)

    @property
    def alpha(self):
        return tuple(sorted(r for r, a in zip(self.rays, self.coeffs) if a < 0))

    @property
    def zero(self):
        return tuple(sorted(r for r, a in zip(self.rays, self.coeffs) if a == 0))

    @property
    def beta(self):
        return tuple(sorted(r for r, a in zip(self.rays, self.coeffs) if a > 0))


@dataclass(frozen=True)
class CurveClass:
    """Intersection numbers ``D_rho . C`` for every ray, for the curve of ``wall``."""

    wall: object
    intersections: tuple

    @property
    def direction(self):
        return integral_direction(self.intersections)


def _as_wall(F, wall):
    return wall if hasattr(wall, "rays") else find_wall(F, wall)


def _mult(F, cone):
    return cone_multiplicity(F.generators(cone)) if cone else 1


def wall_relation(F, wall):
    """The linear relation among ``v_1 .. v_{n+1}`` normalised by multiplicities.

    ``a_{n+1} = mult(wall) / mult(<wall, v_{n+1}>)``; on smooth fans this is 1.
    """
    wall = _as_wall(F, wall)
    if not wall.interior:
        raise FanError(f"wall {wall.rays} has only one side", kind="BoundaryWall")
    side_n, side_n1 = wall.sides
    vn, vn1 = opposite_ray(wall, side_n), opposite_ray(wall, side_n1)
    order = tuple(wall.rays) + (vn, vn1)
    m_w = _mult(F, wall.rays)
    a_last = Fraction(m_w, _mult(F, side_n1))
    basis = [F.rays[i] for i in order[:-1]]
    cols = [tuple(b[k] for b in basis) for k in range(F.n)]
    rest = solve(cols, tuple(-a_last * x for x in F.rays[vn1]))
    coeffs = tuple(rest) + (a_last,)
    if coeffs[-2] != Fraction(m_w, _mult(F, side_n)):
        raise ConsistencyError(f"multiplicity normalisation fails on wall {wall.rays}")
    return WallRelation(wall, order, coeffs)


def curve_class(F, wall):
    rel = wall_relation(F, wall)
    return CurveClass(rel.wall, tuple(rel.coefficient(i) for i in range(len(F.rays))))


def kf_dot(F, V, wall):
    """``K_F . C`` for the invariant curve of ``wall``."""
    return canonical_divisor(F, V).dot(curve_class(F, wall).intersections)


@dataclass
class ExtremalRay:
    direction: tuple
    walls: list

    @property
    def representative(self):
        return self.walls[0]


def extremal_rays(F):
    """Extreme rays of the cone of curves, each with every wall whose class lies on it."""
    if not is_complete(F):
        raise UnsupportedError("the fan is not complete", kind="RequiresComplete")
    classes = [curve_class(F, w) for w in interior_walls(F)]
    try:
        dirs = extreme_rays(RatCone([c.intersections for c in classes], len(F.rays)))
    except ConeHasLinealityError:
        raise UnsupportedError("the cone of curves is not pointed", kind="NotProjective")
    out = []
    for d in dirs:
        ws = [c.wall for c in classes if c.direction == d]
        out.append(ExtremalRay(d, ws))
    out.sort(key=lambda R: R.representative.rays)
    return out


@dataclass(frozen=True)
class Contraction:
    kind: str
    ray: int | None = None  # contracted ray for divisorial contractions


def contraction_kind(F, R):
    rel = wall_relation(F, R.representative if isinstance(R, ExtremalRay) else R)
    alpha = rel.alpha
    if not alpha:
        return Contraction(FIBRE)
    if len(alpha) == 1:
        return Contraction(DIVISORIAL, alpha[0])
    return Contraction(SMALL)


def classify_contraction(F, V, R):
    value = kf_dot(F, V, R.representative)
    if value >= 0:
        raise TorfolError(f"K_F . R = {value} is not negative", kind="NotNegative")
    return contraction_kind(F, R)


def _exchange_circuits(F, walls):
    """Swap the positive-side triangulation of every ``tau(wall)`` for the negative side."""
    removed, added = set(), set()
    for w in walls:
        rel = wall_relation(F, w)
        every = set(rel.rays)
        for j in rel.beta:
            removed.add(tuple(sorted(every - {j})))
        for j in rel.alpha:
            added.add(tuple(sorted(every - {j})))
    missing = removed - set(F.max_cones)
    if missing:
        raise FanError(
            f"cones {sorted(missing)} of the wall circuits are not in the fan", kind="NotFlippable"
        )
    return (set(F.max_cones) - removed) | added


def _walls_of(R):
    return R.walls if isinstance(R, ExtremalRay) else [R]


def contract_divisorial(F, R):
    """Remove the contracted ray and merge the cones around it."""
    kind = contraction_kind(F, R.representative if isinstance(R, ExtremalRay) else R)
    if kind.kind != DIVISORIAL:
        raise TorfolError(f"contraction is of {kind.kind} type", kind="NotDivisorial")
    u = kind.ray
    cones = _exchange_circuits(F, _walls_of(R))
    if any(u in c for c in cones):
        raise FanError(f"ray {u} survives the contraction", kind="NonQFactorialResult")
    remap = {i: i - (i > u) for i in range(len(F.rays)) if i != u}
    G = FanData(
        F.n,
        [r for i, r in enumerate(F.rays) if i != u],
        [tuple(remap[i] for i in c) for c in cones],
    )
    problems = validate(G)
    if problems:
        raise FanError("; ".join(map(str, problems)), kind="NonQFactorialResult")
    return G


def flip(F, R):
    """The toric flip along ``R``; rays are unchanged, only the cones move."""
    kind = contraction_kind(F, R.representative if isinstance(R, ExtremalRay) else R)
    if kind.kind != SMALL:
        raise TorfolError(f"contraction is of {kind.kind} type", kind="NotSmall")
    G = FanData(F.n, F.rays, _exchange_circuits(F, _walls_of(R)))
    problems = validate(G)
    if problems:
        raise ConsistencyError("flip produced an invalid fan: " + "; ".join(map(str, problems)))
    return G


def flip_wall(F, wall):
    """Flip a single interior wall (need not be extremal; fan need not be complete)."""
    return flip(F, _as_wall(F, wall))


def flipped_wall(F, wall):
    """The wall of the flipped fan that replaces ``wall`` (rays of the circuit minus two negatives)."""
    rel = wall_relation(F, _as_wall(F, wall))
    a, b = rel.alpha[:2]
    return tuple(sorted(set(rel.rays) - {a, b}))


@dataclass
class Pullback:
    """Quotient along the span ``V'`` of the rays inside ``V``."""

    V_prime: tuple
    quotient: object
    induced_basis: tuple

    @property
    def induced_rank(self):
        return len(self.induced_basis)

    def induced_foliation(self):
        q = self.quotient
        if not q.is_fan or not 0 < self.induced_rank < q.lattice_rank:
            return None
        return FoliationDatum(self.induced_basis, q.lattice_rank)


def detect_pullback(F, V):
    inside = rays_in_V(F, V)
    if not inside:
        return None
    V_prime = tuple(row_space_basis([F.rays[i] for i in inside], F.n))
    q = quotient_fan(F, V_prime)
    images = [q.project(b) for b in V.basis]
    induced = tuple(row_space_basis(images, q.lattice_rank)) if q.lattice_rank else ()
    return Pullback(V_prime, q, induced)


@dataclass
class MmpOptions:
    max_flips: int = 1000
    pick: object = "lex"  # "lex" or a sequence of wall ray-index tuples, one per step
    allow_noncanonical: bool = False
    strict: bool = False  # raise instead of recording consistency violations


@dataclass
class MmpStep:
    index: int
    wall: tuple
    walls: list
    direction: tuple
    kind: str
    kf_dot: Fraction
    contracted_ray: tuple | None
    fan_before: FanData
    fan_after: FanData | None
    picard_before: int
    picard_after: int
    dicritical_before: bool
    dicritical_after: bool | None
    pullback: Pullback | None = None


@dataclass
class MmpTrace:
    fan: FanData
    foliation: FoliationDatum
    initial_verdict: str
    noncanonical_override: bool
    steps: list = field(default_factory=list)
    outcome: str = ""  # "nef" | "fibration"
    final_fan: FanData | None = None
    violations: list = field(default_factory=list)

    @property
    def flips(self):
        return sum(1 for s in self.steps if s.kind == SMALL)


def _choose(F, negative, options, step):
    picks = [] if options.pick == "lex" else list(options.pick)
    if step < len(picks):
        want = tuple(sorted(picks[step]))
        for R in negative:
            for w in R.walls:
                if w.rays == want:
                    return R, w
        raise TorfolError(f"wall {want} is not in a K_F-negative extremal ray", kind="BadPick")
    R = negative[0]
    return R, R.representative


def run_mmp(F, V, options=None):
    """Run the toric foliated MMP until ``K_F`` is nef or a fibre-type step occurs."""
    options = options or MmpOptions()
    problems = validate(F)
    if problems:
        raise UnsupportedError("; ".join(map(str, problems)), kind="InvalidFan")
    if not is_complete(F):
        raise UnsupportedError("the fan is not complete", kind="RequiresComplete")
    report = classify(F, V)
    if not report.is_canonical and not options.allow_noncanonical:
        raise UnsupportedError(
            f"foliation is {report.verdict} (witness {report.witness.point}, discrepancy "
            f"{report.witness.discrepancy}); pass the override to run anyway",
            kind="NotCanonical",
        )
    trace = MmpTrace(F, V, report.verdict, not report.is_canonical)

    def violation(message):
        if options.strict:
            raise ConsistencyError(message)
        trace.violations.append(message)

    flips = 0
    step = 0
    while True:
        rays = extremal_rays(F)
        negative = [R for R in rays if kf_dot(F, V, R.representative) < 0]
        if not negative:
            trace.outcome = "nef"
            trace.final_fan = F
            return trace
        R, wall = _choose(F, negative, options, step)
        if not any(curve_tangent(F, V, w) for w in R.walls):
            violation(f"step {step}: K_F-negative extremal ray without a tangent wall")
        kind = contraction_kind(F, wall)
        before = bool(is_dicritical(F, V))
        value = kf_dot(F, V, wall)
        record = dict(
            index=step,
            wall=wall.rays,
            walls=[w.rays for w in R.walls],
            direction=R.direction,
            kind=kind.kind,
            kf_dot=value,
            contracted_ray=None,
            fan_before=F,
            picard_before=F.picard_number,
            dicritical_before=before,
        )
        if kind.kind == FIBRE:
            pb = detect_pullback(F, V)
            induced = pb.induced_foliation() if pb else None
            after = bool(is_dicritical(pb.quotient.fan, induced)) if induced else False
            trace.steps.append(
                MmpStep(
                    **record,
                    fan_after=None,
                    picard_after=F.picard_number - 1,
                    dicritical_after=after,
                    pullback=pb,
                )
            )
            if not before and after:
                violation(f"step {step}: fibration base foliation became dicritical")
            trace.outcome = "fibration"
            trace.final_fan = F
            return trace
        if kind.kind == DIVISORIAL:
            record["contracted_ray"] = F.rays[kind.ray]
            G = contract_divisorial(F, R)
        else:
            flips += 1
            if flips > options.max_flips:
                raise FlipCapExceeded(f"more than {options.max_flips} flips")
            G = flip(F, R)
        if not is_complete(G):
            raise ConsistencyError(f"step {step}: result is not complete")
        after = bool(is_dicritical(G, V))
        trace.steps.append(
            MmpStep(**record, fan_after=G, picard_after=G.picard_number, dicritical_after=after)
        )
        if not before and after:
            violation(f"step {step}: {kind.kind} step made the foliation dicritical")
        if kind.kind == DIVISORIAL and not G.picard_number < F.picard_number:
            violation(f"step {step}: Picard number did not drop")
        if kind.kind == SMALL and G.picard_number != F.picard_number:
            violation(f"step {step}: Picard number changed across a flip")
        F = G
        step += 1
