"""Simplicial fans: validation, walls, star subdivisions, quotients, completeness."""

from dataclasses import dataclass, field
from itertools import combinations

from .errors import FanError, FanValidationError
from .exactlin import (
    dot,
    int_vector,
    integral_direction,
    is_zero,
    orthogonal_complement,
    primitive_part,
    rank,
    row_space_basis,
    smith_normal_form,
    solve,
)
from .polycone import RatCone, dd_extreme_rays, hrep


@dataclass(frozen=True)
class FanData:
    """A fan in ``Z^lattice_rank``.

    ``rays`` keep their input order; ``max_cones`` are stored as sorted index
    tuples in lexicographic order.  Construction is cheap and does not
    validate -- call :func:`validate` or :func:`require_valid`.
    """

    lattice_rank: int
    rays: tuple
    max_cones: tuple

    def __init__(self, lattice_rank, rays, max_cones):
        object.__setattr__(self, "lattice_rank", int(lattice_rank))
        object.__setattr__(self, "rays", tuple(int_vector(r) for r in rays))
        cones = sorted({tuple(sorted(int(i) for i in c)) for c in max_cones})
        object.__setattr__(self, "max_cones", tuple(cones))

    @property
    def n(self):
        return self.lattice_rank

    @property
    def picard_number(self):
        return len(self.rays) - self.lattice_rank

    def generators(self, cone):
        return [self.rays[i] for i in cone]

    def ray_index(self, v):
        v = tuple(v)
        try:
            return self.rays.index(v)
        except ValueError:
            return None

    def faces(self):
        """Every cone of the fan (including the zero cone), sorted by (size, indices)."""
        seen = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                seen.update(combinations(c, k))
        return sorted(seen, key=lambda t: (len(t), t))

    def full_dimensional_cones(self):
        return [c for c in self.max_cones if len(c) == self.n]


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Wall:
    """A codimension-one face of a full-dimensional maximal cone."""

    rays: tuple
    sides: tuple  # the one or two maximal cones (as ray-index tuples) containing it

    @property
    def interior(self):
        return len(self.sides) == 2


def validate(F):
    """Return the list of all violations (empty means the fan is valid)."""
    out = []
    n = F.n
    for i, r in enumerate(F.rays):
        if len(r) != n:
            out.append(Violation("DimensionMismatch", f"ray {i} has length {len(r)}"))
            continue
        if is_zero(r):
            out.append(Violation("ZeroRay", f"ray {i}"))
        elif primitive_part(r) != r:
            out.append(Violation("NonPrimitiveRay", f"ray {i} = {r}"))
    if out:
        return out
    for i, j in combinations(range(len(F.rays)), 2):
        if F.rays[i] == F.rays[j]:
            out.append(Violation("DuplicateRay", f"rays {i} and {j} = {F.rays[i]}"))
    used = set()
    for c in F.max_cones:
        if any(i < 0 or i >= len(F.rays) for i in c):
            out.append(Violation("BadRayIndex", f"cone {c}"))
            continue
        used.update(c)
        if rank(F.generators(c)) != len(c):
            out.append(Violation("NonSimplicialCone", f"cone {c}"))
    for i in range(len(F.rays)):
        if i not in used:
            out.append(Violation("UnusedRay", f"ray {i}"))
    for a, b in combinations(F.max_cones, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            out.append(Violation("NonMaximalCone", f"{a} and {b}"))
    if out:
        return out
    hreps = {c: hrep(RatCone(F.generators(c), n)) for c in F.max_cones}
    for a, b in combinations(F.max_cones, 2):
        common = set(a) & set(b)
        ha, hb = hreps[a], hreps[b]
        rays = dd_extreme_rays(ha.inequalities + hb.inequalities, ha.equations + hb.equations, n)
        if any(F.ray_index(r) not in common for r in rays):
            out.append(Violation("BadIntersection", f"cones {a} and {b} do not meet in a common face"))
    return out


def require_valid(F):
    problems = validate(F)
    if problems:
        raise FanValidationError(problems)
    return F


def walls(F):
    """All codimension-one faces of full-dimensional maximal cones, sorted."""
    sides = {}
    for c in F.full_dimensional_cones():
        for w in combinations(c, F.n - 1):
            sides.setdefault(w, []).append(c)
    return [Wall(w, tuple(sorted(s))) for w, s in sorted(sides.items())]


def interior_walls(F):
    return [w for w in walls(F) if w.interior]


def find_wall(F, ray_indices):
    key = tuple(sorted(ray_indices))
    for w in walls(F):
        if w.rays == key:
            return w
    raise FanError(f"{key} is not a wall of the fan", kind="NoSuchWall")


def opposite_ray(wall, side):
    (extra,) = set(side) - set(wall.rays)
    return extra


def barycentric(F, cone, v):
    """Coordinates of ``v`` in the generators of a simplicial cone, or ``None``."""
    gens = F.generators(cone)
    cols = [tuple(g[i] for g in gens) for i in range(F.n)]
    return solve(cols, v)


def minimal_cone_containing(F, v):
    """The smallest cone of ``F`` containing ``v`` (as ray indices), or ``None``."""
    for c in F.max_cones:
        lam = barycentric(F, c, v)
        if lam is not None and all(x >= 0 for x in lam):
            return tuple(i for i, x in zip(c, lam) if x > 0)
    return None


def star_subdivide(F, v):
    """Stellar subdivision of ``F`` at the primitive vector ``v``.

    The new ray is appended to the ray list.  Every maximal cone containing
    the minimal cone ``tau`` of ``v`` is replaced by the cones obtained by
    swapping one ray of ``tau`` for ``v``.
    """
    v = int_vector(v)
    if len(v) != F.n:
        raise FanError(f"{v} does not live in Z^{F.n}", kind="DimensionMismatch")
    if primitive_part(v) != v:
        raise FanError(f"{v} is not primitive", kind="NonPrimitiveRay")
    if v in F.rays:
        raise FanError(f"{v} is already a ray", kind="RayExists")
    tau = minimal_cone_containing(F, v)
    if tau is None:
        raise FanError(f"{v} is outside the support", kind="OutsideSupport")
    if len(tau) == 1:  # pragma: no cover - primitive multiple of an existing ray
        raise FanError(f"{v} lies on ray {tau[0]}", kind="RayExists")
    new = len(F.rays)
    cones = []
    for c in F.max_cones:
        if set(tau) <= set(c):
            for t in tau:
                cones.append(tuple(sorted((set(c) - {t}) | {new})))
        else:
            cones.append(c)
    return FanData(F.n, F.rays + (v,), cones)


def is_complete(F):
    """Support equals ``N_R``.

    Checked as: every maximal cone is full-dimensional and every wall has a
    neighbour on the other side, i.e. no cone has an uncovered facet.
    """
    if not F.max_cones or any(len(c) != F.n for c in F.max_cones):
        return False
    for w in walls(F):
        if not w.interior:
            return False
        a, b = w.sides
        normal = _wall_normal(F, w)
        if dot(normal, F.rays[opposite_ray(w, a)]) * dot(normal, F.rays[opposite_ray(w, b)]) >= 0:
            return False
    return True


def _wall_normal(F, w):
    (normal,) = orthogonal_complement(F.generators(w.rays), F.n)
    return normal


@dataclass
class QuotientFan:
    """Projection of a fan along a rational subspace ``V'``.

    ``projection`` is the integer matrix of ``N -> N' = N/(N ∩ V')``.
    ``cones`` are the maximal simplicial image cones; images that are not
    simplicial (so cannot be a single cone of the quotient) are listed in
    ``offending``.  ``is_fan`` says whether ``cones`` form a fan using every
    projected ray; ``is_morphism`` additionally requires every maximal cone
    to land inside one of them.  Otherwise the induced rational map is only
    defined in codimension one.
    """

    lattice_rank: int
    projection: list
    rays: list
    cones: list
    ray_images: dict
    is_fan: bool
    is_morphism: bool
    offending: list = field(default_factory=list)
    issues: list = field(default_factory=list)

    @property
    def fan(self):
        if not self.is_fan:
            return None
        return FanData(self.lattice_rank, self.rays, self.cones)

    def project(self, v):
        return tuple(dot(row, v) for row in self.projection)


def quotient_lattice_map(V_prime, n):
    """Integer matrix of ``Z^n -> Z^n / (Z^n ∩ span V')`` read off the Smith form."""
    basis = [integral_direction(b) for b in row_space_basis(V_prime, n)] if V_prime else []
    k = len(basis)
    if k == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    _, _, W = smith_normal_form(basis)
    # rows of W^-1 form a basis of Z^n whose first k span N ∩ V'; x -> x W
    return [tuple(W[i][j] for i in range(n)) for j in range(k, n)]


def quotient_fan(F, V_prime):
    n = F.n
    P = quotient_lattice_map(V_prime, n)
    m = len(P)
    rays, images = [], {}
    for i, r in enumerate(F.rays):
        img = tuple(dot(row, r) for row in P)
        if is_zero(img):
            images[i] = None
            continue
        img = primitive_part(img)
        if img not in rays:
            rays.append(img)
        images[i] = rays.index(img)
    if m == 0:
        return QuotientFan(0, P, [], [()], images, True, True)
    image_of = {c: tuple(sorted({images[i] for i in c if images[i] is not None})) for c in F.max_cones}
    issues, offending = [], []
    good = set()
    for c, img in image_of.items():
        if not img or rank([rays[i] for i in img]) == len(img):
            good.add(img)
        else:
            offending.append(c)
            issues.append(Violation("ImageNotInOneCone", f"cone {c} projects onto non-simplicial {img}"))
    cones = sorted(c for c in good if not any(set(c) < set(d) for d in good))
    cones = [c for c in cones if c] or [()]
    trial = FanData(m, rays, [c for c in cones if c])
    problems = validate(trial) if trial.max_cones else [Violation("EmptyFan", "no image cones")]
    issues.extend(problems)
    is_fan = not problems
    is_morphism = is_fan and not offending
    return QuotientFan(m, P, rays, cones, images, is_fan, is_morphism, offending, issues)
