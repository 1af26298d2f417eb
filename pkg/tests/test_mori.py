import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fans import V1, V_SQUARE, V, bl_p2, c2_blowup, c3, complete_suite, p1xp1, p2, p3, square_left, square_right
from torfol.errors import FlipCapExceeded, TorfolError
from torfol.exactlin import dot
from torfol.fan import FanData, find_wall, interior_walls, is_complete, validate
from torfol.foliation import canonical_divisor, curve_tangent, is_dicritical, singular_locus
from torfol.mori import (
    DIVISORIAL,
    FIBRE,
    SMALL,
    MmpOptions,
    classify_contraction,
    contract_divisorial,
    contraction_kind,
    curve_class,
    detect_pullback,
    extremal_rays,
    flip,
    flip_wall,
    flipped_wall,
    kf_dot,
    run_mmp,
    wall_relation,
)
from torfol.verify import RandomFanSpec, random_complete_fan

E1_2 = V((1, 0))
E1_3 = V((1, 0, 0))


def test_wall_relation_square():
    rel = wall_relation(square_left(), (0, 1))
    assert rel.rays == (0, 1, 2, 3)
    assert rel.coeffs == (-1, -1, 1, 1)
    assert rel.alpha == (0, 1)
    assert rel.beta == (2, 3)


def test_wall_relation_p2():
    rel = wall_relation(p2(), (0,))
    assert rel.coeffs == (1, 1, 1)
    assert not rel.alpha and not rel.zero


def test_wall_relation_p1xp1_zero_set():
    rel = wall_relation(p1xp1(), (1,))
    assert rel.rays == (1, 0, 2)
    assert rel.coeffs == (0, 1, 1)
    assert rel.zero == (1,)


def test_wall_relation_boundary():
    with pytest.raises(TorfolError) as e:
        wall_relation(square_left(), (0, 2))
    assert e.value.kind == "BoundaryWall"


def test_curve_classes():
    assert curve_class(square_left(), (0, 1)).intersections == (-1, -1, 1, 1)
    for w in interior_walls(p2()):
        assert curve_class(p2(), w).intersections == (1, 1, 1)
    assert curve_class(p1xp1(), (1,)).intersections == (1, 0, 1, 0)


def test_kf_dot_examples():
    assert kf_dot(square_left(), V_SQUARE, (0, 1)) == -2
    assert kf_dot(square_right(), V_SQUARE, (2, 3)) == 2
    assert kf_dot(p1xp1(), E1_2, (1,)) == -2


def test_weighted_normalisation():
    # P(1,1,2): the wall <e1> separates a smooth cone from one of index 2
    F = FanData(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    # a_3 = mult<e1> / mult<e1, (-1,-2)> = 1/2, a_2 = 1/1, then a_1 e1 + e2 + (-1,-2)/2 = 0
    rel = wall_relation(F, (0,))
    assert rel.rays == (0, 1, 2)
    assert rel.coeffs == (Fraction(1, 2), 1, Fraction(1, 2))


@pytest.mark.parametrize("F, count", [(p2(), 1), (p1xp1(), 2), (p3(), 1)])
def test_extremal_ray_counts(F, count):
    assert len(extremal_rays(F)) == count


def test_p2_extremal_ray_holds_all_walls():
    (R,) = extremal_rays(p2())
    assert len(R.walls) == 3


def test_extremal_requires_complete():
    with pytest.raises(TorfolError) as e:
        extremal_rays(c3())
    assert e.value.kind == "RequiresComplete"


def test_contraction_kinds():
    assert contraction_kind(square_left(), find_wall(square_left(), (0, 1))).kind == SMALL
    (R,) = [R for R in extremal_rays(p1xp1()) if (1,) in [w.rays for w in R.walls]]
    assert classify_contraction(p1xp1(), E1_2, R).kind == FIBRE
    F = bl_p2()
    (E,) = [R for R in extremal_rays(F) if (3,) in [w.rays for w in R.walls]]
    assert contraction_kind(F, E).kind == DIVISORIAL and contraction_kind(F, E).ray == 3
    # with V = span(e1) the exceptional curve is K_F-negative: K_F = -D_0, D_0 . E = 1
    got = classify_contraction(F, V((1, 0)), E)
    assert got.kind == DIVISORIAL and got.ray == 3


def test_exceptional_curve_positive_when_tangent_direction_is_exceptional():
    # V = span(v_E): K_F = -D_E and D_E . E = -1
    F = bl_p2()
    (E,) = [R for R in extremal_rays(F) if (3,) in [w.rays for w in R.walls]]
    with pytest.raises(TorfolError) as e:
        classify_contraction(F, V((1, 1)), E)
    assert e.value.kind == "NotNegative"


def test_contract_divisorial_c2():
    F = c2_blowup()
    G = contract_divisorial(F, find_wall(F, (1,)))
    assert G == FanData(2, [(1, 0), (0, 1)], [(0, 1)])


def test_contract_divisorial_bl_p2():
    F = bl_p2()
    (E,) = [R for R in extremal_rays(F) if (3,) in [w.rays for w in R.walls]]
    assert contract_divisorial(F, E) == p2()


def test_contract_divisorial_refuses_fibre():
    with pytest.raises(TorfolError) as e:
        contract_divisorial(p1xp1(), find_wall(p1xp1(), (1,)))
    assert e.value.kind == "NotDivisorial"


def test_flip_square():
    G = flip_wall(square_left(), (0, 1))
    assert G.max_cones == ((0, 2, 3), (1, 2, 3))
    assert flipped_wall(square_left(), (0, 1)) == (2, 3)
    assert kf_dot(G, V_SQUARE, (2, 3)) == 2


def test_flip_involution():
    G = flip_wall(square_left(), (0, 1))
    assert flip_wall(G, flipped_wall(square_left(), (0, 1))) == square_left()


def test_flip_dicriticality_example():
    assert is_dicritical(square_left(), V_SQUARE)
    G = flip_wall(square_left(), (0, 1))
    assert not is_dicritical(G, V_SQUARE)
    assert singular_locus(G, V_SQUARE).empty


def test_flip_refuses_fibre():
    with pytest.raises(TorfolError) as e:
        flip(p1xp1(), find_wall(p1xp1(), (1,)))
    assert e.value.kind == "NotSmall"


def test_detect_pullback_p1xp1():
    pb = detect_pullback(p1xp1(), E1_2)
    q = pb.quotient
    assert q.lattice_rank == 1 and q.is_fan
    assert sorted(q.rays) == [(-1,), (1,)]
    assert pb.induced_rank == 0 and pb.induced_foliation() is None


def test_detect_pullback_c3_v1():
    pb = detect_pullback(c3(), V1)
    q = pb.quotient
    assert q.lattice_rank == 2 and q.is_fan
    assert q.ray_images[2] is None
    assert len(q.rays) == 2
    (b,) = pb.induced_basis
    image = q.project((1, 1, 0))
    assert b[0] * image[1] == b[1] * image[0]
    # v1 + v2 projects onto the sum of the two quotient rays
    assert image == tuple(x + y for x, y in zip(q.rays[0], q.rays[1]))


def test_detect_pullback_absent():
    assert detect_pullback(c3(), V((1, 1, 1))) is None


def test_mmp_p1xp1():
    tr = run_mmp(p1xp1(), E1_2)
    assert tr.outcome == "fibration" and len(tr.steps) == 1
    s = tr.steps[0]
    assert s.kind == FIBRE and s.kf_dot == -2
    assert sorted(s.pullback.quotient.rays) == [(-1,), (1,)]
    assert not tr.violations


def test_mmp_p3_requires_override():
    with pytest.raises(TorfolError) as e:
        run_mmp(p3(), E1_3)
    assert e.value.kind == "NotCanonical"


def test_mmp_p3_fibre_with_override():
    tr = run_mmp(p3(), E1_3, MmpOptions(allow_noncanonical=True))
    assert tr.noncanonical_override
    assert tr.outcome == "fibration" and [s.kind for s in tr.steps] == [FIBRE]
    q = tr.steps[0].pullback.quotient
    assert q.lattice_rank == 2 and len(q.rays) == 3 and q.is_fan


def test_mmp_p2_fibre():
    tr = run_mmp(p2(), E1_2, MmpOptions(allow_noncanonical=True))
    assert [s.kind for s in tr.steps] == [FIBRE]


def test_flip_cap():
    F, Vr = random_complete_fan(RandomFanSpec(6, 3, "projective", 2))
    tr = run_mmp(F, Vr, MmpOptions(allow_noncanonical=True))
    assert tr.flips == 2
    with pytest.raises(FlipCapExceeded):
        run_mmp(F, Vr, MmpOptions(allow_noncanonical=True, max_flips=1))


def test_bad_pick():
    with pytest.raises(TorfolError) as e:
        run_mmp(p1xp1(), E1_2, MmpOptions(pick=[(0, 1)]))
    assert e.value.kind == "BadPick"


def _random_pairs(count, ranks=(2, 3)):
    out = []
    for seed in range(count):
        n = ranks[seed % len(ranks)]
        base = ("projective", "p1product")[(seed // 2) % 2]
        out.append(random_complete_fan(RandomFanSpec(seed, n, base, seed % 3)))
    return out


def test_relations_vanish_and_stay_local():
    for F, _ in _random_pairs(12):
        for w in interior_walls(F):
            rel = wall_relation(F, w)
            total = [sum(a * F.rays[i][k] for i, a in zip(rel.rays, rel.coeffs)) for k in range(F.n)]
            assert total == [0] * F.n
            C = curve_class(F, w).intersections
            assert all(C[i] == 0 for i in range(len(F.rays)) if i not in rel.rays)
            assert rel.coeffs[-1] > 0 and rel.coeffs[-2] > 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=Fraction(1, 7), max_value=7))
def test_sign_data_scale_invariant(seed, scale):
    F, Vr = random_complete_fan(RandomFanSpec(seed, 2 + seed % 2, "projective", seed % 3))
    K = canonical_divisor(F, Vr)
    for w in interior_walls(F):
        rel = wall_relation(F, w)
        scaled = [scale * a for a in rel.coeffs]
        assert tuple(sorted(r for r, a in zip(rel.rays, scaled) if a < 0)) == rel.alpha
        assert tuple(sorted(r for r, a in zip(rel.rays, scaled) if a > 0)) == rel.beta
        C = curve_class(F, w).intersections
        value = K.dot(C)
        assert (K.dot([scale * c for c in C]) > 0) == (value > 0)
        assert (K.dot([scale * c for c in C]) < 0) == (value < 0)


def test_cone_theorem_on_named_fans():
    for name, F, Vr in complete_suite():
        for R in extremal_rays(F):
            if kf_dot(F, Vr, R.representative) < 0:
                assert any(curve_tangent(F, Vr, w) for w in R.walls), name


def test_principal_divisors_on_named_fans():
    rng = random.Random(0)
    for name, F, _ in complete_suite():
        for w in interior_walls(F):
            C = curve_class(F, w).intersections
            for _ in range(5):
                m = [rng.randint(-5, 5) for _ in range(F.n)]
                assert sum(dot(m, r) * c for r, c in zip(F.rays, C)) == 0, name


def test_mmp_picard_monotone_and_valid():
    for seed in (3, 5, 6, 9):
        F, Vr = random_complete_fan(RandomFanSpec(seed, 3, "p1product", seed % 4))
        tr = run_mmp(F, Vr, MmpOptions(allow_noncanonical=True))
        assert tr.outcome in ("nef", "fibration")
        assert not tr.violations
        for s in tr.steps:
            if s.kind == SMALL:
                assert s.picard_after == s.picard_before
            else:
                assert s.picard_after < s.picard_before
            if s.fan_after is not None:
                assert not validate(s.fan_after) and is_complete(s.fan_after)
