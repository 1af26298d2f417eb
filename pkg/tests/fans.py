"""Named fans and foliations shared by the test modules."""

from itertools import combinations

from torfol.fan import FanData
from torfol.foliation import FoliationDatum


def c3():
    return FanData(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])


def c2_blowup():
    return FanData(2, [(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)])


def p2():
    return FanData(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def p3():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return FanData(3, rays, list(combinations(range(4), 3)))


def p1xp1():
    return FanData(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def p1cubed():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    cones = [(a, b, c) for a in (0, 3) for b in (1, 4) for c in (2, 5)]
    return FanData(3, rays, cones)


def bl_p2():
    """P^2 blown up at the fixed point of the cone <e1, e2>; the new ray is last."""
    rays = [(1, 0), (0, 1), (-1, -1), (1, 1)]
    return FanData(2, rays, [(0, 3), (1, 3), (1, 2), (0, 2)])


def hirzebruch(a):
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return FanData(2, rays, [(0, 1), (1, 2), (2, 3), (0, 3)])


def square_left():
    """Two cones over a square with rays v1..v4 (indices 0..3)."""
    rays = [(1, 0, 0), (0, 1, 1), (0, 1, 0), (1, 0, 1)]
    return FanData(3, rays, [(0, 1, 2), (0, 1, 3)])


def square_right():
    rays = [(1, 0, 0), (0, 1, 1), (0, 1, 0), (1, 0, 1)]
    return FanData(3, rays, [(0, 2, 3), (1, 2, 3)])


def weighted_p2():
    """P(1,1,2): a complete fan with a non-smooth cone."""
    return FanData(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])


def V(*basis, n=None):
    return FoliationDatum(list(basis), n)


V1 = V((1, 1, 0), (0, 0, 1))
V2 = V((1, 0, 0), (0, 0, 1))
V_E3 = V((0, 0, 1))
V_SQUARE = V((0, 1, 0), (1, 0, 1))


def complete_suite():
    """``(name, fan, foliation)`` over the fixed complete test fans."""
    out = []
    for name, F in [
        ("P2", p2()),
        ("P3", p3()),
        ("P1xP1", p1xp1()),
        ("P1^3", p1cubed()),
        ("BlP2", bl_p2()),
        ("F1", hirzebruch(1)),
        ("F2", hirzebruch(2)),
        ("P112", weighted_p2()),
    ]:
        n = F.n
        bases = [[tuple(int(i == j) for j in range(n))] for i in range(n)]
        bases.append([tuple([1] * n)])
        if n == 3:
            bases += [[(1, 0, 0), (0, 1, 0)], [(1, 1, 0), (0, 0, 1)], [(1, 2, 3), (0, 1, -1)]]
        if name == "BlP2":
            bases.append([(1, 1)])
        for b in bases:
            out.append((name, F, FoliationDatum(b, n)))
    return out
