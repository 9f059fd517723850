import random
from fractions import Fraction

import pytest

from amitsur.amitsur import m16_published_resolution, standard_resolution
from amitsur.cohom import (
    CohClass,
    bockstein_shift,
    cohomology,
    connecting,
    corestriction,
    cup,
    induced,
    inverse_shift,
    restricted_resolution,
    restriction,
    shifted_class,
    validate_ses,
)
from amitsur.fingroup import all_subgroups, cyclic, klein, modular16, subgroup_from_generators
from amitsur.gmod import GMap, GModule, direct_sum, permutation, regular, restrict, trivial, trivial_cyclic
from amitsur.resolve import diagonal_approximation, klein_resolution, periodic_resolution

from helpers import all_vectors, cores_res_check


def sign(G, name):
    return GModule.from_generators(G, 1, {g: [[-1]] if g == name else [[1]] for g in G.gen_names})


def test_klein_integral_cohomology():
    G = klein()
    P = klein_resolution(7)
    Z = trivial(G, 1)
    assert cohomology(G, Z, 2, P).invariants == [2, 2]
    assert cohomology(G, Z, 3, P).invariants == [2]
    assert cohomology(G, Z, 4, P).invariants == [2, 2, 2]


def test_m16_h2_is_character_group_of_abelianization():
    G = modular16()
    P = standard_resolution(G, 3)
    # oracle: H^2(G, Z) = Hom(G^ab, Q/Z); G^ab = G / <commutators>
    comm = {G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in range(16) for b in range(16)}
    Cm = subgroup_from_generators(G, list(comm))
    assert Cm.order == 2
    # G^ab is generated by the images of sigma (order 4) and tau (order 2)
    s, t = G.gen("sigma"), G.gen("tau")
    assert G.power(s, 4) in Cm.elements and G.power(s, 2) not in Cm.elements
    assert t not in Cm.elements
    assert cohomology(G, trivial(G, 1), 2, P).invariants == [2, 4]


def test_coboundaries_have_zero_coordinates():
    G = klein()
    P = klein_resolution(4)
    M = direct_sum(sign(G, "sigma"), regular(G))
    H = cohomology(G, M, 2, P)
    cx = H.complex
    rng = random.Random(3)
    for _ in range(10):
        f = [rng.randint(-3, 3) for _ in range(cx.dim(1))]
        assert not any(H.coords(cx.coboundary(1, f)))


def test_cores_res_c4_c2():
    G = cyclic(4)
    P = periodic_resolution(G, 4)
    H = subgroup_from_generators(G, ["sigma^2"])
    Z = trivial(G, 1)
    src = cohomology(G, Z, 2, P)
    gen = src.generators()[0]
    r = restriction(H, src.cls(gen))
    assert r.group.invariants == [2] and not r.is_zero()
    back = corestriction(H, r, Z)
    assert back.coords() == src.coords([2 * x for x in gen])
    assert back.coords() == (2,)


def test_cores_res_randomized():
    rng = random.Random(11)
    cases = []
    for G, P in ((klein(), klein_resolution(4)), (cyclic(6), periodic_resolution(cyclic(6), 4)),
                 (modular16(), standard_resolution(modular16(), 4))):
        mods = [trivial(G, 1), trivial_cyclic(G, 4), regular(G)]
        if G.order == 4:
            mods.append(sign(G, "sigma"))
        subs = [H for H in all_subgroups(G) if 1 < H.order < G.order]
        for _ in range(3):
            cases.append((G, rng.choice(subs), rng.choice(mods), rng.randint(1, 3), P))
    for G, H, M, n, P in cases:
        cores_res_check(G, H, M, n, P)


def test_induced_along_zero_map():
    G = klein()
    P = klein_resolution(3)
    Z = trivial(G, 1)
    c = cohomology(G, Z, 2, P).cls(cohomology(G, Z, 2, P).generators()[0])
    assert induced(GMap(Z, Z, [[0]]), c).is_zero()


def test_bockstein_on_klein_degree_one():
    G = klein()
    P = klein_resolution(3)
    Z, Z2 = trivial(G, 1), trivial_cyclic(G, 2)
    ses = (GMap(Z, Z, [[2]]), GMap(Z, Z2, [[1]]))
    validate_ses(*ses)
    H1 = cohomology(G, Z2, 1, P)
    assert H1.invariants == [2, 2]
    for f in H1.generators():
        A = connecting(ses, H1.cls(f))
        assert not A.is_zero() and (2 * A).is_zero()


def test_connecting_of_split_sequence_is_zero():
    G = klein()
    P = klein_resolution(3)
    P = klein_resolution(4)
    S, Z = sign(G, "sigma"), trivial(G, 1)
    B = direct_sum(S, Z)
    ses = (GMap(S, B, [[1], [0]]), GMap(B, Z, [[0, 1]]))
    for n in (0, 1, 2):
        H = cohomology(G, Z, n, P)
        for f in H.generators():
            assert connecting(ses, H.cls(f)).is_zero()


def test_z2_z4_z2_connecting_on_c2():
    G = cyclic(2)
    P = periodic_resolution(G, 3)
    Z2, Z4 = trivial_cyclic(G, 2), trivial_cyclic(G, 4)
    ses = (GMap(Z2, Z4, [[2]]), GMap(Z4, Z2, [[1]]))
    validate_ses(*ses)
    H1 = cohomology(G, Z2, 1, P)
    assert not connecting(ses, H1.cls(H1.generators()[0])).is_zero()


def test_validate_ses_rejects_non_exact():
    G = klein()
    Z = trivial(G, 1)
    with pytest.raises(ValueError, match="non-exact"):
        validate_ses(GMap(Z, Z, [[2]]), GMap(Z, trivial_cyclic(G, 4), [[1]]))


def test_connecting_naturality():
    # map of sequences: (Z -2-> Z -> Z/2) to (Z -4-> Z -> Z/4) given by (1, 2, 2)
    G = klein()
    P = klein_resolution(4)
    Z, Z2, Z4 = trivial(G, 1), trivial_cyclic(G, 2), trivial_cyclic(G, 4)
    s1 = (GMap(Z, Z, [[2]]), GMap(Z, Z2, [[1]]))
    s2 = (GMap(Z, Z, [[4]]), GMap(Z, Z4, [[1]]))
    a, c = GMap(Z, Z, [[1]]), GMap(Z2, Z4, [[2]])
    for n in (1, 2):
        H = cohomology(G, Z2, n, P)
        for f in H.generators():
            x = H.cls(f)
            lhs = induced(a, connecting(s1, x))
            rhs = connecting(s2, induced(c, x))
            assert lhs.coords() == rhs.coords()


def test_bockstein_shift_character():
    for m in (2, 3, 4, 6):
        G = cyclic(m)
        P = periodic_resolution(G, 3)
        Z = trivial(G, 1)
        z = shifted_class(P, Z, 1, [Fraction(1, m)])
        assert z.group.invariants == [m]
        assert z.order() == m
        assert shifted_class(P, Z, 1, [Fraction(3)]).is_zero()
    with pytest.raises(ValueError, match="not a Q/Z-cocycle"):
        # 1/3 is not 4-torsion, so it is no Q/Z 1-cocycle of C4
        bockstein_shift(periodic_resolution(cyclic(4), 2), trivial(cyclic(4), 1), 1, [Fraction(1, 3)])


def test_shift_roundtrip_on_all_classes():
    G = klein()
    P = klein_resolution(6)
    for L in (trivial(G, 1), sign(G, "sigma"), permutation(G, {"sigma": [1, 0], "tau": [0, 1]})):
        for n in (1, 2, 3, 4):
            H = cohomology(G, L, n + 1, P)
            seen = set()
            for coords in all_vectors([d for d in H.invariants]):
                z = H.representative(coords)
                q = inverse_shift(P, L, n, z)
                assert H.coords(bockstein_shift(P, L, n, q)) == tuple(coords)
                seen.add(tuple(q))
            assert len(seen) == H.order()


def test_shift_roundtrip_m16():
    G = modular16()
    P = standard_resolution(G, 6)
    L = trivial(G, 1)
    for n in (1, 2, 3, 4):
        H = cohomology(G, L, n + 1, P)
        for coords in all_vectors(H.invariants):
            z = H.representative(coords)
            assert H.coords(bockstein_shift(P, L, n, inverse_shift(P, L, n, z))) == tuple(coords)


def test_cup_c2_mod2():
    G = cyclic(2)
    P = periodic_resolution(G, 4)
    D = diagonal_approximation(P, 3)
    F2 = trivial_cyclic(G, 2)
    H1 = cohomology(G, F2, 1, P)
    x = H1.cls(H1.generators()[0])
    xx = cup(D, x, x, [[1]], F2)
    assert xx.group.invariants == [2] and not xx.is_zero()
    xxx = cup(D, xx, x, [[1]], F2)
    assert not xxx.is_zero()
    zero = H1.cls([0])
    assert cup(D, x, zero, [[1]], F2).is_zero()


def test_cup_klein_mod2():
    G = klein()
    P = klein_resolution(4)
    D = diagonal_approximation(P, 3)
    F2 = trivial_cyclic(G, 2)
    H1 = cohomology(G, F2, 1, P)
    x, y = (H1.cls(f) for f in H1.generators())
    xy, yx = cup(D, x, y, [[1]], F2), cup(D, y, x, [[1]], F2)
    assert not xy.is_zero() and xy.coords() == yx.coords()
    triple = cup(D, cup(D, y, x, [[1]], F2), y + x, [[1]], F2)
    assert not triple.is_zero()
    # associativity at class level
    a = cup(D, cup(D, x, y, [[1]], F2), y, [[1]], F2)
    b = cup(D, x, cup(D, y, y, [[1]], F2), [[1]], F2)
    assert a.coords() == b.coords()


def test_cup_graded_commutative_integral():
    G = klein()
    P = klein_resolution(5)
    D = diagonal_approximation(P, 4)
    Z = trivial(G, 1)
    H2 = cohomology(G, Z, 2, P)
    u, v = (H2.cls(f) for f in H2.generators())
    assert cup(D, u, v, [[1]], Z).coords() == cup(D, v, u, [[1]], Z).coords()


def test_cohomology_needs_long_resolution():
    G = klein()
    with pytest.raises(ValueError, match="too short"):
        cohomology(G, trivial(G, 1), 3, klein_resolution(3))
