import json
from fractions import Fraction

import pytest

import amitsur.amitsur as am
from amitsur.amitsur import (
    ONE,
    AlphaExtension,
    DP2Dataset,
    EquivariantPresentation,
    UnitModel,
    UnitValue,
    adjoin_free_orbit,
    amitsur_group,
    beta,
    bogomolov_kernel,
    cup_with_beta,
    cyclic_projective,
    integer_unit,
    klein_p1,
    klein_p1_enlarged,
    rational_model,
    restrict_presentation,
)
from amitsur.fingroup import cyclic, klein, sylow, whole
from amitsur.gmod import trivial


def orders(p, model=None, degrees=range(2, 7)):
    return [amitsur_group(p, None, model, n).order() for n in degrees]


def test_unit_value_arithmetic():
    a = UnitValue.make(Fraction(3, 4), {"2": 1})
    assert (a + a) == UnitValue.make(Fraction(1, 2), {"2": 2})
    assert (a + (-a)).is_one()
    assert integer_unit(-12) == UnitValue.make(Fraction(1, 2), {"2": 2, "3": 1})
    with pytest.raises(ValueError):
        integer_unit(0)


def test_unit_model_vectors():
    m = UnitModel.fg(4, ["2"])
    assert m.vector(UnitValue.make(Fraction(1, 4), {"2": -3})) == [1, -3]
    with pytest.raises(ValueError, match="constant outside model"):
        m.vector(UnitValue.make(Fraction(1, 8)))
    with pytest.raises(ValueError, match="constant outside model"):
        m.vector(UnitValue.make(0, {"3": 1}))
    assert UnitModel.divisible().vector(UnitValue.make(Fraction(5, 3))) == [Fraction(2, 3)]


def test_klein_presentation_validates():
    rep = klein_p1().validate()
    assert rep["pic"] == [0] and rep["pic_torsion_free"]
    pic, _, _ = klein_p1().pic()
    assert all(A == [[1]] for A in pic.action)
    assert klein_p1_enlarged().validate()["pic"] == [0]


def test_klein_twist_constants():
    p = klein_p1()
    G = p.group
    const = p.constants()
    assert const[G.gen("sigma")] == [ONE]
    assert const[G.gen("tau")] == [UnitValue.make(Fraction(1, 2))]
    # sigma tau acts on t by t -> -1/t
    st = G.parse("sigma*tau")
    assert const[st] == [UnitValue.make(Fraction(1, 2))]


def test_cyclic_presentation_constants():
    for m in (2, 3, 5):
        p = cyclic_projective(m, integer_unit(2))
        rep = p.validate()
        assert rep["pic"] == [0]
        last = p.twists["sigma"][p.unit_labels[-1]]
        assert last[0] == -integer_unit(2) and last[1] == [-1] * (m - 1)
        # sigma^m acts trivially, so its constants vanish
        assert all(c.is_one() for c in p.constants()[p.group.identity])


def test_non_injective_div_rejected():
    G = cyclic(2)
    p = EquivariantPresentation(G, ["a", "b"], {"sigma": [1, 0]}, ["u"], [[0], [0]],
                                {"sigma": {"u": (ONE, [1])}})
    with pytest.raises(ValueError, match="not injective"):
        p.validate()


def test_non_equivariant_div_rejected():
    G = cyclic(2)
    p = EquivariantPresentation(G, ["a", "b"], {"sigma": [1, 0]}, ["u"], [[1], [0]],
                                {"sigma": {"u": (ONE, [1])}})
    with pytest.raises(ValueError, match="not equivariant"):
        p.validate()


def test_bad_constants_rejected():
    # sigma^2 = 1 forces a 2-torsion constant on an invariant unit
    G = cyclic(2)
    p = EquivariantPresentation(G, ["a", "b"], {"sigma": [0, 1]}, ["u"], [[1], [-1]],
                                {"sigma": {"u": (UnitValue.make(Fraction(1, 3)), [1])}})
    with pytest.raises(ValueError, match="not an action"):
        p.validate()


def test_beta_refuses_torsion_pic():
    G = cyclic(2)
    p = EquivariantPresentation(G, ["a"], {"sigma": [0]}, ["u"], [[2]], {"sigma": {"u": (ONE, [1])}})
    rep = p.validate()
    assert rep["pic"] == [2] and not rep["pic_torsion_free"]
    with pytest.raises(ValueError, match="Pic has torsion"):
        beta(p)


def test_split_twists_give_zero():
    # all constants trivial: the extension splits
    for p in (klein_p1(), cyclic_projective(3, integer_unit(2)), cyclic_projective(4, integer_unit(2))):
        tw = {g: {u: (ONE, m) for u, (c, m) in t.items()} for g, t in p.twists.items()}
        q = EquivariantPresentation(p.group, p.divisor_labels, p.divisor_perms, p.unit_labels, p.div, tw)
        q.validate()
        assert orders(q) == [1] * 5
        assert orders(q, rational_model(2)) == [1] * 5
        assert not beta(q).nonzero


def test_klein_partial_kernel_is_2z():
    p = klein_p1()
    E = AlphaExtension(p)
    src = E.source_group(2)
    assert src.invariants == [0]
    (gen,) = src.generators()
    vals = [E.partial(2, src.cls([k * x for x in gen])).is_zero() for k in range(-4, 5)]
    assert vals == [k % 2 == 0 for k in range(-4, 5)]
    assert amitsur_group(p, n=3).order() == 1


def test_partial_matches_cup_with_beta():
    for p in (klein_p1(), klein_p1_enlarged()):
        E = AlphaExtension(p)
        for n in (2, 3, 4):
            src = E.source_group(n)
            for f in src.generators():
                c = src.cls(f)
                a = E.partial(n, c)
                b = cup_with_beta(p, n, c)
                assert (a + (-b)).is_zero()


def test_partial_is_additive():
    p = klein_p1()
    E = AlphaExtension(p)
    src = E.source_group(4)
    f, g = src.generators()
    s = E.partial(4, src.cls([x + y for x, y in zip(f, g)]))
    assert (s + (-(E.partial(4, src.cls(f)) + E.partial(4, src.cls(g))))).is_zero()


def test_adjoin_empty_orbit_is_identity():
    p = klein_p1()
    assert adjoin_free_orbit(p, []) is p


def test_adjoin_orbit_rejects_fixed_points():
    p = klein_p1()
    with pytest.raises(ValueError, match="not free"):
        adjoin_free_orbit(p, {"sigma": [1, 0], "tau": [0, 1]})


@pytest.mark.parametrize("name", ["klein-p1", "klein-p1-enlarged", "cyclic"])
def test_free_orbit_invariance(name):
    p = am.builtin_presentation(name, {"m": 4, "b": 2})
    q = adjoin_free_orbit(p)
    q.validate()
    assert q.n_div == p.n_div + p.group.order
    for model in (None, rational_model(2)):
        assert orders(p, model) == orders(q, model)
        assert beta(p, model).nonzero == beta(q, model).nonzero


def test_presentation_independence():
    a, b = klein_p1(), klein_p1_enlarged()
    for model in (None, UnitModel.fg(2)):
        ga = [amitsur_group(a, None, model, n).invariants for n in range(2, 7)]
        gb = [amitsur_group(b, None, model, n).invariants for n in range(2, 7)]
        assert ga == gb
        assert beta(a, model).nonzero == beta(b, model).nonzero


def test_restriction_to_whole_group():
    p = cyclic_projective(4, integer_unit(2))
    r = restrict_presentation(p, whole(p.group))
    r.validate()
    m = rational_model(2)
    assert orders(p, m) == orders(r, m)


@pytest.mark.parametrize("b", [2, 4, 8, 64, -1])
def test_sylow_detection(b):
    p = cyclic_projective(6, integer_unit(b))
    m = rational_model(2)
    parts = [restrict_presentation(p, sylow(p.group, q)) for q in (2, 3)]
    for r in parts:
        r.validate()
    assert beta(p, m).nonzero == any(beta(r, m).nonzero for r in parts)
    for n in (2, 3, 4):
        prod = 1
        for r in parts:
            prod *= amitsur_group(r, None, m, n).order()
        assert amitsur_group(p, None, m, n).order() == prod


def test_beta_iff_not_power():
    # b = 2^k is an m-th power in Q exactly when m divides k
    m = rational_model(2)
    for deg in (2, 3, 4):
        for k in range(0, 9):
            p = cyclic_projective(deg, integer_unit(2 ** k))
            assert beta(p, m).nonzero == (k % deg != 0)


def test_beta_routes_agree_on_klein():
    r = beta(klein_p1())
    assert r.nonzero and r.shifted and not r.ext2_trivial
    assert r.cls.order() == 2


def test_presentation_roundtrip():
    for p in (klein_p1(), cyclic_projective(3, integer_unit(-2))):
        doc = json.loads(json.dumps(p.to_data()))
        q = EquivariantPresentation.from_data(doc)
        q.validate()
        assert q.to_data() == p.to_data()
        assert orders(p, degrees=(2, 3)) == orders(q, degrees=(2, 3))
    with pytest.raises(ValueError, match="schema"):
        EquivariantPresentation.from_data({"label": "x"})


def test_model_outside_constants_reported():
    p = cyclic_projective(3, integer_unit(3))
    with pytest.raises(ValueError, match="constant outside model"):
        amitsur_group(p, None, rational_model(2), 2)


def test_bogomolov_kernel_abelian_is_zero():
    G = klein()
    Z = trivial(G, 1)
    for n in (2, 3):
        assert bogomolov_kernel(G, Z, n).invariants == []


def test_dataset_roundtrip_and_validate():
    ds = DP2Dataset.bundled()
    assert ds.validate() == []
    again = DP2Dataset(json.loads(json.dumps(ds.to_data())))
    assert again.validate() == []
    assert again.pic().rank == 8
    assert [H.order for H in ds.subgroups().values()] == [8, 8, 8]


def test_dataset_corruption_detected():
    data = json.loads(json.dumps(DP2Dataset.bundled().to_data()))
    data["eta"][0] = "nope"
    assert any("eta" in f for f in DP2Dataset(data).validate())
