"""Equivariant presentations, alpha, the double connecting maps and Am^n, beta.

A presentation records the G-stable divisor set Sigma, a basis of the unit
lattice M_U of the complement, the divisor map M_U -> Z[Sigma], and for each
group generator g and unit u the pair (constant, monomial) with
g.u = constant * monomial.  Constants live in a unit model: either a
finitely generated group mu_N + Z^r (FG mode), or the units of an
algebraically closed field of characteristic zero (divisible mode), where
only the roots of unity matter and every class is moved to integral
coefficients by the Bockstein shift.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .cohom import (CohClass, HomComplex, bockstein_shift, cohomology,
                    connecting_cochain, frac_mod1, hom_complex, restriction,
                    _flat)
from .cyclofield import CycloElement, verify_unit_decomposition
from .extcalc import (FourTermExt, double_connecting_cochain, ext2_class,
                      fan_realization, image_group, invariant_group,
                      lift_identity, module_resolution, section7_construct,
                      twisted_connecting_cochain)
from .fingroup import (FinGroup, Subgroup, all_subgroups, builtin, cyclic,
                       klein, maximal_abelian_subgroups, modular16,
                       subgroup_from_generators)
from .gmod import (GMap, GModule, GTorus, dual, permutation, tensor, trivial)
from .intlat import (FgAbGroup, IntegerSolver, from_columns, identity,
                     invert_unimodular, matmul, smith_normal_form,
                     subgroup_generated, transpose, zeros, _smith_raw)
from .resolve import (FreeResolution, bar_resolution, custom_resolution,
                      extend_resolution, klein_resolution, periodic_resolution)


# ----------------------------------------------------------------------
# bundled data and default resolutions

def bundled_data(name: str):
    with resources.files("amitsur").joinpath("data", name).open("r") as fh:
        return json.load(fh)


_resolutions = {}


def m16_published_resolution(G: FinGroup = None) -> FreeResolution:
    G = G or modular16()
    return custom_resolution(G, bundled_data("m16_resolution.json"))


def standard_resolution(G: FinGroup, top: int) -> FreeResolution:
    """A cached free resolution of Z over G reaching degree ``top``.

    Klein: tensor square of the periodic C2 resolution; cyclic: periodic;
    M16: the bundled published resolution extended by integer kernels;
    otherwise the normalized bar resolution.
    """
    key = id(G)
    hit = _resolutions.get(key)
    if hit is not None and hit[0] is G and hit[1].top >= top:
        return hit[1]
    if G.label == "klein":
        P = klein_resolution(max(top, 4), G)
    elif G.label.startswith("C") and len(G.generators) == 1 and G.element_order(G.generators[0]) == G.order:
        P = periodic_resolution(G, max(top, 4))
    elif G.label == "M16":
        base = hit[1] if hit is not None and hit[0] is G else m16_published_resolution(G)
        P = extend_resolution(base, top)
    else:
        P = bar_resolution(G, top)
    _resolutions[key] = (G, P)
    return P


# ----------------------------------------------------------------------
# unit values and models

@dataclass(frozen=True)
class UnitValue:
    """exp(2 pi i root) times a product of named free generators."""
    root: Fraction = Fraction(0)
    free: tuple = ()

    @classmethod
    def make(cls, root=0, free=None):
        items = tuple(sorted((k, int(v)) for k, v in (free or {}).items() if v))
        return cls(frac_mod1(Fraction(root)), items)

    def __add__(self, other):
        d = dict(self.free)
        for k, v in other.free:
            d[k] = d.get(k, 0) + v
        return UnitValue.make(self.root + other.root, d)

    def scale(self, k: int):
        return UnitValue.make(self.root * k, {a: b * k for a, b in self.free})

    def __neg__(self):
        return self.scale(-1)

    def is_one(self):
        return self.root == 0 and not self.free

    def to_data(self):
        return {"root": str(self.root), "free": dict(self.free)}

    @classmethod
    def from_data(cls, data):
        if isinstance(data, (int, str)):
            return cls.make(Fraction(data))
        return cls.make(Fraction(data.get("root", 0)), data.get("free", {}))


ONE = UnitValue()


class UnitModel:
    """FG: mu_N + free generators with trivial action.  DIVISIBLE: Q/Z after projection."""

    def __init__(self, mode: str, torsion: int = 1, free_generators=()):
        if mode not in ("fg", "divisible"):
            raise ValueError("mode must be 'fg' or 'divisible'")
        self.mode = mode
        self.torsion = int(torsion) if mode == "fg" else None
        self.free_generators = list(free_generators) if mode == "fg" else []

    @classmethod
    def fg(cls, torsion: int, free_generators=()):
        return cls("fg", torsion, free_generators)

    @classmethod
    def divisible(cls):
        return cls("divisible")

    @property
    def is_divisible(self):
        return self.mode == "divisible"

    @property
    def width(self):
        return 1 if self.is_divisible else 1 + len(self.free_generators)

    def vector(self, u: UnitValue):
        if self.is_divisible:
            return [frac_mod1(u.root)]
        t = u.root * self.torsion
        if t.denominator != 1:
            raise ValueError("constant outside model: root of unity of order %d not in mu_%d"
                             % (u.root.denominator, self.torsion))
        out = [int(t) % self.torsion] + [0] * len(self.free_generators)
        for name, e in u.free:
            if name not in self.free_generators:
                raise ValueError("constant outside model: no free generator %r" % name)
            out[1 + self.free_generators.index(name)] = e
        return out

    def module(self, G: FinGroup) -> GModule:
        if self.is_divisible:
            return trivial(G, 1, label="Z")
        w = self.width
        rel = [[self.torsion]] + [[0] for _ in range(w - 1)]
        return trivial(G, FgAbGroup(w, rel), label="model")

    def to_data(self):
        if self.is_divisible:
            return {"mode": "divisible"}
        return {"mode": "fg", "torsion": self.torsion, "free_generators": list(self.free_generators)}

    @classmethod
    def from_data(cls, data):
        if data.get("mode") == "divisible":
            return cls.divisible()
        return cls.fg(int(data.get("torsion", 1)), data.get("free_generators", []))

    def __repr__(self):
        if self.is_divisible:
            return "UnitModel(divisible)"
        return "UnitModel(mu_%d + Z<%s>)" % (self.torsion, ",".join(self.free_generators))


# ----------------------------------------------------------------------
# presentations

class EquivariantPresentation:
    def __init__(self, group: FinGroup, divisor_labels, divisor_perms, unit_labels, div, twists, label=None):
        self.group = group
        self.divisor_labels = list(divisor_labels)
        self.divisor_perms = {k: list(v) for k, v in divisor_perms.items()}
        self.unit_labels = list(unit_labels)
        self.div = [list(r) for r in div]
        self.twists = {g: {u: (c, list(m)) for u, (c, m) in tw.items()} for g, tw in twists.items()}
        self.label = label or "presentation"
        self._cache = {}

    @property
    def n_div(self):
        return len(self.divisor_labels)

    @property
    def n_units(self):
        return len(self.unit_labels)

    # derived modules ------------------------------------------------------
    def divisor_module(self) -> GModule:
        if "div_mod" not in self._cache:
            if self.n_div == 0:
                self._cache["div_mod"] = trivial(self.group, 0)
            else:
                self._cache["div_mod"] = permutation(self.group, self.divisor_perms)
        return self._cache["div_mod"]

    def monomial_matrix(self, gname):
        r = self.n_units
        return [[self.twists[gname][self.unit_labels[j]][1][i] for j in range(r)] for i in range(r)]

    def unit_module(self) -> GModule:
        if "unit_mod" not in self._cache:
            mats = {g: self.monomial_matrix(g) for g in self.group.gen_names}
            self._cache["unit_mod"] = GModule.from_generators(self.group, self.n_units, mats, label="M_U")
        return self._cache["unit_mod"]

    def constants(self):
        """const[g][u] for every element g, materialized along shortest words."""
        if "const" in self._cache:
            return self._cache["const"]
        G = self.group
        r = self.n_units
        gen_consts = [[self.twists[nm][u][0] for u in self.unit_labels] for nm in G.gen_names]
        mono = [self.monomial_matrix(nm) for nm in G.gen_names]
        const = {G.identity: [ONE] * r}
        order = sorted(range(G.order), key=lambda x: len(G.words[x]))
        for x in order:
            w = G.words[x]
            if not w:
                continue
            prefix = G.eval_word(w[:-1])
            s = w[-1]
            const[x] = [self._compose(const[prefix], gen_consts[s][u], [mono[s][i][u] for i in range(r)])
                        for u in range(r)]
        out = [const[g] for g in range(G.order)]
        self._cache["const"] = out
        return out

    @staticmethod
    def _compose(const_g, const_h_u, mono_h_u):
        """const_{gh}(u) = const_h(u) + sum_i mono_h(u)_i const_g(u_i)."""
        acc = const_h_u
        for i, e in enumerate(mono_h_u):
            if e:
                acc = acc + const_g[i].scale(e)
        return acc

    def validate(self):
        """Check every invariant; raise ValueError naming the first failure."""
        G = self.group
        nd, r = self.n_div, self.n_units
        for nm in G.gen_names:
            if nm not in self.divisor_perms and nd:
                raise ValueError("missing divisor permutation for generator %r" % nm)
            if nd and sorted(self.divisor_perms[nm]) != list(range(nd)):
                raise ValueError("divisor action of %r is not a permutation" % nm)
            if nm not in self.twists:
                raise ValueError("missing twists for generator %r" % nm)
            for u in self.unit_labels:
                if u not in self.twists[nm]:
                    raise ValueError("missing twist for %s.%s" % (nm, u))
                if len(self.twists[nm][u][1]) != r:
                    raise ValueError("monomial of %s.%s has the wrong length" % (nm, u))
        if len(self.div) != nd or any(len(row) != r for row in self.div):
            raise ValueError("div matrix must be |Sigma| x rank(M_U)")
        Dm = self.divisor_module()
        Um = self.unit_module()
        if r and smith_normal_form(self.div, cols=r).rank != r:
            raise ValueError("div is not injective (a unit has trivial divisor)")
        for g in range(G.order):
            lhs = matmul(Dm.action[g], self.div, cols=r) if nd else []
            rhs = matmul(self.div, Um.action[g], cols=r) if nd else []
            if lhs != rhs:
                raise ValueError("div is not equivariant at %s" % G.name(g))
        const = self.constants()
        for g in range(G.order):
            for h in range(G.order):
                gh = G.table[g][h]
                A = Um.action[h]
                for u in range(r):
                    exp = self._compose(const[g], const[h][u], [A[i][u] for i in range(r)])
                    if exp != const[gh][u]:
                        raise ValueError("twist constants are not an action: (%s)(%s).%s"
                                         % (G.name(g), G.name(h), self.unit_labels[u]))
        pic, _, free = self.pic()
        return {"valid": True, "pic": pic.underlying.invariants, "pic_torsion_free": free,
                "pic_rank": pic.rank if free else None}

    def pic(self):
        """(Pic module, projection matrix from Z[Sigma], torsion_free)."""
        if "pic" in self._cache:
            return self._cache["pic"]
        G = self.group
        nd, r = self.n_div, self.n_units
        Dm = self.divisor_module()
        diag, U, V = _smith_raw(self.div, nd, r)
        rk = len(diag)
        free = all(d == 1 for d in diag)
        if free:
            k = nd - rk
            Uinv = invert_unimodular(U) if nd else []
            proj = [list(U[rk + i]) for i in range(k)]
            sec = [[Uinv[a][rk + i] for i in range(k)] for a in range(nd)]
            action = [matmul(proj, matmul(Dm.action[g], sec, cols=k), cols=k) for g in range(G.order)]
            pic = GModule(G, FgAbGroup(k), action, validate=False, label="Pic")
        else:
            from .gmod import cokernel
            pic, p = cokernel(GMap(self.unit_module(), Dm, self.div, validate=False), label="Pic")
            proj = p.matrix
        self._cache["pic"] = (pic, proj, free)
        return self._cache["pic"]

    def to_data(self):
        return {
            "schema": "amitsur/presentation-v1",
            "label": self.label,
            "group": {"table": self.group.table, "generators": dict(zip(self.group.gen_names, self.group.generators)),
                      "label": self.group.label},
            "divisors": {"labels": self.divisor_labels, "action": self.divisor_perms},
            "units": {"labels": self.unit_labels},
            "div_map": self.div,
            "twists": {g: {u: {"constant": c.to_data(), "monomial": m} for u, (c, m) in tw.items()}
                       for g, tw in self.twists.items()},
        }

    @classmethod
    def from_data(cls, data, group: FinGroup = None):
        if data.get("schema") != "amitsur/presentation-v1":
            raise ValueError("not a presentation document (schema tag missing)")
        if group is None:
            group = group_from_data(data["group"])
        tw = {g: {u: (UnitValue.from_data(v["constant"]), v["monomial"]) for u, v in t.items()}
              for g, t in data["twists"].items()}
        return cls(group, data["divisors"]["labels"], data["divisors"]["action"], data["units"]["labels"],
                   data["div_map"], tw, label=data.get("label"))


def group_from_data(g):
    if "builtin" in g:
        return builtin(g["builtin"], g.get("params"))
    return FinGroup(g["table"], g["generators"], label=g.get("label"))


def adjoin_free_orbit(p: EquivariantPresentation, orbit=None, prefix="E") -> EquivariantPresentation:
    """Add a free G-orbit of divisors with no new units.

    ``orbit`` is None (a copy of the regular G-set), an empty list (no
    change) or a dict {generator: permutation} of a free G-set.
    """
    G = p.group
    if orbit == [] or orbit == {}:
        return p
    if orbit is None:
        perms = {nm: [G.table[g][x] for x in range(G.order)] for nm, g in zip(G.gen_names, G.generators)}
    else:
        perms = {k: list(v) for k, v in orbit.items()}
        mod = permutation(G, perms)
        size = mod.rank
        for g in range(G.order):
            if g == G.identity:
                continue
            A = mod.action[g]
            if any(A[x][x] for x in range(size)):
                raise ValueError("orbit is not free: %s has a fixed point" % G.name(g))
    size = len(next(iter(perms.values())))
    nd = p.n_div
    labels = p.divisor_labels + ["%s%d" % (prefix, i) for i in range(size)]
    new_perms = {nm: p.divisor_perms.get(nm, []) + [nd + x for x in perms[nm]] for nm in G.gen_names}
    div = [list(r) for r in p.div] + [[0] * p.n_units for _ in range(size)]
    return EquivariantPresentation(G, labels, new_perms, p.unit_labels, div, p.twists, label=p.label + "+orbit")


def restrict_presentation(p: EquivariantPresentation, H) -> EquivariantPresentation:
    """The same data viewed as an H-presentation for a subgroup H."""
    if H.parent.table != p.group.table:
        raise ValueError("subgroup of a different group")
    const = p.constants()
    Um = p.unit_module()
    Dm = p.divisor_module()
    r, nd = p.n_units, p.n_div
    perms, tw = {}, {}
    for nm, h in zip(H.group.gen_names, H.group.generators):
        g = H.elements[h]
        A = Dm.action[g]
        perms[nm] = [next(y for y in range(nd) if A[y][x]) for x in range(nd)]
        tw[nm] = {p.unit_labels[u]: (const[g][u], [Um.action[g][i][u] for i in range(r)]) for u in range(r)}
    return EquivariantPresentation(H.group, p.divisor_labels, perms, p.unit_labels, p.div, tw,
                                   label="%s|%s" % (p.label, H.group.label))


# ----------------------------------------------------------------------
# alpha and the double connecting maps

def _kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


class AlphaExtension:
    """The four-term sequence model (x) X -> E -> Z[Sigma] (x) X -> Pic (x) X.

    X is the cocharacter lattice of the torus S.  I = M_U (x) X is the image
    of E in Z[Sigma] (x) X; gamma[g] is the constant part of g on I.
    """

    def __init__(self, p: EquivariantPresentation, torus: GTorus = None, model: UnitModel = None):
        G = p.group
        self.p = p
        self.G = G
        self.torus = torus or GTorus.gm(G)
        self.model = model or UnitModel.divisible()
        X = self.torus.cochar
        self.X = X
        x = X.rank
        pic, proj, _ = p.pic()
        self.pic = pic
        self.I = tensor(p.unit_module(), X)
        self.C = tensor(p.divisor_module(), X)
        self.D = tensor(pic, X)
        Ix = identity(x)
        self.iota = GMap(self.I, self.C, _kron(p.div, Ix), validate=False)
        self.pi = GMap(self.C, self.D, _kron(proj, Ix), validate=False)
        const = p.constants()
        w = self.model.width
        self.gamma = []
        for g in range(G.order):
            cols = [self.model.vector(c) for c in const[g]]
            Cg = [[col[m] for col in cols] for m in range(w)]
            self.gamma.append(_kron(Cg, X.action[g]))
        self._E = None

    @property
    def divisible(self):
        return self.model.is_divisible

    def resolution(self, top):
        return standard_resolution(self.G, top)

    def fourterm(self) -> FourTermExt:
        """The explicit extension (FG mode): B = A + I with action [[1, gamma_g], [0, g]]."""
        if self.divisible:
            raise ValueError("divisible mode carries the constant term symbolically")
        if self._E is None:
            G = self.G
            A = tensor(self.model.module(G), self.X)
            ka, ki = A.rank, self.I.rank
            action = []
            for g in range(G.order):
                Bg = zeros(ka + ki, ka + ki)
                for a in range(ka):
                    Bg[a][:ka] = A.action[g][a]
                    Bg[a][ka:] = self.gamma[g][a]
                for b in range(ki):
                    Bg[ka + b][ka:] = self.I.action[g][b]
                action.append(Bg)
            nrel = A.underlying.nrel
            rels = [list(r) for r in A.underlying.relations] if nrel else [[] for _ in range(ka)]
            rels += [[0] * nrel for _ in range(ki)]
            B = GModule(G, FgAbGroup(ka + ki, rels), action, validate=True, label="E")
            i = GMap(A, B, [[1 if r == c else 0 for c in range(ka)] for r in range(ka + ki)])
            p = GMap(B, self.C, [[0] * ka + list(row) for row in self.iota.matrix])
            self._E = FourTermExt(i, p, self.pi)
        return self._E

    def target_module(self):
        """Where the images live: model (x) X (FG) or X after the shift (divisible)."""
        return self.X if self.divisible else self.fourterm().A

    def target_degree(self, n):
        return n + 1 if self.divisible else n

    def partial_cochain(self, P, n, f):
        if n < 2:
            raise ValueError("degree must be at least 2")
        if self.divisible:
            return bockstein_shift(P, self.X, n, self.partial_rational(P, n, f))
        return double_connecting_cochain(self.fourterm(), P, n - 2, f)

    def partial_rational(self, P, n, f):
        """Divisible mode before the shift: a Q/Z (x) X valued degree-n cochain."""
        g = connecting_cochain(self.iota, self.pi, P, n - 2, f)
        return twisted_connecting_cochain(P, self.I, self.gamma, n - 1, g)

    def partial(self, n, c: CohClass) -> CohClass:
        P = c.group.resolution
        out = self.partial_cochain(P, n, c.cocycle)
        return CohClass(cohomology(self.G, self.target_module(), self.target_degree(n), P), out)

    def source_group(self, n):
        P = self.resolution(self.target_degree(n) + 1)
        return cohomology(self.G, self.D, n - 2, P)

    def target_group(self, n):
        P = self.resolution(self.target_degree(n) + 1)
        return cohomology(self.G, self.target_module(), self.target_degree(n), P)

    def amitsur_group(self, n) -> FgAbGroup:
        src = self.source_group(n)
        tgt = self.target_group(n)
        P = src.resolution
        imgs = [self.partial_cochain(P, n, f) for f in src.generators()]
        return image_group(tgt, imgs)

    def ext2_is_trivial(self) -> bool:
        """Whether alpha is zero in Ext^2(Pic (x) X, model (x) X)."""
        if not self.divisible:
            return ext2_class(self.fourterm()).is_trivial()
        F = module_resolution(self.D, 4)
        phi0, phi1 = lift_identity(F, self.C, self.pi.matrix, self.I, self.iota.matrix)
        phi2 = twisted_connecting_cochain(F, self.I, self.gamma, 1, _flat(phi1))
        z = bockstein_shift(F, self.X, 2, phi2)
        return HomComplex(F, self.X).cohomology(3).is_zero(z)


def alpha_class(p, torus=None, model=None) -> AlphaExtension:
    return AlphaExtension(p, torus, model)


def partial(p, torus, model, n, c: CohClass) -> CohClass:
    return AlphaExtension(p, torus, model).partial(n, c)


def amitsur_group(p, torus=None, model=None, n=2) -> FgAbGroup:
    return AlphaExtension(p, torus, model).amitsur_group(n)


@dataclass
class BetaResult:
    cls: CohClass            # in H^2(G, model (x) Pic^dual) or H^3(G, Pic^dual) when shifted
    nonzero: bool
    shifted: bool
    ext2_trivial: bool


def identity_element(pic: GModule):
    k = pic.rank
    return [1 if a == b else 0 for a in range(k) for b in range(k)]


def beta(p: EquivariantPresentation, model: UnitModel = None) -> BetaResult:
    model = model or UnitModel.divisible()
    pic, _, free = p.pic()
    if not free:
        raise ValueError("Pic has torsion; beta undefined")
    E = AlphaExtension(p, GTorus.neron_severi(pic), model)
    src = E.source_group(2)
    cls = E.partial(2, CohClass(src, identity_element(pic)))
    nonzero = not cls.is_zero()
    trivial_ext = AlphaExtension(p, GTorus.gm(p.group), model).ext2_is_trivial()
    if trivial_ext == nonzero:
        raise RuntimeError("internal error: the two beta routes disagree")
    return BetaResult(cls, nonzero, model.is_divisible, trivial_ext)


def cup_with_beta(p: EquivariantPresentation, n: int, c: CohClass) -> CohClass:
    """c (in H^{n-2}(G, Pic)) cup beta (Q/Z-valued, on P_2), shifted to H^{n+1}(G, Z)."""
    from .cohom import cup_cochain
    from .resolve import diagonal_approximation
    pic, _, _ = p.pic()
    P = c.group.resolution
    E = AlphaExtension(p, GTorus.neron_severi(pic), UnitModel.divisible())
    b = E.partial_rational(P, 2, identity_element(pic))
    k = pic.rank
    mu = [[1 if a == b_ else 0 for a in range(k) for b_ in range(k)]]
    delta = _diagonal(P, n)
    y = cup_cochain(delta, pic, E.X, mu, n - 2, c.cocycle, 2, b)
    Z = trivial(p.group, 1)
    return CohClass(cohomology(p.group, Z, n + 1, P), bockstein_shift(P, Z, n, y))


_diagonals = {}


def _diagonal(P, n):
    from .resolve import diagonal_approximation
    hit = _diagonals.get(id(P))
    if hit is None or hit[0] is not P or hit[1].top < n:
        _diagonals[id(P)] = (P, diagonal_approximation(P, n))
    return _diagonals[id(P)][1]


# ----------------------------------------------------------------------
# built-in presentations

def klein_p1() -> EquivariantPresentation:
    """P^1 with sigma: t -> 1/t and tau: t -> -t; Sigma = {0, infinity}."""
    G = klein()
    return EquivariantPresentation(
        G, ["0", "inf"], {"sigma": [1, 0], "tau": [0, 1]}, ["t"], [[1], [-1]],
        {"sigma": {"t": (ONE, [-1])}, "tau": {"t": (UnitValue.make(Fraction(1, 2)), [1])}},
        label="klein-p1")


def klein_p1_enlarged() -> EquivariantPresentation:
    """The same action with Sigma = {0, infinity, 1, -1} and units t, t-1, t+1."""
    G = klein()
    half = UnitValue.make(Fraction(1, 2))
    return EquivariantPresentation(
        G, ["0", "inf", "1", "-1"],
        {"sigma": [1, 0, 2, 3], "tau": [0, 1, 3, 2]},
        ["t", "t-1", "t+1"],
        [[1, 0, 0], [-1, -1, -1], [0, 1, 0], [0, 0, 1]],
        {"sigma": {"t": (ONE, [-1, 0, 0]), "t-1": (half, [-1, 1, 0]), "t+1": (ONE, [-1, 0, 1])},
         "tau": {"t": (half, [1, 0, 0]), "t-1": (half, [0, 0, 1]), "t+1": (half, [0, 1, 0])}},
        label="klein-p1-enlarged")


def cyclic_projective(m: int, b: UnitValue) -> EquivariantPresentation:
    """P^{m-1} with sigma permuting coordinates cyclically up to b: x_{m-1} -> b x_0."""
    if m < 2:
        raise ValueError("m must be at least 2")
    G = cyclic(m)
    labels = ["D%d" % i for i in range(m)]
    units = ["u%d" % i for i in range(m - 1)]
    div = zeros(m, m - 1)
    for i in range(m - 1):
        div[i][i] = 1
        div[i + 1][i] = -1
    tw = {}
    for i in range(m - 1):
        if i < m - 2:
            mono = [0] * (m - 1)
            mono[i + 1] = 1
            tw[units[i]] = (ONE, mono)
        else:
            tw[units[i]] = (-b, [-1] * (m - 1))
    return EquivariantPresentation(G, labels, {"sigma": [(i + 1) % m for i in range(m)]}, units, div,
                                   {"sigma": tw}, label="cyclic-%d" % m)


def presentation_from_fan(fan, kappa, label="toric") -> EquivariantPresentation:
    """Units M, divisors the free orbits S, twists from kappa_g(u) = phi_g(g u)."""
    M = fan.M
    G = M.group
    r = M.rank
    labels = ["v%d" % i for i in range(len(fan.vectors))]
    units = ["m%d" % j for j in range(r)]
    tw = {}
    for nm, g in zip(G.gen_names, G.generators):
        tw[nm] = {units[j]: (UnitValue.make(kappa[g][0][j]), [M.action[g][i][j] for i in range(r)])
                  for j in range(r)}
    return EquivariantPresentation(G, labels, fan.perms, units, fan.iota, tw, label=label)


def toric_klein(n_test: int = 6):
    """(presentation, construction) for the Klein-four toric example."""
    res = section7_construct(klein(), n_test=n_test)
    fan = fan_realization(res.M)
    return presentation_from_fan(fan, res.kappa, label="toric-klein"), res


BUILTIN_PRESENTATIONS = ("klein-p1", "klein-p1-enlarged", "cyclic", "toric-klein")


def builtin_presentation(name: str, params=None) -> EquivariantPresentation:
    params = params or {}
    if name == "klein-p1":
        return klein_p1()
    if name == "klein-p1-enlarged":
        return klein_p1_enlarged()
    if name == "cyclic":
        m = int(params.get("m", 2))
        b = params.get("b", 2)
        if isinstance(b, UnitValue):
            bv = b
        else:
            bv = integer_unit(int(b))
        return cyclic_projective(m, bv)
    if name == "toric-klein":
        return toric_klein()[0]
    raise ValueError("unknown built-in presentation %r" % name)


def integer_unit(b: int) -> UnitValue:
    """A nonzero integer as a unit: sign as a root of unity, prime powers as free generators."""
    if b == 0:
        raise ValueError("0 is not a unit")
    root = Fraction(1, 2) if b < 0 else Fraction(0)
    b = abs(b)
    free = {}
    q = 2
    while b > 1:
        while b % q == 0:
            free[str(q)] = free.get(str(q), 0) + 1
            b //= q
        q += 1
    return UnitValue.make(root, free)


def rational_model(*primes) -> UnitModel:
    """mu_2 + the named primes: the units of Q generated by them."""
    return UnitModel.fg(2, [str(q) for q in (primes or (2,))])


# ----------------------------------------------------------------------
# restriction kernels

@dataclass
class BogomolovKernel:
    coh: object                      # CohGroup of H^n(G, L)
    group: FgAbGroup                 # the kernel
    basis: list                      # kernel generators in invariant coordinates
    subgroups: list

    def contains(self, cocycle) -> bool:
        x = list(self.coh.coords(cocycle))
        amb = invariant_group(self.coh.invariants)
        return subgroup_generated(self.basis, amb).contains(x)

    @property
    def invariants(self):
        return self.group.invariants


def bogomolov_kernel(G: FinGroup, L: GModule, n: int, subgroups=None, P: FreeResolution = None) -> BogomolovKernel:
    """Intersection over the given subgroups of the kernels of restriction on H^n(G, L)."""
    if subgroups is None:
        subgroups = [H for H in maximal_abelian_subgroups(G)]
    P = P or standard_resolution(G, n + 1)
    if P.top < n + 1:
        P = extend_resolution(P, n + 1)
    src = cohomology(G, L, n, P)
    invs = src.invariants
    k = len(invs)
    gens = src.generators()
    rows = []
    tgt_rel = []
    for H in subgroups:
        imgs = [restriction(H, src.cls(f)) for f in gens]
        tinv = imgs[0].group.invariants if imgs else cohomology(H.group, L, n, P).invariants
        coords = [list(c.coords()) for c in imgs]
        for t in range(len(tinv)):
            rows.append([coords[j][t] for j in range(k)])
        tgt_rel.extend(tinv)
    # x with (image coords) in the target relation lattice
    m = len(rows)
    big = [list(rows[t]) + [tgt_rel[t] if s == t else 0 for s in range(m)] for t in range(m)]
    from .intlat import kernel_basis
    if m:
        K = [v[:k] for v in kernel_basis(big, cols=k + m)]
    else:
        K = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    amb = invariant_group(invs)
    sub = subgroup_generated(K, amb) if K else None
    group = sub.group if sub is not None else FgAbGroup(0)
    basis = [list(v) for v in K]
    return BogomolovKernel(src, _reduce_group(group), basis, subgroups)


def _reduce_group(g: FgAbGroup) -> FgAbGroup:
    return invariant_group(g.invariants)


# ----------------------------------------------------------------------
# the degree-2 del Pezzo dataset

class DP2Dataset:
    def __init__(self, data):
        if data.get("schema") != "amitsur/dp2-dataset-v1":
            raise ValueError("not a dp2 dataset (schema tag missing)")
        self.data = data
        self.G = group_from_data(data["group"])
        self.labels = list(data["curve_labels"])
        self.curve_perms = {k: list(v) for k, v in data["curve_permutations"].items()}
        self.eta = list(data["eta"])
        self.coords = [list(r) for r in data["coordinates"]]
        self.pic_action = data["pic_action"]
        self.n = int(data.get("cyclotomic_order", 8))
        um = data["unit_model"]
        self.model = UnitModel.fg(int(um["torsion"]), [g["name"] for g in um["free_generators"]])
        self.generator_values = [CycloElement.from_list(self.n, g["expr"]) for g in um["free_generators"]]
        self.cocycle = data["cocycle"]

    @classmethod
    def bundled(cls):
        return cls(bundled_data("dp2_m16.json"))

    def to_data(self):
        return self.data

    def pic(self) -> GModule:
        return GModule.from_generators(self.G, 8, self.pic_action, label="Pic")

    def validate(self):
        """Return a list of failures (empty when consistent)."""
        fails = []
        G = self.G
        if len(self.labels) != 56 or len(self.coords) != 56:
            fails.append("need 56 curves with coordinates")
        try:
            permutation(G, self.curve_perms)
        except ValueError as e:
            fails.append("curve permutations: %s" % e)
        try:
            pic = self.pic()
        except ValueError as e:
            fails.append("Pic action: %s" % e)
            return fails
        for k, lab in enumerate(self.eta):
            if lab not in self.labels:
                fails.append("eta label %s unknown" % lab)
                continue
            e = [1 if i == k else 0 for i in range(8)]
            if self.coords[self.labels.index(lab)] != e:
                fails.append("eta %s does not have unit coordinates" % lab)
        for nm in G.gen_names:
            A = pic.action[G.gen(nm)]
            for d in range(len(self.coords)):
                img = self.coords[self.curve_perms[nm][d]]
                if [sum(a * b for a, b in zip(row, self.coords[d])) for row in A] != img:
                    fails.append("Pic action of %s incompatible with curve %s" % (nm, self.labels[d]))
                    break
        for b, block in enumerate(self.cocycle):
            for chi, entry in enumerate(block):
                v = CycloElement.from_list(self.n, entry["expr"])
                t, ex = entry["decomposition"]
                if not verify_unit_decomposition(v, t, ex, self.generator_values):
                    fails.append("decomposition of cocycle entry (%d, %d) fails" % (b, chi))
        return fails

    def cocycle_vector(self, model: UnitModel):
        """The cocycle as a flat cochain: FG integer vector or divisible rationals."""
        out = []
        k = 8
        for block in self.cocycle:
            if model.is_divisible:
                out.extend(Fraction(entry["decomposition"][0], self.n) for entry in block)
            else:
                w = model.width
                vals = [[entry["decomposition"][0]] + list(entry["decomposition"][1]) for entry in block]
                out.extend(vals[chi][m] for m in range(w) for chi in range(k))
        return out

    def subgroups(self):
        G = self.G
        return {"G1": subgroup_from_generators(G, ["sigma"]),
                "G2": subgroup_from_generators(G, ["tau*sigma"]),
                "G3": subgroup_from_generators(G, ["sigma^2", "tau"])}


def dp2_verify(ds: DP2Dataset = None, modes=("divisible", "fg")) -> dict:
    ds = ds or DP2Dataset.bundled()
    report = {"dataset_failures": ds.validate(), "modes": {},
              "assumptions": ["free generators sqrt2-1 and 1-zeta are multiplicatively independent"]}
    if report["dataset_failures"]:
        report["pass"] = False
        return report
    G = ds.G
    pic = ds.pic()
    picd = dual(pic)
    subs = ds.subgroups()
    P = standard_resolution(G, 5)
    for mode in modes:
        model = UnitModel.divisible() if mode == "divisible" else ds.model
        r = {}
        f = ds.cocycle_vector(model)
        if model.is_divisible:
            L, n = picd, 3
            try:
                z = bockstein_shift(P, picd, 2, f)
                r["cocycle"] = True
            except ValueError:
                r["cocycle"] = False
                report["modes"][mode] = r
                continue
        else:
            L, n = tensor(model.module(G), picd), 2
            z = f
            r["cocycle"] = cohomology(G, L, 2, P).is_cocycle(z)
            if not r["cocycle"]:
                report["modes"][mode] = r
                continue
        H = cohomology(G, L, n, P)
        c = H.cls(z)
        r["order"] = c.order()
        r["restrictions_zero"] = {k: restriction(Hs, c).is_zero() for k, Hs in subs.items()}
        ker = bogomolov_kernel(G, L, n, list(subs.values()), P)
        r["kernel"] = ker.invariants
        r["kernel_contains"] = ker.contains(z)
        ab = [Hs for Hs in all_subgroups(G) if Hs.is_abelian()]
        r["all_abelian_restrictions_zero"] = all(restriction(Hs, c).is_zero() for Hs in ab)
        r["degree"] = n
        r["shifted"] = model.is_divisible
        r["pass"] = (r["cocycle"] and r["order"] == 2 and all(r["restrictions_zero"].values())
                     and r["kernel_contains"] and r["all_abelian_restrictions_zero"])
        r["kernel_is_Z2"] = r["kernel"] == [2]
        report["modes"][mode] = r
    d = report["modes"].get("divisible")
    report["pass"] = bool(d and d["pass"] and d["kernel_is_Z2"])
    return report
