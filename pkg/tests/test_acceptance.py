"""Acceptance criteria.  Each test prints one PASS/FAIL line; all tolerances are exact."""
import random
import time

import amitsur.amitsur as am
from amitsur.cohom import bockstein_shift, cohomology
from amitsur.extcalc import fan_realization, section7_construct, twisted_connecting_cochain
from amitsur.fingroup import all_subgroups, cyclic, klein, modular16
from amitsur.gmod import regular, trivial, trivial_cyclic
from amitsur.intlat import smith_normal_form
from amitsur.resolve import extend_resolution, klein_resolution, periodic_resolution

from helpers import abelianization_invariants, cores_res_check, minors_gcd, rank_q

RESULTS = []


class Criterion:
    """Collect named sub-checks, then report one line and assert."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failed = []
        self.t0 = time.perf_counter()

    def check(self, name, ok):
        if not ok:
            self.failed.append(name)

    def finish(self):
        elapsed = time.perf_counter() - self.t0
        self.check("runtime %.1fs within %ds" % (elapsed, self.budget), elapsed < self.budget)
        ok = not self.failed
        line = "%s criterion %d (%s): %.1fs, budget %ds, tolerance exact%s" % (
            "PASS" if ok else "FAIL", self.number, self.title, elapsed, self.budget,
            "" if ok else "; failed: " + "; ".join(self.failed))
        print(line)
        RESULTS.append(line)
        assert ok, line


def test_criterion_1_klein_ladder():
    c = Criterion(1, "Klein/P1 ladder", 10)
    p = am.klein_p1()
    E = am.AlphaExtension(p)
    got = [E.amitsur_group(n).order() for n in range(2, 9)]
    c.check("orders %s" % got, got == [2, 1, 4, 2, 8, 4, 16])
    for n in range(2, 9):
        inv = E.amitsur_group(n).invariants
        expect = [2] * (n // 2) if n % 2 == 0 else [2] * ((n - 3) // 2)
        c.check("Am^%d elementary abelian" % n, inv == expect)
    src = E.source_group(2)
    (gen,) = src.generators()
    c.check("Pic^G = Z", src.invariants == [0])
    kernel = [k for k in range(-6, 7) if E.partial(2, src.cls([k * x for x in gen])).is_zero()]
    c.check("kernel of partial^2 is 2Z", kernel == [k for k in range(-6, 7) if k % 2 == 0])
    c.finish()


def test_criterion_2_cyclic_arithmetic():
    c = Criterion(2, "cyclic arithmetic dependence", 10)
    model = am.rational_model(2)
    for m in (2, 3, 4, 6):
        for b in (2, 2 ** m):
            p = am.cyclic_projective(m, am.integer_unit(b))
            E = am.AlphaExtension(p, None, model)
            for n in range(2, 9):
                inv = E.amitsur_group(n).invariants
                expect = [m] if (b == 2 and n % 2 == 0) else []
                c.check("m=%d b=%d Am^%d = %s" % (m, b, n, inv), inv == expect)
        # b = 2^k is an m-th power in Q exactly when m divides k
        for k in range(0, 2 * m + 1):
            nz = am.beta(am.cyclic_projective(m, am.integer_unit(2 ** k)), model).nonzero
            c.check("m=%d b=2^%d beta" % (m, k), nz == (k % m != 0))
    c.finish()


def test_criterion_3_separation():
    c = Criterion(3, "beta nonzero with vanishing Am", 60)
    G = klein()
    res = section7_construct(G, n_test=6)
    c.check("c nonzero", not res.c_Z.is_zero())
    M, P = res.M, res.resolution
    Z = trivial(G, 1)
    for n in range(1, 7):
        Hn = cohomology(G, M, n, P)
        tgt = cohomology(G, Z, n + 2, P)
        zero = all(tgt.is_zero(bockstein_shift(P, Z, n + 1, twisted_connecting_cochain(P, M, res.kappa, n, f)))
                   for f in Hn.generators())
        c.check("connecting map zero in degree %d" % n, zero)
    fan = fan_realization(M)
    p = am.presentation_from_fan(fan, res.kappa, label="toric-klein")
    p.validate()
    c.check("divisor lattice is G-free", len(fan.vectors) == fan.orbit_count * G.order)
    Zs = p.divisor_module()
    c.check("no fixed divisors", all(Zs.action[g][i][i] == 0 for g in range(G.order) if g != G.identity
                                     for i in range(p.n_div)))
    c.check("beta nonzero", am.beta(p).nonzero)
    E = am.AlphaExtension(p)
    for n in range(2, 7):
        c.check("Am^%d = 0" % n, E.amitsur_group(n).order() == 1)
    c.finish()


def test_criterion_4_m16_suite():
    c = Criterion(4, "M16 suite", 120)
    G = modular16()
    P = am.m16_published_resolution(G)
    rep = P.validate(raise_on_error=False)
    c.check("d o d = 0", rep["d_squared_zero"])
    c.check("exact in degrees 1..4", all(d in rep["exact_degrees"] for d in range(1, 5)))
    c.check("H_0 = Z", rep["H0"] == [0])
    R = extend_resolution(P, 7)
    rep = R.validate(raise_on_error=False)
    c.check("extension valid", rep["valid"] and all(d in rep["exact_degrees"] for d in range(1, 7)))
    Z = trivial(G, 1)
    h2 = cohomology(G, Z, 2, R).invariants
    # H^2(G, Z) is dual to the abelianization
    c.check("H^2 = %s" % h2, h2 == abelianization_invariants(G) == [2, 4])
    for n in range(2, 7):
        k = am.bogomolov_kernel(G, Z, n, P=R).invariants
        c.check("B^%d = %s" % (n, k), k == [])
    c.finish()


def test_criterion_5_dp2():
    c = Criterion(5, "dp2_verify", 60)
    rep = am.dp2_verify()
    c.check("dataset consistent", rep["dataset_failures"] == [])
    for mode in ("divisible", "fg"):
        r = rep["modes"][mode]
        c.check("%s: 2-cocycle" % mode, r["cocycle"])
        c.check("%s: order 2" % mode, r.get("order") == 2)
        c.check("%s: zero on G1, G2, G3" % mode, all(r.get("restrictions_zero", {0: False}).values()))
        c.check("%s: kernel Z/2" % mode, r.get("kernel") == [2])
        c.check("%s: kernel contains the class" % mode, r.get("kernel_contains"))
    c.check("overall pass", rep["pass"])
    c.finish()


def test_criterion_6_properties():
    c = Criterion(6, "property suites", 60)
    # free orbits do not change Am or the vanishing of beta
    for name in am.BUILTIN_PRESENTATIONS:
        p = am.builtin_presentation(name, {"m": 4, "b": 2})
        q = am.adjoin_free_orbit(p)
        models = [None] if name == "toric-klein" else [None, am.rational_model(2)]
        for model in models:
            a = [am.amitsur_group(p, None, model, n).invariants for n in range(2, 7)]
            b = [am.amitsur_group(q, None, model, n).invariants for n in range(2, 7)]
            c.check("%s orbit invariance of Am" % name, a == b)
            c.check("%s orbit invariance of beta" % name,
                    am.beta(p, model).nonzero == am.beta(q, model).nonzero)
    # the two presentations of P^1
    a, b = am.klein_p1(), am.klein_p1_enlarged()
    c.check("presentation independence",
            [am.amitsur_group(a, None, None, n).invariants for n in range(2, 7)]
            == [am.amitsur_group(b, None, None, n).invariants for n in range(2, 7)])
    # cores o res = index
    rng = random.Random(2024)
    for G, P in ((klein(), klein_resolution(4)), (cyclic(6), periodic_resolution(cyclic(6), 4)),
                 (modular16(), am.standard_resolution(modular16(), 4))):
        subs = [H for H in all_subgroups(G) if 1 < H.order < G.order]
        for _ in range(3):
            M = rng.choice([trivial(G, 1), trivial_cyclic(G, 4), regular(G)])
            H, n = rng.choice(subs), rng.randint(1, 3)
            try:
                cores_res_check(G, H, M, n, P)
                ok = True
            except AssertionError:
                ok = False
            c.check("cores o res on %s" % G.label, ok)
    # partial^n agrees with the cup product against beta
    p = am.klein_p1()
    E = am.AlphaExtension(p)
    for n in (2, 3, 4):
        src = E.source_group(n)
        for f in src.generators():
            cl = src.cls(f)
            c.check("cup agreement n=%d" % n, (E.partial(n, cl) + (-am.cup_with_beta(p, n, cl))).is_zero())
    # split extensions give zero everywhere
    for p in (am.klein_p1(), am.cyclic_projective(4, am.integer_unit(2))):
        tw = {g: {u: (am.ONE, mono) for u, (_, mono) in t.items()} for g, t in p.twists.items()}
        s = am.EquivariantPresentation(p.group, p.divisor_labels, p.divisor_perms, p.unit_labels, p.div, tw)
        for model in (None, am.rational_model(2)):
            c.check("split %s" % p.label,
                    all(am.amitsur_group(s, None, model, n).order() == 1 for n in range(2, 7))
                    and not am.beta(s, model).nonzero)
    # Smith normal form against determinantal divisors
    for _ in range(80):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        d = [x for x in smith_normal_form(A).diagonal if x]
        prod, ok = 1, len(d) == rank_q(A)
        for k in range(1, len(d) + 1):
            prod *= d[k - 1]
            ok = ok and prod == minors_gcd(A, k)
        c.check("SNF oracle on %s" % A, ok)
    c.finish()
