"""Four-term extensions, double connecting maps and Ext^2 classes.

Also hosts the construction of a faithful lattice M with a non-split
extension of M by the divisible units whose connecting maps all vanish, and
the lattice data of a toric model for it (``section7_construct`` and
``fan_realization``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .cohom import (CohClass, HomComplex, bockstein_shift, cohomology,
                    connecting, connecting_cochain, cup, induced,
                    inverse_shift, reduce_mod1, _blocks, _matvec_any)
from .fingroup import FinGroup
from .gmod import (GMap, GModule, direct_sum, dual, image, is_exact_at,
                   is_injective, is_surjective, kernel, regular, submodule,
                   trivial)
from .intlat import (FgAbGroup, IntegerSolver, columns, from_columns,
                     identity, matmul, matvec, subgroup_generated, transpose,
                     zeros)
from .resolve import (FreeResolution, diagonal_approximation,
                      extend_resolution, klein_resolution)


# ----------------------------------------------------------------------
# helpers

def free_module(G: FinGroup, r: int, label=None) -> GModule:
    """Z[G]^r on the basis g e_i at index i*|G| + g."""
    N = G.order
    action = []
    for g in range(N):
        A = zeros(r * N, r * N)
        for i in range(r):
            for h in range(N):
                A[i * N + G.table[g][h]][i * N + h] = 1
        action.append(A)
    return GModule(G, FgAbGroup(r * N), action, validate=False, label="Z[G]^%d" % r)


def invariant_group(invs) -> FgAbGroup:
    """The abelian group with the given invariant factors, in diagonal form."""
    k = len(invs)
    rels = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(invs)]
    return FgAbGroup(k, rels if k else None)


def image_group(coh_target, cochains) -> FgAbGroup:
    """Subgroup of a CohGroup generated by the classes of the given cocycles."""
    amb = invariant_group(coh_target.invariants)
    elems = [list(coh_target.coords(f)) for f in cochains]
    return subgroup_generated(elems, amb).group


def _block_matrix(blocks, row_sizes, col_sizes):
    out = zeros(sum(row_sizes), sum(col_sizes))
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            B = blocks[bi][bj]
            if B is not None:
                for i in range(rs):
                    out[r0 + i][c0:c0 + cs] = B[i]
            c0 += cs
        r0 += rs
    return out


# ----------------------------------------------------------------------
# four-term extensions

@dataclass
class FourTermExt:
    """0 -> A -> B -> C -> D -> 0 given by three G-maps."""
    i: GMap
    p: GMap
    q: GMap

    @property
    def A(self):
        return self.i.source

    @property
    def B(self):
        return self.i.target

    @property
    def C(self):
        return self.p.target

    @property
    def D(self):
        return self.q.target

    def validate(self):
        if self.i.target is not self.p.source and self.i.target.rank != self.p.source.rank:
            raise ValueError("mismatched interfaces: A->B and B->C")
        if self.p.target is not self.q.source and self.p.target.rank != self.q.source.rank:
            raise ValueError("mismatched interfaces: B->C and C->D")
        for f in (self.i, self.p, self.q):
            f.validate()
        if not is_injective(self.i):
            raise ValueError("non-exact input: A -> B is not injective")
        if not is_exact_at(self.i, self.p):
            raise ValueError("non-exact input: not exact at B")
        if not is_exact_at(self.p, self.q):
            raise ValueError("non-exact input: not exact at C")
        if not is_surjective(self.q):
            raise ValueError("non-exact input: C -> D is not surjective")
        return True

    def middle(self):
        """I = im(B -> C) with the two short exact sequences through it."""
        I, inc = image(self.p, label="I")
        onto = GMap(self.B, I, identity(self.B.rank), validate=False)
        return I, (self.i, onto), (inc, self.q)


def double_connecting_cochain(E: FourTermExt, P: FreeResolution, m: int, f):
    """Cochain level: f in Z^m(G, D) -> Z^{m+2}(G, A)."""
    _, s1, s2 = E.middle()
    g = connecting_cochain(s2[0], s2[1], P, m, f)
    return connecting_cochain(s1[0], s1[1], P, m + 1, g)


def double_connecting(E: FourTermExt, c: CohClass) -> CohClass:
    """The composite H^{n-2}(G, D) -> H^{n-1}(G, I) -> H^n(G, A)."""
    P = c.group.resolution
    n = c.degree + 2
    if P.top < n + 1:
        raise ValueError("resolution too short: need degree %d" % (n + 1))
    out = double_connecting_cochain(E, P, c.degree, c.cocycle)
    return CohClass(cohomology(P.group, E.A, n, P), out)


def splice(s1, s2) -> FourTermExt:
    """Join 0 -> A -> B -> I -> 0 and 0 -> I -> C -> D -> 0."""
    (a, b), (c, d) = s1, s2
    if b.target.rank != c.source.rank:
        raise ValueError("mismatched interfaces: the two sequences do not share I")
    return FourTermExt(a, c.compose(b), d)


def pushout(E: FourTermExt, f: GMap) -> FourTermExt:
    """Push E along f: A -> A'.  B' = (A' + B) / {(f a, -i a)}."""
    if f.source.rank != E.A.rank:
        raise ValueError("mismatched interfaces: f does not start at A")
    A2, B = f.target, E.B
    k2, kb = A2.rank, B.rank
    S = direct_sum(A2, B)
    rels = [list(r) for r in S.underlying.relations] if S.underlying.nrel else [[] for _ in range(k2 + kb)]
    for a in range(E.A.rank):
        e = [0] * E.A.rank
        e[a] = 1
        col = f(e) + [-x for x in E.i(e)]
        for r, x in zip(rels, col):
            r.append(x)
    B2 = GModule(E.A.group, FgAbGroup(k2 + kb, rels), S.action, validate=False, label="pushout")
    inc = [[1 if r == c else 0 for c in range(k2)] for r in range(k2 + kb)]
    proj = [[0] * k2 + list(row) for row in E.p.matrix]
    return FourTermExt(GMap(A2, B2, inc), GMap(B2, E.C, proj), E.q)


def pullback(E: FourTermExt, g: GMap) -> FourTermExt:
    """Pull E back along g: D' -> D.  C' = C x_D D'."""
    if g.target.rank != E.D.rank:
        raise ValueError("mismatched interfaces: g does not end at D")
    C, D2 = E.C, g.source
    S = direct_sum(C, D2)
    glue = GMap(S, E.D, [list(a) + [-x for x in b] for a, b in zip(E.q.matrix, g.matrix)], validate=False)
    C2, inc = kernel(glue, label="pullback")
    solver = IntegerSolver(inc.matrix, cols=C2.rank)
    cols = []
    for col in columns(E.p.matrix):
        z = solver.solve(list(col) + [0] * D2.rank)
        if z is None:
            raise ValueError("pullback: B -> C does not land in the fibre product")
        cols.append(z)
    p2 = GMap(E.B, C2, from_columns(cols, C2.rank))
    q2 = GMap(C2, D2, [row for row in inc.matrix[C.rank:]])
    return FourTermExt(E.i, p2, q2)


def split_extension(A: GModule, D: GModule) -> FourTermExt:
    """0 -> A -> A -> D -> D -> 0 with identity and zero maps."""
    ka, kd = A.rank, D.rank
    return FourTermExt(GMap(A, A, identity(ka)), GMap(A, D, zeros(kd, ka)), GMap(D, D, identity(kd)))


# ----------------------------------------------------------------------
# Ext^2 classes

def module_resolution(D: GModule, to_degree: int) -> FreeResolution:
    """A free resolution of D starting from the free cover on its generators."""
    k = D.rank
    if k == 0:
        raise ValueError("zero module")
    P0 = FreeResolution(D.group, [k], [None], augmentation=identity(k), target=D, label="F(%s)" % (D.label or "D"))
    return extend_resolution(P0, to_degree)


@dataclass
class Ext2Class:
    """Degree-2 component of a lift of id_D through F -> D into E."""
    E: FourTermExt
    F: FreeResolution
    cocycle: list
    complex: HomComplex = field(repr=False, default=None)

    def coords(self):
        return self.complex.cohomology(2).coords(self.cocycle)

    def is_trivial(self):
        return not any(self.coords())


def lift_identity(F: FreeResolution, C: GModule, q_matrix, B: GModule, p_matrix):
    """phi_0: F_0 -> C over id_D and phi_1: F_1 -> B over phi_0 o d_1."""
    D = F.target
    k = D.rank
    Du = D.underlying
    qsolver = IntegerSolver([list(q_matrix[r]) + (list(Du.relations[r]) if Du.nrel else []) for r in range(k)],
                            cols=C.rank + Du.nrel)
    phi0 = []
    for j in range(F.ranks[0]):
        col = [F.augmentation[r][j] for r in range(k)]
        x = qsolver.solve(col)
        if x is None:
            raise ValueError("C -> D is not surjective")
        phi0.append(x[:C.rank])
    Cu = C.underlying
    psolver = IntegerSolver([list(p_matrix[r]) + (list(Cu.relations[r]) if Cu.nrel else []) for r in range(C.rank)],
                            cols=B.rank + Cu.nrel)
    phi1 = []
    for j in range(F.ranks[1]):
        v = _apply_on_basis(F, 1, j, C, phi0)
        x = psolver.solve(v)
        if x is None:
            raise ValueError("extension is not exact at C")
        phi1.append(x[:B.rank])
    return phi0, phi1


def _apply_on_basis(F: FreeResolution, n, j, M: GModule, values):
    """phi(d e_j) for phi given on the basis of F_{n-1} by ``values``."""
    acc = [0] * M.rank
    for i, entry in enumerate(F.diffs[n][j]):
        if entry:
            v = _matvec_any(M.ring_matrix(entry), values[i])
            acc = [a + b for a, b in zip(acc, v)]
    return acc


def ext2_class(E: FourTermExt, F: FreeResolution = None) -> Ext2Class:
    D = E.D
    if F is None:
        F = module_resolution(D, 3)
    elif F.top < 3:
        F = extend_resolution(F, 3)
    phi0, phi1 = lift_identity(F, E.C, E.q.matrix, E.B, E.p.matrix)
    Bu = E.B.underlying
    isolver = IntegerSolver([list(E.i.matrix[r]) + (list(Bu.relations[r]) if Bu.nrel else [])
                             for r in range(E.B.rank)], cols=E.A.rank + Bu.nrel)
    phi2 = []
    for j in range(F.ranks[2]):
        v = _apply_on_basis(F, 2, j, E.B, phi1)
        x = isolver.solve(v)
        if x is None:
            raise ValueError("extension is not exact at B")
        phi2.extend(x[:E.A.rank])
    cx = HomComplex(F, E.A)
    return Ext2Class(E, F, phi2, cx)


def is_trivial(x: Ext2Class) -> bool:
    return x.is_trivial()


# ----------------------------------------------------------------------
# twisted extensions of a lattice by constants

def twisted_connecting_cochain(P: FreeResolution, L: GModule, gamma, n, f):
    """Constant part of delta(0, f) for an extension of L by trivial constants.

    ``gamma[g]`` is the matrix (rows: constant coordinates, columns: L) of the
    constant part of g acting on L; entries are ints or Fractions.  ``f`` is
    a degree-n cocycle with values in L; the result is a degree-(n+1) cochain.
    """
    k = L.rank
    blocks = _blocks(f, k)
    out = []
    width = len(gamma[0]) if gamma else 0
    for j, row in enumerate(P.diffs[n + 1]):
        acc = [0] * width
        for i, entry in enumerate(row):
            for g, a in entry.items():
                v = _matvec_any(gamma[g], blocks[i])
                acc = [s + a * x for s, x in zip(acc, v)]
        out.extend(acc)
    return out


def crossed_hom_from_cocycle(P: FreeResolution, L: GModule, f):
    """phi: G -> L (x) Q with phi(gh) = phi(g) + g phi(h) from a degree-1 cochain.

    Needs P_0 of rank one and d(e_i) = (g_i - 1) e_0 in degree 1.  Values are
    reduced mod 1; the crossed-hom identity is checked mod 1 on all pairs.
    """
    G = P.group
    if P.ranks[0] != 1:
        raise ValueError("crossed homs need P_0 of rank one")
    k = L.rank
    gens = []
    for row in P.diffs[1]:
        e = row[0]
        g = [x for x, c in e.items() if x != G.identity]
        if len(g) != 1 or e.get(g[0]) != 1 or e.get(G.identity) != -1:
            raise ValueError("degree-1 boundaries are not of the form (g - 1) e_0")
        gens.append(g[0])
    blocks = _blocks(f, k)
    phi = {G.identity: [Fraction(0)] * k}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, val in zip(gens, blocks):
                y = G.table[x][s]
                if y not in phi:
                    phi[y] = reduce_mod1([a + b for a, b in zip(phi[x], _matvec_any(L.action[x], val))])
                    nxt.append(y)
        frontier = nxt
    if len(phi) != G.order:
        raise ValueError("degree-1 generators do not generate G")
    for g in range(G.order):
        for h in range(G.order):
            lhs = phi[G.table[g][h]]
            rhs = reduce_mod1([a + b for a, b in zip(phi[g], _matvec_any(L.action[g], phi[h]))])
            if lhs != rhs:
                raise ValueError("cochain does not define a crossed hom (not a cocycle)")
    return [phi[g] for g in range(G.order)]


def twist_functionals(M: GModule, phi):
    """kappa_g(m) = phi_g(g m) as row vectors, for phi with values in M^dual (x) Q/Z."""
    G = M.group
    out = []
    for g in range(G.order):
        row = _matvec_any(transpose(M.action[g], cols=M.rank), phi[g])
        out.append([reduce_mod1(row)])
    return out


# ----------------------------------------------------------------------
# syzygies

@dataclass
class Syzygy:
    module: GModule          # Omega^k Z
    inclusion: GMap          # into P_{k-1}
    ambient: GModule         # P_{k-1} as a G-lattice
    w: FourTermExt = None    # 0 -> Omega^2 -> P_1 -> P_0 -> Z -> 0 when k = 2


def _free_of(P: FreeResolution, n):
    return free_module(P.group, P.ranks[n], label="P%d" % n)


def syzygy(P: FreeResolution, k: int) -> Syzygy:
    if k < 1:
        raise ValueError("syzygy degree must be at least 1")
    if P.top < k:
        raise ValueError("resolution too short")
    G = P.group
    Z = trivial(G, 1, label="Z")
    Pk1 = _free_of(P, k - 1)
    if k == 1:
        d = GMap(Pk1, Z, P.expanded_augmentation(), validate=False)
    else:
        d = GMap(Pk1, _free_of(P, k - 2), P.expanded(k - 1), validate=False)
    Om, inc = kernel(d, label="Omega%d" % k)
    out = Syzygy(Om, inc, Pk1)
    if k == 2:
        P0 = d.target
        aug = GMap(P0, Z, P.expanded_augmentation(), validate=False)
        out.w = FourTermExt(inc, d, aug)
    return out


def dual_ext(E: FourTermExt) -> FourTermExt:
    """Hom(-, Z) of a four-term sequence of lattices, read backwards."""
    Ad, Bd, Cd, Dd = dual(E.A), dual(E.B), dual(E.C), dual(E.D)
    return FourTermExt(GMap(Dd, Cd, transpose(E.q.matrix, cols=E.C.rank)),
                       GMap(Cd, Bd, transpose(E.p.matrix, cols=E.B.rank)),
                       GMap(Bd, Ad, transpose(E.i.matrix, cols=E.A.rank)))


def stabilized_w(w: FourTermExt) -> FourTermExt:
    """0 -> Omega + Z[G] -> P_1 + Z[G] -> P_0 -> Z -> 0 (new summand maps by zero)."""
    G = w.A.group
    R = regular(G)
    N = G.order
    Om2 = direct_sum(w.A, R)
    P1 = direct_sum(w.B, R)
    ka, kb = w.A.rank, w.B.rank
    i2 = _block_matrix([[w.i.matrix, None], [None, identity(N)]], [kb, N], [ka, N])
    p2 = [list(r) + [0] * N for r in w.p.matrix]
    return FourTermExt(GMap(Om2, P1, i2, validate=False), GMap(P1, w.C, p2, validate=False), w.q)


# ----------------------------------------------------------------------
# the Klein-four construction

@dataclass
class KleinLatticeResult:
    M: GModule                      # faithful lattice
    c_Z: CohClass                   # in H^2(G, M^dual)
    c: list                         # rational cochain on P_1, values M^dual (x) Q/Z
    phi: list                       # crossed hom G -> M^dual (x) Q/Z
    kappa: list                     # kappa_g as 1 x rank(M) rational rows
    resolution: FreeResolution
    stabilized: bool
    a: list
    report: dict


def _search_preimage_norm(candidates_basis, image_coords, target):
    """First integer combination (by increasing l1 norm, then lexicographic) whose image is target."""
    r = len(candidates_basis)
    bound = 0
    while bound <= 6:
        bound += 1
        for coeffs in product(range(-bound, bound + 1), repeat=r):
            if sum(abs(c) for c in coeffs) != bound:
                continue
            if image_coords(coeffs) == target:
                return list(coeffs)
    return None


def section7_construct(G: FinGroup = None, n_test: int = 6) -> KleinLatticeResult:
    from .fingroup import klein
    G = G or klein()
    if G.order != 4 or not G.is_abelian() or G.exponent() != 2:
        raise ValueError("the construction is specific to the Klein four-group")
    P = klein_resolution(max(n_test + 3, 5), G)
    Z = trivial(G, 1, label="Z")
    Om = syzygy(P, 2)
    wdual = dual_ext(Om.w)
    # A, B: Bocksteins of the characters dual to the degree-1 generators
    gens1 = [next(x for x in row[0] if x != G.identity) for row in P.diffs[1]]
    sig, tau = G.gen("sigma"), G.gen("tau")
    xs = [Fraction(1, 2) if g == sig else Fraction(0) for g in gens1]
    ys = [Fraction(1, 2) if g == tau else Fraction(0) for g in gens1]
    H2 = cohomology(G, Z, 2, P)
    A = H2.cls(bockstein_shift(P, Z, 1, xs))
    B = H2.cls(bockstein_shift(P, Z, 1, ys))
    delta = diagonal_approximation(P, 4)
    B2 = cup(delta, B, B, [[1]], Z)
    H4 = B2.group
    # a in Hom_G(Omega, Z) with a o w = A
    Omd = wdual.D
    H0 = cohomology(G, Omd, 0, P)
    fixed = Omd.invariants_basis()

    def a_image(coeffs):
        v = [sum(c * b[t] for c, b in zip(coeffs, fixed)) for t in range(Omd.rank)]
        return H2.coords(double_connecting(wdual, H0.cls(v)).cocycle)
    a = _search_preimage_norm(fixed, a_image, A.coords())
    if a is None:
        raise ValueError("search failure for a (resolution bug?)")
    a_vec = [sum(c * b[t] for c, b in zip(a, fixed)) for t in range(Omd.rank)]
    w = Om.w
    stabilized = False
    Mmod, inc = kernel(GMap(w.A, Z, [a_vec], validate=False), label="M")
    if gcd(*a_vec) != 1 or not Mmod.is_faithful():
        stabilized = True
        w = stabilized_w(w)
        wdual = dual_ext(w)
        a_vec = a_vec + [1] * G.order
        Mmod, inc = kernel(GMap(w.A, Z, [a_vec], validate=False), label="M")
    Omd = wdual.D
    # b in H^2(G, Omega^dual) with b o w = B^2
    H2O = cohomology(G, Omd, 2, P)
    gens = H2O.generators()
    imgs = [H4.coords(double_connecting(wdual, H2O.cls(g)).cocycle) for g in gens]
    amb = invariant_group(H4.invariants)
    sub = subgroup_generated(imgs, amb)
    sol = sub._solver.solve(list(B2.coords()))
    if sol is None:
        raise ValueError("search failure for b (resolution bug?)")
    coeffs = sol[:len(gens)]
    b = [sum(c * g[t] for c, g in zip(coeffs, gens)) for t in range(len(gens[0]) if gens else 0)]
    Md = dual(Mmod)
    idual = GMap(Omd, Md, transpose(inc.matrix, cols=Mmod.rank), validate=False)
    c_Z = induced(idual, H2O.cls(b))
    c = inverse_shift(P, Md, 1, c_Z.cocycle)
    phi = crossed_hom_from_cocycle(P, Md, c)
    kappa = twist_functionals(Mmod, phi)
    report = {"c_nonzero": not c_Z.is_zero(), "vanishing_checked_through": n_test,
              "failures": [], "faithful": Mmod.is_faithful(), "stabilized": stabilized,
              "rank": Mmod.rank}
    if not report["c_nonzero"]:
        report["failures"].append("c is zero")
    for n in range(1, n_test + 1):
        Hn = cohomology(G, Mmod, n, P)
        tgt = cohomology(G, Z, n + 2, P)
        for f in Hn.generators():
            y = twisted_connecting_cochain(P, Mmod, kappa, n, f)
            z = bockstein_shift(P, Z, n + 1, y)
            if not tgt.is_zero(z):
                report["failures"].append("connecting map nonzero in degree %d" % n)
                break
    return KleinLatticeResult(Mmod, c_Z, c, phi, kappa, P, stabilized, a_vec, report)


# ----------------------------------------------------------------------
# fan data

@dataclass
class FanData:
    M: GModule
    vectors: list            # elements of S in dual coordinates (orbit by orbit)
    perms: dict              # generator name -> permutation of S
    iota: list               # |S| x rank(M): row v is <., v>
    orbit_count: int


def _primitive(v):
    return gcd(*v) == 1


def fan_realization(M: GModule, max_bound: int = 4) -> FanData:
    """Free orbits of primitive vectors in M^dual whose span is all of M^dual."""
    if not M.is_lattice():
        raise ValueError("M must be a lattice")
    if not M.is_faithful():
        raise ValueError("M is not faithful")
    G = M.group
    N = dual(M)
    r = N.rank
    chosen = []
    seen = set()
    span = []
    cur_rank, cur_index = 0, None

    def lattice_stats(vecs):
        from .intlat import smith_normal_form
        S = smith_normal_form(from_columns(vecs, r), cols=len(vecs))
        diag = [d for d in S.diagonal if d]
        idx = 1
        for d in diag:
            idx *= d
        return len(diag), idx

    for bound in range(1, max_bound + 1):
        shell = [v for v in product(range(-bound, bound + 1), repeat=r) if max(abs(x) for x in v) == bound]
        for v in shell:
            v = list(v)
            if tuple(v) in seen or not _primitive(v):
                continue
            orbit = [tuple(N.act(g, v)) for g in range(G.order)]
            if len(set(orbit)) != G.order:
                continue
            seen.update(orbit)
            rk, idx = lattice_stats(span + [list(o) for o in orbit])
            if rk > cur_rank or (rk == r and idx < cur_index):
                chosen.append([list(o) for o in orbit])
                span += [list(o) for o in orbit]
                cur_rank, cur_index = rk, idx
                if rk == r and idx == 1:
                    return _fan_data(M, N, chosen)
    raise ValueError("search bound exceeded: no spanning free orbits within box %d" % max_bound)


def _fan_data(M, N, orbits):
    G = M.group
    vecs = [v for orb in orbits for v in orb]
    pos = {tuple(v): i for i, v in enumerate(vecs)}
    perms = {}
    for nm, g in zip(G.gen_names, G.generators):
        perms[nm] = [pos[tuple(N.act(g, v))] for v in vecs]
    iota = [list(v) for v in vecs]
    return FanData(M, vecs, perms, iota, len(orbits))
