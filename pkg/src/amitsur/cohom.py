"""Group cohomology through a free resolution.

A degree-n cochain with values in M is a flat integer vector of length
r_n * rank(M): block i is f(e_i).  The coboundary is
(delta f)_j = sum_i D_{n+1}[j][i] . f_i.  Rational cochains (lists of
Fractions) are used for Q/Z-valued classes and are always routed through the
Bockstein shift before any class-level comparison.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor

from .fingroup import Subgroup
from .gmod import GMap, GModule, restrict
from .intlat import FgAbGroup, IntegerSolver, from_columns, homology, matvec
from .resolve import (DiagonalApproximation, FreeResolution, extend_resolution,
                      restrict_resolution)


def _blocks(vec, k):
    return [vec[i * k:(i + 1) * k] for i in range(len(vec) // k)] if k else []


def _flat(blocks):
    out = []
    for b in blocks:
        out.extend(b)
    return out


def _matvec_any(A, x):
    """A x for integer A and int/Fraction x."""
    return [sum((a * b for a, b in zip(row, x) if a), 0) for row in A]


class HomComplex:
    """Hom_G(P_*, M) with cached coboundary matrices."""

    def __init__(self, P: FreeResolution, M: GModule):
        if P.group.order != M.group.order:
            raise ValueError("resolution and module are over different groups")
        self.P = P
        self.M = M
        self.k = M.rank
        self._delta = {}
        self._groups = {}
        self._coh = {}
        self._ring_cache = {}

    def _ring(self, elt):
        key = tuple(sorted(elt.items()))
        if key not in self._ring_cache:
            self._ring_cache[key] = self.M.ring_matrix(elt)
        return self._ring_cache[key]

    def cochain_group(self, n) -> FgAbGroup:
        if n not in self._groups:
            r = self.P.ranks[n] if n >= 0 else 0
            k = self.k
            U = self.M.underlying
            rels = []
            if U.nrel:
                relcols = [[U.relations[i][j] for i in range(k)] for j in range(U.nrel)]
                for b in range(r):
                    for c in relcols:
                        v = [0] * (r * k)
                        v[b * k:(b + 1) * k] = c
                        rels.append(v)
            self._groups[n] = FgAbGroup(r * k, from_columns(rels, r * k) if rels else None)
        return self._groups[n]

    def dim(self, n):
        return (self.P.ranks[n] if n >= 0 else 0) * self.k

    def delta(self, n):
        """Matrix of C^n -> C^{n+1}."""
        if n in self._delta:
            return self._delta[n]
        if n + 1 > self.P.top:
            raise ValueError("resolution too short: need P_%d" % (n + 1))
        k = self.k
        rows, cols = self.dim(n + 1), self.dim(n)
        out = [[0] * cols for _ in range(rows)]
        if n >= 0:
            D = self.P.diffs[n + 1]
            for j, row in enumerate(D):
                for i, entry in enumerate(row):
                    if entry:
                        A = self._ring(entry)
                        for a in range(k):
                            Oa = out[j * k + a]
                            Aa = A[a]
                            for b in range(k):
                                if Aa[b]:
                                    Oa[i * k + b] += Aa[b]
        self._delta[n] = out
        return out

    def coboundary(self, n, f):
        return _matvec_any(self.delta(n), f)

    def cohomology(self, n) -> "CohGroup":
        if n not in self._coh:
            if n < 0:
                raise ValueError("negative degree")
            prev = self.delta(n - 1) if n >= 1 else [[] for _ in range(self.dim(n))]
            h = homology(self.cochain_group(n), prev, self.delta(n), self.cochain_group(n + 1))
            self._coh[n] = CohGroup(self, n, h)
        return self._coh[n]


class CohGroup:
    """H^n(G, M) computed from a Hom-complex."""

    def __init__(self, cx: HomComplex, n: int, h):
        self.complex = cx
        self.degree = n
        self.homology = h

    @property
    def module(self):
        return self.complex.M

    @property
    def resolution(self):
        return self.complex.P

    @property
    def group(self):
        return self.homology.group

    @property
    def invariants(self):
        return self.homology.invariants

    def order(self):
        return self.homology.group.order()

    def is_cocycle(self, f):
        nxt = self.complex.cochain_group(self.degree + 1)
        return nxt.is_zero(self.complex.coboundary(self.degree, f))

    def coords(self, f):
        if not self.is_cocycle(f):
            raise ValueError("not a cocycle")
        return self.homology.coords(f)

    def is_zero(self, f):
        return not any(self.coords(f))

    def representative(self, coords):
        return self.homology.representative(coords)

    def generators(self):
        return self.homology.generators()

    def cls(self, f) -> "CohClass":
        return CohClass(self, list(f))

    def __repr__(self):
        from .intlat import format_invariants
        return "H^%d = %s" % (self.degree, format_invariants(self.invariants))


class CohClass:
    """A cocycle together with the cohomology group it lives in."""

    def __init__(self, group: CohGroup, cocycle):
        self.group = group
        self.cocycle = list(cocycle)
        if not group.is_cocycle(self.cocycle):
            raise ValueError("cocycle condition fails")

    @property
    def degree(self):
        return self.group.degree

    def coords(self):
        return self.group.coords(self.cocycle)

    def is_zero(self):
        return self.group.is_zero(self.cocycle)

    def order(self):
        return self.group.group.element_order(self.group.homology._solver.solve(self.cocycle))

    def __add__(self, other):
        return CohClass(self.group, [a + b for a, b in zip(self.cocycle, other.cocycle)])

    def __rmul__(self, c):
        return CohClass(self.group, [c * a for a in self.cocycle])

    def __neg__(self):
        return (-1) * self


# ----------------------------------------------------------------------
# entry points

_complex_cache = {}


def hom_complex(P: FreeResolution, M: GModule) -> HomComplex:
    key = (id(P), id(M))
    hit = _complex_cache.get(key)
    if hit is not None and hit.P is P and hit.M is M:
        return hit
    cx = HomComplex(P, M)
    _complex_cache[key] = cx
    return cx


def cohomology(G, M: GModule, n: int, P: FreeResolution) -> CohGroup:
    if P.top < n + 1:
        raise ValueError("resolution too short: has degree %d, need %d" % (P.top, n + 1))
    return hom_complex(P, M).cohomology(n)


def induced_cochain(phi: GMap, f, r):
    k = phi.source.rank
    return _flat([phi(b) for b in _blocks(f, k)]) if k else [0] * (r * phi.target.rank)


def induced(phi: GMap, c: CohClass) -> CohClass:
    P = c.group.resolution
    tgt = cohomology(P.group, phi.target, c.degree, P)
    return CohClass(tgt, induced_cochain(phi, c.cocycle, P.ranks[c.degree]))


def restriction_cochain(P_H: FreeResolution, M: GModule, f):
    """Restrict a G-cochain on P to the H-cochain on P|_H."""
    k = M.rank
    reps = P_H.coset_reps
    out = []
    for b in _blocks(f, k):
        for t in reps:
            out.extend(_matvec_any(M.action[t], b))
    return out


def corestriction_cochain(P_H: FreeResolution, M: GModule, f):
    """Coset-sum transfer of an H-cochain on P|_H back to a G-cochain on P."""
    G = M.group
    k = M.rank
    reps = P_H.coset_reps
    m = len(reps)
    blocks = _blocks(f, k)
    out = []
    for i in range(len(blocks) // m):
        acc = [0] * k
        for pos, t in enumerate(reps):
            v = _matvec_any(M.action[G.inverse[t]], blocks[i * m + pos])
            acc = [a + b for a, b in zip(acc, v)]
        out.extend(acc)
    return out


_restricted = {}


def restricted_resolution(P: FreeResolution, H: Subgroup) -> FreeResolution:
    key = (id(P), tuple(H.elements))
    if key not in _restricted or _restricted[key].parent_resolution is not P:
        _restricted[key] = restrict_resolution(P, H)
    return _restricted[key]


def restriction(H: Subgroup, c: CohClass) -> CohClass:
    P = c.group.resolution
    M = c.group.module
    if H.parent.table != M.group.table:
        raise ValueError("subgroup mismatch")
    PH = restricted_resolution(P, H)
    MH = _restricted_module(M, H)
    tgt = cohomology(H.group, MH, c.degree, PH)
    return CohClass(tgt, restriction_cochain(PH, M, c.cocycle))


_rmods = {}


def _restricted_module(M, H):
    key = (id(M), tuple(H.elements))
    if key not in _rmods or _rmods[key][0] is not M:
        _rmods[key] = (M, restrict(M, H))
    return _rmods[key][1]


def corestriction(H: Subgroup, c: CohClass, M: GModule) -> CohClass:
    """Transfer a class over H (computed on P|_H) to G; ``M`` is the G-module."""
    PH = c.group.resolution
    if getattr(PH, "subgroup", None) is None or PH.subgroup.elements != H.elements:
        raise ValueError("class is not over the restricted resolution of this subgroup")
    P = PH.parent_resolution
    tgt = cohomology(M.group, M, c.degree, P)
    return CohClass(tgt, corestriction_cochain(PH, M, c.cocycle))


# ----------------------------------------------------------------------
# connecting homomorphisms

class ModuleSolver:
    """Solve F x = v modulo the relations of F's target."""

    def __init__(self, F: GMap):
        T = F.target.underlying
        self.n = F.source.rank
        mat = [list(F.matrix[i]) + (list(T.relations[i]) if T.nrel else []) for i in range(T.gens)]
        self.solver = IntegerSolver(mat, cols=self.n + T.nrel)

    def solve(self, v):
        x = self.solver.solve(list(v))
        return None if x is None else x[:self.n]


def connecting_cochain(iota: GMap, pi: GMap, P: FreeResolution, n: int, f):
    """delta: H^n(C) -> H^{n+1}(A) for 0 -> A -> B -> C -> 0 on a cocycle f."""
    A, B, C = iota.source, iota.target, pi.target
    kc = C.rank
    lift_solver = ModuleSolver(pi)
    lifts = []
    for b in _blocks(f, kc):
        x = lift_solver.solve(b)
        if x is None:
            raise ValueError("B -> C is not surjective on this cochain")
        lifts.extend(x)
    if kc == 0:
        lifts = [0] * (P.ranks[n] * B.rank)
    dB = hom_complex(P, B).coboundary(n, lifts)
    back = ModuleSolver(iota)
    out = []
    for b in _blocks(dB, B.rank) if B.rank else [[] for _ in range(P.ranks[n + 1])]:
        x = back.solve(b)
        if x is None:
            raise ValueError("coboundary of the lift does not come from A (is f a cocycle?)")
        out.extend(x)
    if A.rank == 0:
        out = []
    return out


def connecting(ses, c: CohClass) -> CohClass:
    """Connecting map of a short exact sequence (iota: A -> B, pi: B -> C)."""
    iota, pi = ses
    P = c.group.resolution
    n = c.degree
    tgt = cohomology(P.group, iota.source, n + 1, P)
    return CohClass(tgt, connecting_cochain(iota, pi, P, n, c.cocycle))


def validate_ses(iota: GMap, pi: GMap):
    from .gmod import is_exact_at, is_injective, is_surjective
    if not is_injective(iota):
        raise ValueError("non-exact input: A -> B is not injective")
    if not is_surjective(pi):
        raise ValueError("non-exact input: B -> C is not surjective")
    if not is_exact_at(iota, pi):
        raise ValueError("non-exact input: not exact at B")


# ----------------------------------------------------------------------
# divisible coefficients

def frac_mod1(x: Fraction) -> Fraction:
    return x - floor(x)


def reduce_mod1(f):
    return [frac_mod1(Fraction(x)) for x in f]


def bockstein_shift(P: FreeResolution, L: GModule, n: int, f):
    """H^n(G, L (x) Q/Z) -> H^{n+1}(G, L): delta of a rational lift.

    ``f`` is a rational cochain whose reduction mod 1 is a cocycle.
    """
    if not L.is_lattice():
        raise ValueError("Bockstein shift needs a lattice")
    d = hom_complex(P, L).coboundary(n, [Fraction(x) for x in f])
    out = []
    for x in d:
        if x.denominator != 1:
            raise ValueError("not a Q/Z-cocycle")
        out.append(int(x))
    return out


def inverse_shift(P: FreeResolution, L: GModule, n: int, z):
    """Inverse of bockstein_shift: z integral cocycle in degree n+1 -> rational degree-n cochain mod 1."""
    N = P.group.order
    cx = hom_complex(P, L)
    solver = _delta_solver(cx, n)
    y = solver.solve([N * a for a in z])
    if y is None:
        raise ValueError("|G| z is not a coboundary; is z a cocycle in positive degree?")
    return reduce_mod1([Fraction(a, N) for a in y])


_dsolvers = {}


def _delta_solver(cx: HomComplex, n):
    key = (id(cx), n)
    if key not in _dsolvers or _dsolvers[key][0] is not cx:
        _dsolvers[key] = (cx, IntegerSolver(cx.delta(n), cols=cx.dim(n)))
    return _dsolvers[key][1]


def shifted_class(P: FreeResolution, L: GModule, n: int, f) -> CohClass:
    """Class in H^{n+1}(G, L) of a Q/Z-valued degree-n cocycle."""
    return CohClass(cohomology(P.group, L, n + 1, P), bockstein_shift(P, L, n, f))


# ----------------------------------------------------------------------
# cup products

def cup_cochain(delta: DiagonalApproximation, M: GModule, N: GModule, mu, p, u, q, v):
    """Cochain-level cup product u (degree p, values in M) with v (degree q, in N).

    ``mu`` is the matrix of the pairing M (x) N -> L (L.rank x M.rank*N.rank);
    values may be ints or Fractions.
    """
    n = p + q
    P = delta.P
    km, kn = M.rank, N.rank
    ub = _blocks(u, km)
    vb = _blocks(v, kn)
    kl = len(mu)
    out = []
    cache_u, cache_v = {}, {}
    for j in range(P.ranks[n]):
        acc = [0] * kl
        for c, a, g, b, h in delta.component(n, j, p):
            if (a, g) not in cache_u:
                cache_u[(a, g)] = _matvec_any(M.action[g], ub[a])
            if (b, h) not in cache_v:
                cache_v[(b, h)] = _matvec_any(N.action[h], vb[b])
            x, y = cache_u[(a, g)], cache_v[(b, h)]
            t = [xi * yj for xi in x for yj in y]
            val = _matvec_any(mu, t)
            acc = [s + c * w for s, w in zip(acc, val)]
        out.extend(acc)
    return out


def cup(delta: DiagonalApproximation, u: CohClass, v: CohClass, mu, L: GModule) -> CohClass:
    p, q = u.degree, v.degree
    if p + q > delta.top:
        raise ValueError("degree overflow: diagonal approximation only through %d" % delta.top)
    M, N = u.group.module, v.group.module
    f = cup_cochain(delta, M, N, mu, p, u.cocycle, q, v.cocycle)
    return CohClass(cohomology(M.group, L, p + q, delta.P), f)


def ensure_length(P: FreeResolution, n: int) -> FreeResolution:
    """P extended (if needed) so that H^n can be computed."""
    return extend_resolution(P, n + 1) if P.top < n + 1 else P
