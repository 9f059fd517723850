"""Exact integer linear algebra and finitely generated abelian groups.

Matrices are plain lists of row lists of Python ints.  Everything here is
built on one primitive, the Smith normal form, which runs in the compiled
kernel when it is available and falls back to the pure-Python reference on
import failure or 64-bit overflow.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd

from . import _pycore

BACKEND = "python"
_csmith = None
if os.environ.get("AMITSUR_PURE_PYTHON") != "1":
    try:
        from ._core import smith as _csmith
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _csmith = None


def _smith_raw(A, m, n, want_u=True, want_v=True):
    if _csmith is not None:
        try:
            return _csmith(A, m, n, want_u, want_v)
        except OverflowError:
            pass
    return _pycore.smith(A, m, n, want_u, want_v)


# ----------------------------------------------------------------------
# small matrix helpers

def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def shape(A, cols=None):
    """Row and column counts; ``cols`` disambiguates matrices with no rows."""
    m = len(A)
    if m == 0:
        return 0, (cols or 0)
    return m, len(A[0])


def transpose(A, cols=None):
    m, n = shape(A, cols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def matmul(A, B, inner=None, cols=None):
    m = len(A)
    k = len(B) if inner is None else inner
    n = len(B[0]) if B else (cols or 0)
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        Ai, Oi = A[i], out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    b = Bt[j]
                    if b:
                        Oi[j] += a * b
    return out


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x) if a) for row in A]


def hstack(*blocks, rows=None):
    blocks = [b for b in blocks if b is not None]
    m = rows if rows is not None else max((len(b) for b in blocks), default=0)
    out = [[] for _ in range(m)]
    for b in blocks:
        if not b:
            continue
        for i in range(m):
            out[i].extend(b[i])
    return out


def columns(A):
    return transpose(A)


def from_columns(cols, m):
    """Matrix with the given column vectors (m rows)."""
    return [[c[i] for c in cols] for i in range(m)]


def is_zero_matrix(A):
    return all(not x for row in A for x in row)


# ----------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = D with D diagonal, d_i | d_{i+1}, U and V unimodular."""
    U: list
    D: list
    V: list
    diagonal: tuple

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A, cols=None) -> SmithDecomposition:
    m, n = shape(A, cols)
    diag, U, V = _smith_raw(A, m, n)
    D = zeros(m, n)
    for i, d in enumerate(diag):
        D[i][i] = d
    full = tuple(diag) + (0,) * (min(m, n) - len(diag))
    return SmithDecomposition(U, D, V, full)


def rank(A, cols=None):
    m, n = shape(A, cols)
    diag, _, _ = _smith_raw(A, m, n, False, False)
    return len(diag)


def invert_unimodular(U):
    """Exact inverse of a square unimodular integer matrix."""
    n = len(U)
    diag, P, Q = _smith_raw(U, n, n)
    if len(diag) != n or any(d != 1 for d in diag):
        raise ValueError("matrix is not unimodular")
    # P U Q = I  =>  U^-1 = Q P
    return matmul(Q, P)


class IntegerSolver:
    """Solve A x = b over Z for many right-hand sides with one factorization."""

    def __init__(self, A, cols=None):
        self.m, self.n = shape(A, cols)
        diag, self.U, self.V = _smith_raw(A, self.m, self.n)
        self.diag = diag
        self.rank = len(diag)

    def solve(self, b):
        if len(b) != self.m:
            raise ValueError("dimension mismatch: expected %d entries" % self.m)
        y = matvec(self.U, b) if self.m else []
        x_sn = [0] * self.n
        for i, d in enumerate(self.diag):
            q, r = divmod(y[i], d)
            if r:
                return None
            x_sn[i] = q
        if any(y[self.rank:]):
            return None
        return [sum(self.V[i][j] * x_sn[j] for j in range(self.rank) if x_sn[j])
                for i in range(self.n)]

    def solve_rational(self, b):
        """Rational solution (Fractions) or None if A x = b has no solution over Q."""
        from fractions import Fraction
        y = matvec(self.U, b) if self.m else []
        if any(y[self.rank:]):
            return None
        x_sn = [Fraction(y[i], d) for i, d in enumerate(self.diag)]
        return [sum((self.V[i][j] * x_sn[j] for j in range(self.rank)), Fraction(0))
                for i in range(self.n)]

    def solve_columns(self, B, cols):
        """Solve A X = B column by column; None for columns without a solution."""
        if cols == 0:
            return []
        Y = matmul(self.U, B, cols=cols) if self.m else [[] for _ in range(0)]
        r = self.rank
        ok = [True] * cols
        for i in range(r, self.m):
            for j, v in enumerate(Y[i]):
                if v:
                    ok[j] = False
        Xs = zeros(r, cols)
        for i, d in enumerate(self.diag):
            Yi, Xi = Y[i], Xs[i]
            for j in range(cols):
                q, rem = divmod(Yi[j], d)
                if rem:
                    ok[j] = False
                Xi[j] = q
        Vr = [row[:r] for row in self.V]
        X = matmul(Vr, Xs, inner=r, cols=cols) if r else zeros(self.n, cols)
        return [[X[i][j] for i in range(self.n)] if ok[j] else None for j in range(cols)]

    def kernel(self):
        return [[self.V[i][j] for i in range(self.n)] for j in range(self.rank, self.n)]


def solve_integer(A, b, cols=None):
    """Return (x, kernel_basis) with A x = b, or (None, kernel_basis)."""
    m, n = shape(A, cols)
    if len(b) != m:
        raise ValueError("dimension mismatch: A has %d rows, b has %d entries" % (m, len(b)))
    s = IntegerSolver(A, cols=n)
    return s.solve(b), s.kernel()


def kernel_basis(A, cols=None):
    m, n = shape(A, cols)
    diag, _, V = _smith_raw(A, m, n, False, True)
    r = len(diag)
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


# ----------------------------------------------------------------------
# finitely generated abelian groups

class FgAbGroup:
    """Z^n modulo the span of the columns of ``relations`` (n x k).

    Elements are integer vectors in the given generators; the Smith data is
    an internal cache used for normal forms and invariant factors.
    """

    def __init__(self, gens: int, relations=None):
        self.gens = gens
        rel = [list(r) for r in relations] if relations is not None else [[] for _ in range(gens)]
        if len(rel) != gens:
            raise ValueError("relations must have one row per generator")
        k = len(rel[0]) if gens else 0
        if any(len(r) != k for r in rel):
            raise ValueError("ragged relation matrix")
        self.relations = rel
        self.nrel = k
        diag, U, _ = _smith_raw(rel, gens, k, True, False)
        self._U = U
        self._d = list(diag) + [0] * (gens - len(diag))
        self._Uinv = None

    # invariants -------------------------------------------------------
    @property
    def invariants(self):
        """Non-unit invariant factors, with 0 for each free summand."""
        return [d for d in self._d if d != 1]

    @property
    def torsion_invariants(self):
        return [d for d in self._d if d > 1]

    @property
    def free_rank(self):
        return sum(1 for d in self._d if d == 0)

    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self._d:
            out *= d
        return out

    def is_trivial(self):
        return all(d == 1 for d in self._d)

    def __eq__(self, other):
        return isinstance(other, FgAbGroup) and self.invariants == other.invariants

    def __hash__(self):
        return hash(tuple(self.invariants))

    def __repr__(self):
        return "FgAbGroup(%s)" % format_invariants(self.invariants)

    # elements ---------------------------------------------------------
    def check(self, x):
        if len(x) != self.gens:
            raise ValueError("element has %d coordinates, group has %d generators" % (len(x), self.gens))

    def normal_form(self, x):
        """Canonical coordinates in the Smith basis: entries mod d_i (free ones kept)."""
        self.check(x)
        y = matvec(self._U, x) if self.gens else []
        return tuple(v % d if d else v for v, d in zip(y, self._d))

    def invariant_coords(self, x):
        """Coordinates on the non-unit invariant factors only."""
        nf = self.normal_form(x)
        return tuple(v for v, d in zip(nf, self._d) if d != 1)

    def is_zero(self, x):
        return not any(self.normal_form(x))

    def zero_columns(self, X, cols):
        """Whether every column of X (gens x cols) is zero in the group."""
        if not self.gens or not cols:
            return True
        if not self.nrel:
            return all(not v for row in X for v in row)
        Y = matmul(self._U, X, cols=cols)
        return all(v % d == 0 if d else v == 0 for row, d in zip(Y, self._d) for v in row)

    def eq(self, x, y):
        return self.normal_form(x) == self.normal_form(y)

    def element_order(self, x):
        """Order of x, or None when infinite."""
        out = 1
        for v, d in zip(self.normal_form(x), self._d):
            if d == 0:
                if v:
                    return None
            elif v:
                o = d // gcd(v, d)
                out = out * o // gcd(out, o)
        return out

    def from_invariant_coords(self, coords):
        """A representative for the given invariant-factor coordinates."""
        if self._Uinv is None:
            self._Uinv = invert_unimodular(self._U) if self.gens else []
        full = []
        it = iter(coords)
        for d in self._d:
            full.append(0 if d == 1 else next(it))
        return matvec(self._Uinv, full) if self.gens else []

    def invariant_generators(self):
        """Representatives of the cyclic generators, one per invariant factor."""
        out = []
        k = len(self.invariants)
        for i in range(k):
            e = [0] * k
            e[i] = 1
            out.append(self.from_invariant_coords(e))
        return out

    def add(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def scale(self, c, x):
        return [c * a for a in x]

    def zero(self):
        return [0] * self.gens


def format_invariants(invs):
    if not invs:
        return "0"
    parts = ["Z" if d == 0 else "Z/%d" % d for d in invs]
    return " \u2295 ".join(parts)


def group_from_relations(gen_count, relations) -> FgAbGroup:
    return FgAbGroup(gen_count, relations)


def cyclic_group(n):
    return FgAbGroup(1, [[n]])


def free_group(n):
    return FgAbGroup(n, [[] for _ in range(n)])


@dataclass
class AbHom:
    """Homomorphism of FgAbGroups given by an integer matrix on generators.

    ``matrix`` has one row per target generator and one column per source
    generator.
    """
    source: FgAbGroup
    target: FgAbGroup
    matrix: list

    def __call__(self, x):
        return matvec(self.matrix, x) if self.target.gens else []

    def check_well_defined(self):
        for col in columns(self.source.relations) if self.source.nrel else []:
            if not self.target.is_zero(self(col)):
                raise ValueError("map does not respect relations")


@dataclass
class Homology:
    """ker(g)/im(f) presented on a basis of the cycle lattice."""
    group: FgAbGroup
    cycle_basis: list          # columns spanning ker g (with the B relations)
    ambient_gens: int
    _solver: IntegerSolver = field(repr=False, default=None)

    def coords(self, cycle):
        """Invariant-factor coordinates of the class of a cycle."""
        z = self._solver.solve(list(cycle))
        if z is None:
            raise ValueError("not a cycle")
        return self.group.invariant_coords(z)

    def is_boundary(self, cycle):
        return not any(self.coords(cycle))

    def representative(self, coords):
        z = self.group.from_invariant_coords(coords)
        return [sum(c[i] * z[j] for j, c in enumerate(self.cycle_basis)) for i in range(self.ambient_gens)]

    def generators(self):
        return [self.representative(e) for e in _unit_vectors(len(self.group.invariants))]

    @property
    def invariants(self):
        return self.group.invariants


def _unit_vectors(k):
    return [[1 if i == j else 0 for i in range(k)] for j in range(k)]


def homology(B: FgAbGroup, f_matrix, g_matrix, C: FgAbGroup, check=True) -> Homology:
    """ker(g: B -> C) / (im f + relations of B).

    ``f_matrix`` is B.gens x (source gens) and ``g_matrix`` is C.gens x B.gens.
    """
    n = B.gens
    # cycle lattice: x with g x in the relation lattice of C
    if C.gens:
        big = hstack(g_matrix, C.relations, rows=C.gens) if C.nrel else [list(r) for r in g_matrix]
        ker = kernel_basis(big, cols=n + C.nrel)
        K = [v[:n] for v in ker]
    else:
        K = _unit_vectors(n)
    # K spans the cycle lattice; reduce to a basis
    if K:
        Kmat = from_columns(K, n)
        diag, U, V = _smith_raw(transpose(Kmat), len(K), n, True, False)
        # rows of U*K^T span the same lattice; keep the nonzero ones
        Hrows = matmul(U, transpose(Kmat), cols=n)
        basis = [r for r in Hrows if any(r)]
    else:
        basis = []
    kdim = len(basis)
    Kb = from_columns(basis, n)
    solver = IntegerSolver(Kb, cols=kdim)
    rels = []
    fc = len(f_matrix[0]) if f_matrix and f_matrix[0] else 0
    if fc:
        if check and C.gens and not C.zero_columns(matmul(g_matrix, f_matrix, inner=n, cols=fc), fc):
            raise ValueError("not a complex: g o f != 0")
        sols = solver.solve_columns(f_matrix, fc)
        if any(z is None for z in sols):
            raise ValueError("not a complex: image of f is not in ker g")
        rels.extend(sols)
    if B.nrel:
        sols = solver.solve_columns(B.relations, B.nrel)
        if any(z is None for z in sols):
            raise ValueError("relations of B do not map into C's relations")
        rels.extend(sols)
    H = FgAbGroup(kdim, from_columns(rels, kdim) if rels else [[] for _ in range(kdim)])
    return Homology(H, basis, n, solver)


def complex_homology_at(f: AbHom, g: AbHom) -> Homology:
    """Homology at the middle of A --f--> B --g--> C."""
    if f.target.gens != g.source.gens:
        raise ValueError("maps are not composable")
    return homology(g.source, f.matrix, g.matrix, g.target)


@dataclass
class SubgroupData:
    """A subgroup of an FgAbGroup generated by given elements."""
    ambient: FgAbGroup
    elements: list
    group: FgAbGroup
    _solver: IntegerSolver = field(repr=False, default=None)

    def contains(self, x):
        self.ambient.check(x)
        return self._solver.solve(list(x)) is not None

    @property
    def invariants(self):
        return self.group.invariants

    def order(self):
        return self.group.order()


def subgroup_generated(elements, ambient: FgAbGroup) -> SubgroupData:
    """The subgroup of ``ambient`` spanned by ``elements``."""
    for e in elements:
        ambient.check(e)
    k = len(elements)
    n = ambient.gens
    big = hstack(from_columns(elements, n) if k else None,
                 ambient.relations if ambient.nrel else None, rows=n)
    total = k + ambient.nrel
    solver = IntegerSolver(big, cols=total)
    ker = solver.kernel()
    rel_cols = [v[:k] for v in ker]
    G = FgAbGroup(k, from_columns(rel_cols, k) if rel_cols else [[] for _ in range(k)])
    return SubgroupData(ambient, [list(e) for e in elements], G, solver)
