"""G-modules: finitely generated abelian groups with a validated G-action.

Module elements are integer column vectors in the module's generators.  The
action of every group element is stored as a matrix ``action[g]`` acting on
the left: g.x = action[g] @ x.  For modules with relations, matrices are only
meaningful modulo the relation lattice and all checks are done that way.
"""
from __future__ import annotations

from .fingroup import FinGroup, Subgroup
from .intlat import (FgAbGroup, IntegerSolver, columns, from_columns, hstack,
                     identity, kernel_basis, matmul, matvec, transpose)


def _mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _is_perm_or_signed(A):
    return all(sum(1 for x in row if x) <= 1 for row in A)


class GModule:
    """A G-module: ``underlying`` FgAbGroup plus one action matrix per element."""

    def __init__(self, group: FinGroup, underlying: FgAbGroup, action, validate=True, label=None):
        self.group = group
        self.underlying = underlying
        self.rank = underlying.gens
        self.action = [[list(r) for r in A] for A in action]
        self.label = label
        if len(self.action) != group.order:
            raise ValueError("need one action matrix per group element")
        if validate:
            self.validate()

    # construction from generators ---------------------------------------
    @classmethod
    def from_generators(cls, group: FinGroup, underlying, generator_actions, label=None):
        """Build the action of every element from matrices for the named generators."""
        if isinstance(underlying, int):
            underlying = FgAbGroup(underlying)
        k = underlying.gens
        mats = []
        for name in group.gen_names:
            if name not in generator_actions:
                raise ValueError("missing action for generator %r" % name)
            mats.append([list(r) for r in generator_actions[name]])
        action = []
        for x in range(group.order):
            A = identity(k)
            for s in group.words[x]:
                A = matmul(A, mats[s], cols=k)
            action.append(A)
        return cls(group, underlying, action, label=label)

    # validation -----------------------------------------------------------
    def _same(self, A, B):
        """A == B as endomorphisms of the underlying group."""
        U = self.underlying
        if not U.nrel:
            return A == B
        D = _mat_sub(A, B)
        return all(U.is_zero(c) for c in columns(D)) if self.rank else True

    def validate(self):
        G, k, U = self.group, self.rank, self.underlying
        if not self._same(self.action[G.identity], identity(k)):
            raise ValueError("identity does not act trivially")
        if U.nrel:
            rel_cols = columns(U.relations)
            for g in range(G.order):
                for c in rel_cols:
                    if not U.is_zero(matvec(self.action[g], c)):
                        raise ValueError("relations not preserved by element %s" % G.name(g))
        for a in range(G.order):
            Aa = self.action[a]
            for b in range(G.order):
                if not self._same(matmul(Aa, self.action[b], cols=k), self.action[G.table[a][b]]):
                    raise ValueError("relator violated: action(%s)action(%s) != action(%s)"
                                     % (G.name(a), G.name(b), G.name(G.table[a][b])))

    # element-level --------------------------------------------------------
    def act(self, g, x):
        return matvec(self.action[g], x)

    def ring_matrix(self, elt):
        """Matrix of a group ring element {g: c} acting on the module."""
        k = self.rank
        out = [[0] * k for _ in range(k)]
        for g, c in elt.items():
            if c:
                A = self.action[g]
                for i in range(k):
                    Ai, Oi = A[i], out[i]
                    for j in range(k):
                        if Ai[j]:
                            Oi[j] += c * Ai[j]
        return out

    def is_lattice(self):
        return self.underlying.torsion_invariants == [] and self.underlying.nrel == 0

    def is_trivial_action(self):
        return all(self._same(A, identity(self.rank)) for A in self.action)

    def invariants_basis(self):
        """A Z-basis of the fixed sublattice (lattices only)."""
        if self.underlying.nrel:
            raise ValueError("fixed points implemented for lattices")
        k = self.rank
        rows = []
        for g in self.group.generators:
            D = _mat_sub(self.action[g], identity(k))
            rows.extend(D)
        return kernel_basis(rows, cols=k) if rows else [list(r) for r in identity(k)]

    def is_faithful(self):
        ident = identity(self.rank)
        return all(not self._same(self.action[g], ident) for g in range(self.group.order) if g != self.group.identity)

    def __repr__(self):
        return "GModule(%s, %s)" % (self.group.label, self.label or repr(self.underlying))


# ----------------------------------------------------------------------
# constructions

def trivial(G: FinGroup, A=1, label=None) -> GModule:
    """Trivial action on A (an FgAbGroup or a free rank)."""
    if isinstance(A, int):
        A = FgAbGroup(A)
    I = identity(A.gens)
    return GModule(G, A, [I] * G.order, validate=False, label=label or "trivial")


def trivial_cyclic(G: FinGroup, n: int) -> GModule:
    """Z/n with trivial action (n = 0 gives Z)."""
    A = FgAbGroup(1, [[n]]) if n else FgAbGroup(1)
    return trivial(G, A, label="Z/%d" % n if n else "Z")


def permutation(G: FinGroup, perms) -> GModule:
    """Z[Sigma] for a G-set given either as a full per-element list of
    permutations (perm[g][x] = g.x) or a dict {generator name: permutation}."""
    if isinstance(perms, dict):
        size = len(next(iter(perms.values())))
        mats = {nm: _perm_matrix(p) for nm, p in perms.items()}
        return GModule.from_generators(G, FgAbGroup(size), mats, label="Z[Sigma]")
    size = len(perms[0])
    return GModule(G, FgAbGroup(size), [_perm_matrix(p) for p in perms], label="Z[Sigma]")


def _perm_matrix(p):
    n = len(p)
    M = [[0] * n for _ in range(n)]
    for x, y in enumerate(p):
        M[y][x] = 1
    return M


def regular(G: FinGroup) -> GModule:
    """Z[G] with basis the group elements and left multiplication."""
    perms = [[G.table[g][x] for x in range(G.order)] for g in range(G.order)]
    M = GModule(G, FgAbGroup(G.order), [_perm_matrix(p) for p in perms], validate=False, label="Z[G]")
    return M


def direct_sum(*mods: GModule) -> GModule:
    G = mods[0].group
    k = sum(M.rank for M in mods)
    rels = []
    off = 0
    for M in mods:
        for c in (columns(M.underlying.relations) if M.underlying.nrel else []):
            v = [0] * k
            v[off:off + M.rank] = c
            rels.append(v)
        off += M.rank
    action = []
    for g in range(G.order):
        A = [[0] * k for _ in range(k)]
        off = 0
        for M in mods:
            for i in range(M.rank):
                A[off + i][off:off + M.rank] = M.action[g][i]
            off += M.rank
        action.append(A)
    U = FgAbGroup(k, from_columns(rels, k) if rels else None)
    return GModule(G, U, action, validate=False, label="+".join(M.label or "M" for M in mods))


def _kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def tensor(M: GModule, N: GModule) -> GModule:
    """M (x) N with diagonal action; basis e_i (x) f_j at index i*rank(N) + j."""
    if M.group is not N.group:
        raise ValueError("tensor requires modules over the same group")
    m, n = M.rank, N.rank
    rels = []
    for c in (columns(M.underlying.relations) if M.underlying.nrel else []):
        for j in range(n):
            v = [0] * (m * n)
            for i in range(m):
                v[i * n + j] = c[i]
            rels.append(v)
    for c in (columns(N.underlying.relations) if N.underlying.nrel else []):
        for i in range(m):
            v = [0] * (m * n)
            for j in range(n):
                v[i * n + j] = c[j]
            rels.append(v)
    U = FgAbGroup(m * n, from_columns(rels, m * n) if rels else None)
    action = [_kron(M.action[g], N.action[g]) for g in range(M.group.order)]
    return GModule(M.group, U, action, validate=False,
                   label="(%s)x(%s)" % (M.label or "M", N.label or "N"))


def dual(M: GModule) -> GModule:
    """Hom(M, Z) with the contragredient action g -> action(g^-1)^T."""
    if not M.is_lattice():
        raise ValueError("dual is only defined here for lattices (module has relations)")
    G = M.group
    action = [transpose(M.action[G.inverse[g]], cols=M.rank) for g in range(G.order)]
    return GModule(G, FgAbGroup(M.rank), action, validate=False, label="dual(%s)" % (M.label or "M"))


def restrict(M: GModule, H: Subgroup) -> GModule:
    if H.parent is not M.group:
        raise ValueError("subgroup of a different group")
    action = [M.action[g] for g in H.elements]
    return GModule(H.group, M.underlying, action, validate=False, label=M.label)


def coefficient_change(M: GModule, A: FgAbGroup) -> GModule:
    """M (x) A for a trivial-action coefficient group A."""
    return tensor(M, trivial(M.group, A))


# ----------------------------------------------------------------------
# maps

class GMap:
    """Equivariant map given by a (target.rank x source.rank) integer matrix."""

    def __init__(self, source: GModule, target: GModule, matrix, validate=True):
        self.source = source
        self.target = target
        self.matrix = [list(r) for r in matrix] if target.rank else []
        if validate:
            self.validate()

    def __call__(self, x):
        return matvec(self.matrix, x) if self.target.rank else []

    def validate(self):
        S, T = self.source, self.target
        if len(self.matrix) != T.rank or any(len(r) != S.rank for r in self.matrix):
            raise ValueError("matrix has wrong shape")
        for c in (columns(S.underlying.relations) if S.underlying.nrel else []):
            if not T.underlying.is_zero(self(c)):
                raise ValueError("map does not respect relations")
        for g in range(S.group.order):
            lhs = matmul(T.action[g], self.matrix, cols=S.rank)
            rhs = matmul(self.matrix, S.action[g], cols=S.rank)
            if not T._same(lhs, rhs):
                raise ValueError("non-equivariant matrix (fails at %s)" % S.group.name(g))

    def compose(self, other: "GMap") -> "GMap":
        """self o other."""
        return GMap(other.source, self.target, matmul(self.matrix, other.matrix, cols=other.source.rank), validate=False)

    def is_zero(self):
        T = self.target.underlying
        return all(T.is_zero(c) for c in columns(self.matrix)) if self.matrix and self.source.rank else True


def _preimage_lattice(F, T: FgAbGroup, n):
    """Columns spanning {x in Z^n : F x in relation lattice of T}."""
    if T.gens == 0:
        return [list(r) for r in identity(n)]
    big = hstack(F, T.relations, rows=T.gens) if T.nrel else [list(r) for r in F]
    return [v[:n] for v in kernel_basis(big, cols=n + T.nrel)]


def _lattice_basis(vectors, n):
    """A basis (list of columns) of the lattice spanned by ``vectors`` in Z^n."""
    if not vectors:
        return []
    from .intlat import _smith_raw
    M = [list(v) for v in vectors]  # rows
    diag, U, _ = _smith_raw(M, len(M), n, True, False)
    rows = matmul(U, M, cols=n)
    return [r for r in rows if any(r)]


def submodule(M: GModule, vectors, label=None):
    """The G-submodule spanned (as a group) by ``vectors``, which must be G-stable.

    Returns (module, inclusion GMap).  The generators of the new module are a
    lattice basis of span(vectors) + relations of M.
    """
    n = M.rank
    rel = columns(M.underlying.relations) if M.underlying.nrel else []
    basis = _lattice_basis(list(vectors) + rel, n)
    r = len(basis)
    Kb = from_columns(basis, n)
    solver = IntegerSolver(Kb, cols=r)
    rels = []
    for c in rel:
        z = solver.solve(c)
        rels.append(z)
    action = []
    for g in range(M.group.order):
        B = []
        for b in basis:
            z = solver.solve(matvec(M.action[g], b))
            if z is None:
                raise ValueError("span is not G-stable")
            B.append(z)
        action.append(from_columns(B, r))
    U = FgAbGroup(r, from_columns(rels, r) if rels else None)
    S = GModule(M.group, U, action, validate=False, label=label)
    return S, GMap(S, M, Kb, validate=False)


def kernel(f: GMap, label=None):
    """ker f as a G-module with its inclusion into the source."""
    K = _preimage_lattice(f.matrix, f.target.underlying, f.source.rank)
    return submodule(f.source, K, label=label or "ker")


def image(f: GMap, label=None):
    """im f presented on the images of the source generators, with inclusion."""
    S = f.source
    K = _preimage_lattice(f.matrix, f.target.underlying, S.rank)
    U = FgAbGroup(S.rank, from_columns(K, S.rank) if K else None)
    I = GModule(S.group, U, S.action, validate=False, label=label or "im")
    return I, GMap(I, f.target, f.matrix, validate=False)


def cokernel(f: GMap, label=None):
    """coker f with the projection from the target."""
    T = f.target
    rels = (columns(T.underlying.relations) if T.underlying.nrel else []) + \
        (columns(f.matrix) if f.matrix and f.source.rank else [])
    U = FgAbGroup(T.rank, from_columns(rels, T.rank) if rels else None)
    C = GModule(T.group, U, T.action, validate=False, label=label or "coker")
    return C, GMap(T, C, identity(T.rank), validate=False)


def is_injective(f: GMap):
    K = _preimage_lattice(f.matrix, f.target.underlying, f.source.rank)
    S = f.source.underlying
    return all(S.is_zero(v) for v in K)


def is_surjective(f: GMap):
    _, p = cokernel(f)
    return p.target.underlying.is_trivial()


def is_exact_at(f: GMap, g: GMap):
    """im f == ker g in the middle module."""
    if not g.compose(f).is_zero():
        return False
    K = _preimage_lattice(g.matrix, g.target.underlying, g.source.rank)
    B = g.source.underlying
    cols = (columns(f.matrix) if f.matrix and f.source.rank else []) + \
        (columns(B.relations) if B.nrel else [])
    if not cols:
        return all(B.is_zero(v) for v in K)
    solver = IntegerSolver(from_columns(cols, B.gens), cols=len(cols))
    return all(solver.solve(v) is not None for v in K)


class GTorus:
    """A torus, recorded by its cocharacter G-lattice."""

    def __init__(self, cochar: GModule, label=None):
        if not cochar.is_lattice():
            raise ValueError("cocharacter module must be a lattice")
        self.cochar = cochar
        self.label = label

    @classmethod
    def gm(cls, G: FinGroup):
        return cls(trivial(G, 1, label="Z"), label="Gm")

    @classmethod
    def neron_severi(cls, pic: GModule):
        return cls(dual(pic), label="T_NS")
