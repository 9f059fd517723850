"""Free Z[G]-resolutions and the chain-level machinery built on them.

Conventions.  P_n is free on e_1..e_{r_n}.  A differential is a group ring
matrix D_n with r_n rows and r_{n-1} columns: d(e_j) = sum_i D_n[j][i] e_i,
coefficients multiplying from the left.  Group ring elements are dicts
{element index: integer coefficient}.  The expanded Z-basis of P_n is
g e_i at position i*|G| + g.  Tensor products use the Koszul sign
d(x (x) y) = dx (x) y + (-1)^deg(x) x (x) dy.
"""
from __future__ import annotations

import itertools
import os

from .fingroup import FinGroup, Subgroup, cyclic, direct_product, klein
from .intlat import (FgAbGroup, IntegerSolver, from_columns, homology,
                     kernel_basis, matvec)

MAX_EXPANDED_RANK = int(os.environ.get("AMITSUR_MAX_RANK", "4000"))


class SizeGuardError(ValueError):
    pass


def _guard(n, what):
    if n > MAX_EXPANDED_RANK:
        raise SizeGuardError("%s: expanded rank %d exceeds guard %d (set AMITSUR_MAX_RANK)"
                             % (what, n, MAX_EXPANDED_RANK))


# ----------------------------------------------------------------------
# group ring arithmetic

def gr_clean(x):
    return {g: c for g, c in x.items() if c}


def gr_add(x, y, scale=1):
    out = dict(x)
    for g, c in y.items():
        out[g] = out.get(g, 0) + scale * c
    return gr_clean(out)


def gr_mul(G: FinGroup, x, y):
    out = {}
    for g, a in x.items():
        Tg = G.table[g]
        for h, b in y.items():
            k = Tg[h]
            out[k] = out.get(k, 0) + a * b
    return gr_clean(out)


def gr_star(G: FinGroup, x):
    """The anti-involution g -> g^-1."""
    return {G.inverse[g]: c for g, c in x.items()}


def gr_parse(G: FinGroup, terms):
    """[[coeff, word], ...] -> group ring element."""
    out = {}
    for c, w in terms:
        g = G.parse(w) if isinstance(w, str) else G.eval_word(w)
        out[g] = out.get(g, 0) + int(c)
    return gr_clean(out)


def gr_format(G: FinGroup, x):
    return [[c, G.name(g)] for g, c in sorted(x.items())]


def gr_matmul(G, A, B, inner):
    """Product of group ring matrices (lists of rows of dicts)."""
    out = []
    for row in A:
        new = []
        for k in range(len(B[0]) if B else 0):
            acc = {}
            for i in range(inner):
                if row[i] and B[i][k]:
                    acc = gr_add(acc, gr_mul(G, row[i], B[i][k]))
            new.append(acc)
        out.append(new)
    return out


# ----------------------------------------------------------------------
# resolutions

class FreeResolution:
    """A free resolution P_* -> D over Z[G].

    ``diffs[n]`` (n >= 1) is the group ring matrix of d: P_n -> P_{n-1};
    ``augmentation`` gives, for each basis vector of P_0, its image in the
    target module as a coordinate vector (default: the trivial module Z with
    every e_i -> 1).
    """

    def __init__(self, group: FinGroup, ranks, diffs, augmentation=None, target=None, label=None):
        self.group = group
        self.ranks = list(ranks)
        diffs = list(diffs)
        if diffs and diffs[0] is None:
            diffs = diffs[1:]
        self.diffs = [None] + [[[gr_clean(dict(e)) for e in row] for row in D] for D in diffs]
        if len(self.diffs) != len(self.ranks):
            raise ValueError("need one differential per degree >= 1")
        self.target = target  # GModule or None for trivial Z
        if augmentation is None:
            augmentation = [[1] * self.ranks[0]]
        self.augmentation = [list(r) for r in augmentation]
        self.label = label or "P"
        self._expanded = {}
        for n in range(1, len(self.ranks)):
            D = self.diffs[n]
            if len(D) != self.ranks[n] or any(len(r) != self.ranks[n - 1] for r in D):
                raise ValueError("differential %d has the wrong shape" % n)

    @property
    def top(self):
        return len(self.ranks) - 1

    def rank(self, n):
        return self.ranks[n]

    def zdim(self, n):
        return self.ranks[n] * self.group.order

    # expanded integer matrices -------------------------------------------
    def expanded(self, n):
        """Integer matrix of d_n on the Z-bases (rows P_{n-1}, columns P_n)."""
        if n in self._expanded:
            return self._expanded[n]
        G = self.group
        N = G.order
        rows, cols = self.zdim(n - 1), self.zdim(n)
        _guard(max(rows, cols), "expanded differential")
        E = [[0] * cols for _ in range(rows)]
        D = self.diffs[n]
        for j in range(self.ranks[n]):
            for g in range(N):
                col = j * N + g
                Tg = G.table[g]
                for i, entry in enumerate(D[j]):
                    for h, c in entry.items():
                        E[i * N + Tg[h]][col] += c
        self._expanded[n] = E
        return E

    def expanded_augmentation(self):
        """Matrix of P_0 -> D on Z-bases."""
        G = self.group
        N = G.order
        if self.target is None:
            return [[1] * self.zdim(0)]
        T = self.target
        cols = []
        for i in range(self.ranks[0]):
            for g in range(N):
                cols.append(T.act(g, [r[i] for r in self.augmentation]))
        return from_columns(cols, T.rank)

    def act(self, n, g, vec):
        """g . v for a Z-vector v of P_n."""
        G = self.group
        N = G.order
        out = [0] * len(vec)
        Tg = G.table[g]
        for idx, c in enumerate(vec):
            if c:
                i, h = divmod(idx, N)
                out[i * N + Tg[h]] += c
        return out

    def apply_d(self, n, vec):
        """d_n applied to a Z-vector of P_n."""
        E = self.expanded(n)
        return matvec(E, vec)

    def basis_boundary(self, n, j):
        """d(e_j) in P_{n-1} as a Z-vector."""
        N = self.group.order
        out = [0] * self.zdim(n - 1)
        for i, entry in enumerate(self.diffs[n][j]):
            for h, c in entry.items():
                out[i * N + h] += c
        return out

    # validation -----------------------------------------------------------
    def validate(self, through=None, raise_on_error=True):
        """Check d o d = 0 and exactness; returns a report dict."""
        top = self.top if through is None else min(through, self.top)
        report = {"d_squared_zero": True, "exact_degrees": [], "failures": [], "H0": None}
        G = self.group
        for n in range(2, top + 1):
            prod = gr_matmul(G, self.diffs[n], self.diffs[n - 1], self.ranks[n - 1])
            if any(e for row in prod for e in row):
                report["d_squared_zero"] = False
                report["failures"].append("d%d o d%d != 0" % (n - 1, n))
        aug = self.expanded_augmentation()
        tgt = self.target.underlying if self.target is not None else FgAbGroup(1)
        if top >= 1:
            E1 = self.expanded(1)
            bad = [c for c in _cols(E1) if not tgt.is_zero(matvec(aug, c))]
            if bad:
                report["d_squared_zero"] = False
                report["failures"].append("augmentation o d1 != 0")
        # H_0: coker d_1 (and surjectivity/exactness at P_0 onto the target)
        if top >= 1:
            H0 = homology(FgAbGroup(self.zdim(0)), self.expanded(1), [[0] * self.zdim(0)], FgAbGroup(1), check=False)
            report["H0"] = H0.invariants
            h = homology(FgAbGroup(self.zdim(0)), self.expanded(1), aug, tgt, check=False)
            if h.invariants:
                report["failures"].append("not exact at degree 0")
            if not _surjective(aug, tgt):
                report["failures"].append("augmentation not surjective")
        for n in range(1, top):
            if not report["d_squared_zero"]:
                break
            h = homology(FgAbGroup(self.zdim(n)), self.expanded(n + 1), self.expanded(n),
                         FgAbGroup(self.zdim(n - 1)), check=False)
            if h.invariants:
                w = h.generators()[0] if h.generators() else None
                report["failures"].append("not exact at degree %d (witness %s)" % (n, _short(w)))
            else:
                report["exact_degrees"].append(n)
        report["valid"] = not report["failures"]
        if raise_on_error and report["failures"]:
            raise ValueError("; ".join(report["failures"]))
        return report

    def to_data(self):
        G = self.group
        return {
            "schema": "amitsur/resolution-v1",
            "ranks": list(self.ranks),
            "differentials": [[[gr_format(G, e) for e in row] for row in self.diffs[n]]
                              for n in range(1, len(self.ranks))],
        }

    def truncate(self, top):
        return FreeResolution(self.group, self.ranks[:top + 1], [None] + self.diffs[1:top + 1],
                              self.augmentation, self.target, self.label)

    def __repr__(self):
        return "FreeResolution(%s, ranks=%s)" % (self.group.label, self.ranks)


def _cols(A):
    if not A:
        return []
    return [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]


def _short(v):
    if v is None:
        return "-"
    nz = [(i, c) for i, c in enumerate(v) if c]
    return "{%s}" % ", ".join("%d:%d" % t for t in nz[:8])


def _surjective(aug, tgt: FgAbGroup):
    k = len(aug[0]) if aug else 0
    rels = tgt.relations if tgt.nrel else [[] for _ in range(tgt.gens)]
    M = [list(aug[i]) + list(rels[i]) for i in range(tgt.gens)]
    s = IntegerSolver(M, cols=k + tgt.nrel)
    return all(s.solve([1 if i == j else 0 for i in range(tgt.gens)]) is not None for j in range(tgt.gens))


# ----------------------------------------------------------------------
# standard resolutions

def bar_resolution(G: FinGroup, n_max: int) -> FreeResolution:
    """Normalized bar resolution; basis of P_n is tuples of non-identity elements."""
    nonid = [g for g in range(G.order) if g != G.identity]
    _guard(len(nonid) ** n_max * G.order, "bar resolution")
    bases = [list(itertools.product(nonid, repeat=n)) for n in range(n_max + 1)]
    index = [{b: i for i, b in enumerate(B)} for B in bases]
    diffs = [None]
    for n in range(1, n_max + 1):
        D = []
        for cell in bases[n]:
            row = [dict() for _ in bases[n - 1]]
            # g1 [g2|...|gn]
            row[index[n - 1][cell[1:]]][cell[0]] = row[index[n - 1][cell[1:]]].get(cell[0], 0) + 1
            for i in range(n - 1):
                prod = G.table[cell[i]][cell[i + 1]]
                if prod == G.identity:
                    continue
                face = cell[:i] + (prod,) + cell[i + 2:]
                e = row[index[n - 1][face]]
                e[G.identity] = e.get(G.identity, 0) + (-1) ** (i + 1)
            face = cell[:-1]
            e = row[index[n - 1][face]]
            e[G.identity] = e.get(G.identity, 0) + (-1) ** n
            D.append([gr_clean(x) for x in row])
        diffs.append(D)
    return FreeResolution(G, [len(b) for b in bases], diffs, label="bar")


def periodic_resolution(G: FinGroup, n_max: int, generator=None) -> FreeResolution:
    """Rank one in every degree; d alternates (g - 1) and the norm element."""
    g = G.generators[0] if generator is None else generator
    m = G.order
    if G.element_order(g) != m:
        raise ValueError("periodic resolution needs a cyclic group and a generator")
    diffs = [None]
    norm = {G.power(g, i): 1 for i in range(m)}
    minus = gr_clean({g: 1, G.identity: -1}) if m > 1 else {}
    for n in range(1, n_max + 1):
        diffs.append([[dict(minus if n % 2 else norm)]])
    return FreeResolution(G, [1] * (n_max + 1), diffs, label="periodic")


def tensor_resolution(P: FreeResolution, Q: FreeResolution, n_max: int, G: FinGroup = None,
                      embed_p=None, embed_q=None) -> FreeResolution:
    """P (x) Q over the product group.

    By default G = direct_product(P.group, Q.group) with (a, b) at a + |A| b.
    Basis of degree n: pairs (i, j) with i + j = n, i ascending, then
    (row of P_i) major, (row of Q_j) minor.
    """
    A, B = P.group, Q.group
    if G is None:
        G = direct_product(A, B)
    if embed_p is None:
        embed_p = [a + A.order * B.identity for a in range(A.order)]
    if embed_q is None:
        embed_q = [A.identity + A.order * b for b in range(B.order)]
    if n_max > P.top or n_max > Q.top:
        raise ValueError("factors are too short")
    bases = []
    for n in range(n_max + 1):
        cells = []
        for i in range(n + 1):
            j = n - i
            for a in range(P.ranks[i]):
                for b in range(Q.ranks[j]):
                    cells.append((i, a, j, b))
        bases.append(cells)
    index = [{c: k for k, c in enumerate(B_)} for B_ in bases]
    diffs = [None]
    for n in range(1, n_max + 1):
        D = []
        for (i, a, j, b) in bases[n]:
            row = [dict() for _ in bases[n - 1]]
            if i > 0:
                for a2, entry in enumerate(P.diffs[i][a]):
                    if entry:
                        k = index[n - 1][(i - 1, a2, j, b)]
                        row[k] = gr_add(row[k], {embed_p[x]: c for x, c in entry.items()})
            if j > 0:
                sign = -1 if i % 2 else 1
                for b2, entry in enumerate(Q.diffs[j][b]):
                    if entry:
                        k = index[n - 1][(i, a, j - 1, b2)]
                        row[k] = gr_add(row[k], {embed_q[x]: c for x, c in entry.items()}, sign)
            D.append(row)
        diffs.append(D)
    R = FreeResolution(G, [len(b) for b in bases], diffs, label="tensor")
    R.cells = bases
    return R


def klein_resolution(n_max: int, G: FinGroup = None) -> FreeResolution:
    """Tensor square of the periodic C2 resolution over the Klein group."""
    C = cyclic(2)
    P = periodic_resolution(C, n_max)
    K = G if G is not None else klein()
    # klein(): index a + 2b matches direct_product(C2, C2)
    return tensor_resolution(P, P, n_max, G=K, embed_p=[0, K.gen("sigma")], embed_q=[0, K.gen("tau")])


def custom_resolution(G: FinGroup, data) -> FreeResolution:
    """Resolution from file data.

    ``data["differentials"][n-1]`` is the matrix of d_n; with
    ``"convention": "right-cochain"`` it is instead the matrix d^{n-1} of
    the cochain complex M -> M^{r_1} -> ... acting on row vectors from the
    right, and is converted with the anti-involution g -> g^-1 and a
    transpose.
    """
    ranks = list(data["ranks"])
    conv = data.get("convention", "left-chain")
    diffs = [None]
    for n, mat in enumerate(data["differentials"], start=1):
        parsed = [[gr_parse(G, e) for e in row] for row in mat]
        if conv == "right-cochain":
            # parsed is r_{n-1} x r_n; D_n[j][i] = parsed[i][j]^*
            D = [[gr_star(G, parsed[i][j]) for i in range(len(parsed))] for j in range(len(parsed[0]))]
        elif conv == "left-chain":
            D = parsed
        else:
            raise ValueError("unknown convention %r" % conv)
        diffs.append(D)
    return FreeResolution(G, ranks, diffs, label=data.get("label", "custom"))


# ----------------------------------------------------------------------
# extension by kernels

def _hnf_rows(vectors, n):
    """Row-style Hermite basis of the lattice spanned by the given vectors."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        piv = [r for r in rows if r[col]]
        if not piv:
            col += 1
            continue
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            new = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                rr = [a - q * b for a, b in zip(r, p)]
                if rr[col]:
                    new.append(rr)
                elif any(rr):
                    rows.append(rr)
            rows = [r for r in rows if not r[col]]
            piv = new
        p = piv[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        rows = [r for r in rows if not r[col] and any(r)]
        col += 1
    return basis


def _augmentation_kernel(R: FreeResolution):
    """Z-basis of ker(P_0 -> target), modulo the target's relations."""
    aug = R.expanded_augmentation()
    T = R.target.underlying if R.target is not None else FgAbGroup(1)
    n = R.zdim(0)
    big = [list(aug[i]) + (list(T.relations[i]) if T.nrel else []) for i in range(T.gens)]
    return [v[:n] for v in kernel_basis(big, cols=n + T.nrel)]


def extend_resolution(P: FreeResolution, to_degree: int) -> FreeResolution:
    """Append free covers of kernels until P reaches ``to_degree``."""
    if to_degree <= P.top:
        return P
    G = P.group
    N = G.order
    ranks = list(P.ranks)
    diffs = list(P.diffs)
    R = P
    while R.top < to_degree:
        n = R.top
        if n >= 1:
            ker = kernel_basis(R.expanded(n), cols=R.zdim(n))
        else:
            ker = _augmentation_kernel(R)
        zd = R.zdim(n)
        cand = _hnf_rows(ker, zd)
        cand.sort(key=lambda v: (sum(1 for x in v if x), sum(abs(x) for x in v)))
        target = ker
        chosen = []
        span_vecs = []
        solver = None
        for v in cand:
            if solver is not None and solver.solve(v) is not None:
                continue
            chosen.append(v)
            for g in range(N):
                span_vecs.append(R.act(n, g, v))
            solver = IntegerSolver(from_columns(span_vecs, zd), cols=len(span_vecs))
            if all(solver.solve(t) is not None for t in target):
                break
        _guard(len(chosen) * N, "extend_resolution")
        D = []
        for v in chosen:
            row = []
            for i in range(R.ranks[n]):
                row.append(gr_clean({h: v[i * N + h] for h in range(N)}))
            D.append(row)
        ranks.append(len(chosen))
        diffs.append(D)
        R = FreeResolution(G, ranks, diffs, P.augmentation, P.target, P.label)
        R._expanded.update(P._expanded)
    return R


# ----------------------------------------------------------------------
# restriction to a subgroup

def right_coset_representatives(H: Subgroup):
    """Representatives t with G = disjoint union of H t (first element of each coset)."""
    G = H.parent
    seen = set()
    reps = []
    for g in range(G.order):
        if g in seen:
            continue
        reps.append(g)
        for h in H.elements:
            seen.add(G.table[h][g])
    return reps


def restrict_resolution(P: FreeResolution, H: Subgroup) -> FreeResolution:
    """P viewed as a free H-resolution: basis t e_i for right coset reps t.

    Basis index of t e_i is i * [G:H] + (position of t).  The object records
    ``coset_reps`` for restriction and transfer of cochains.
    """
    G = P.group
    reps = right_coset_representatives(H)
    rpos = {t: k for k, t in enumerate(reps)}
    # coset decomposition of every element: g = h t
    decomp = {}
    for t in reps:
        for h in H.elements:
            decomp[G.table[h][t]] = (H.index_of[h], rpos[t])
    m = len(reps)
    ranks = [r * m for r in P.ranks]
    diffs = [None]
    for n in range(1, P.top + 1):
        D = []
        for j in range(P.ranks[n]):
            for t in reps:
                row = [dict() for _ in range(ranks[n - 1])]
                for i, entry in enumerate(P.diffs[n][j]):
                    for g, c in entry.items():
                        hh, tp = decomp[G.table[t][g]]
                        e = row[i * m + tp]
                        e[hh] = e.get(hh, 0) + c
                D.append([gr_clean(x) for x in row])
        diffs.append(D)
    aug = [[a for a in row for _ in range(m)] for row in P.augmentation]
    R = FreeResolution(H.group, ranks, diffs, aug, None, label="%s|%s" % (P.label, H.group.label))
    R.coset_reps = reps
    R.parent_resolution = P
    R.subgroup = H
    return R


# ----------------------------------------------------------------------
# chain maps

class ChainMap:
    """A chain map between resolutions over the same group.

    ``images[n][j]`` is the Z-vector of phi(e_j) in the target's P_n.
    """

    def __init__(self, source: FreeResolution, target: FreeResolution, images):
        self.source = source
        self.target = target
        self.images = images

    @property
    def top(self):
        return len(self.images) - 1

    def apply(self, n, vec):
        """phi_n on a Z-vector of source P_n."""
        S, T = self.source, self.target
        N = S.group.order
        out = [0] * T.zdim(n)
        for idx, c in enumerate(vec):
            if c:
                j, g = divmod(idx, N)
                img = T.act(n, g, self.images[n][j])
                for k, x in enumerate(img):
                    if x:
                        out[k] += c * x
        return out

    def check(self):
        S, T = self.source, self.target
        for n in range(1, self.top + 1):
            for j in range(S.ranks[n]):
                lhs = T.apply_d(n, self.images[n][j])
                rhs = self.apply(n - 1, S.basis_boundary(n, j))
                if lhs != rhs:
                    return False
        return True


def chain_map_lift(source: FreeResolution, target: FreeResolution, degree_max: int,
                   degree0=None) -> ChainMap:
    """Lift the identity of Z (or the given degree-0 images) to a chain map."""
    if source.group.order != target.group.order or source.group.table != target.group.table:
        raise ValueError("resolutions over different groups; restrict the target first")
    if target.top < degree_max:
        raise ValueError("target resolution too short")
    images = []
    if degree0 is None:
        aug_t = target.expanded_augmentation()
        aug_s = source.expanded_augmentation()
        solver = IntegerSolver(aug_t, cols=target.zdim(0))
        deg0 = []
        N = source.group.order
        for j in range(source.ranks[0]):
            y = solver.solve([row[j * N] for row in aug_s])
            if y is None:
                raise ValueError("no lift in degree 0")
            deg0.append(y)
        degree0 = deg0
    phi = ChainMap(source, target, [degree0])
    for n in range(1, degree_max + 1):
        solver = IntegerSolver(target.expanded(n), cols=target.zdim(n))
        imgs = []
        for j in range(source.ranks[n]):
            rhs = phi.apply(n - 1, source.basis_boundary(n, j))
            y = solver.solve(rhs)
            if y is None:
                raise ValueError("no lift in degree %d: input resolution is not valid" % n)
            imgs.append(y)
        phi.images.append(imgs)
    return phi


# ----------------------------------------------------------------------
# diagonal approximation

class TensorSquare:
    """(P (x) P)_n with diagonal G-action, on the Z-basis g e_a (x) h e_b."""

    def __init__(self, P: FreeResolution):
        self.P = P
        self.N = P.group.order
        self._layout = {}
        self._expanded = {}

    def layout(self, n):
        if n not in self._layout:
            P, N = self.P, self.N
            blocks = []
            off = 0
            for p in range(n + 1):
                q = n - p
                size = P.ranks[p] * P.ranks[q] * N * N
                blocks.append((p, q, off))
                off += size
            self._layout[n] = (blocks, off)
        return self._layout[n]

    def index(self, n, p, a, b, g, h):
        blocks, _ = self.layout(n)
        q = n - p
        off = blocks[p][2]
        return off + ((a * self.P.ranks[q] + b) * self.N + g) * self.N + h

    def dim(self, n):
        return self.layout(n)[1]

    def decode(self, n, idx):
        blocks, _ = self.layout(n)
        for p, q, off in reversed(blocks):
            if idx >= off:
                r = idx - off
                r, h = divmod(r, self.N)
                r, g = divmod(r, self.N)
                a, b = divmod(r, self.P.ranks[q])
                return p, q, a, b, g, h
        raise IndexError(idx)

    def expanded(self, n):
        """d on (P (x) P)_n -> (P (x) P)_{n-1} as an integer matrix."""
        if n in self._expanded:
            return self._expanded[n]
        P, N = self.P, self.N
        G = P.group
        rows, cols = self.dim(n - 1), self.dim(n)
        _guard(max(rows, cols), "tensor square")
        E = [[0] * cols for _ in range(rows)]
        blocks, _ = self.layout(n)
        for p, q, off in blocks:
            for a in range(P.ranks[p]):
                for b in range(P.ranks[q]):
                    for g in range(N):
                        for h in range(N):
                            col = self.index(n, p, a, b, g, h)
                            if p > 0:
                                for a2, entry in enumerate(P.diffs[p][a]):
                                    for x, c in entry.items():
                                        E[self.index(n - 1, p - 1, a2, b, G.table[g][x], h)][col] += c
                            if q > 0:
                                s = -1 if p % 2 else 1
                                for b2, entry in enumerate(P.diffs[q][b]):
                                    for y, c in entry.items():
                                        E[self.index(n - 1, p, a, b2, g, G.table[h][y])][col] += s * c
        self._expanded[n] = E
        return E

    def act(self, n, k, vec):
        """k . v on (P (x) P)_n (sparse dict vectors)."""
        G = self.P.group
        out = {}
        for idx, c in vec.items():
            p, q, a, b, g, h = self.decode(n, idx)
            j = self.index(n, p, a, b, G.table[k][g], G.table[k][h])
            out[j] = out.get(j, 0) + c
        return out


class DiagonalApproximation:
    """Equivariant chain map Delta: P -> P (x) P lifting Z -> Z (x) Z."""

    def __init__(self, P: FreeResolution, n_max: int):
        if any(a != 1 for a in P.augmentation[0]) or P.target is not None:
            raise ValueError("diagonal approximation needs a resolution of Z with augmentation 1")
        if P.top < n_max:
            raise ValueError("resolution too short for the requested degree")
        self.P = P
        self.T = TensorSquare(P)
        G = P.group
        N = G.order
        e = G.identity
        self.images = [[{self.T.index(0, 0, a, a, e, e): 1} for a in range(P.ranks[0])]]
        for n in range(1, n_max + 1):
            E = self.T.expanded(n)
            solver = IntegerSolver(E, cols=self.T.dim(n))
            imgs = []
            for j in range(P.ranks[n]):
                rhs = [0] * self.T.dim(n - 1)
                for i, entry in enumerate(P.diffs[n][j]):
                    for x, c in entry.items():
                        for idx, v in self.T.act(n - 1, x, self.images[n - 1][i]).items():
                            rhs[idx] += c * v
                y = solver.solve(rhs)
                if y is None:
                    raise ValueError("diagonal approximation lift failed in degree %d" % n)
                imgs.append({k: v for k, v in enumerate(y) if v})
            self.images.append(imgs)

    @property
    def top(self):
        return len(self.images) - 1

    def component(self, n, j, p):
        """Terms (coeff, a, g, b, h) of Delta(e_j) in the block P_p (x) P_{n-p}."""
        out = []
        for idx, c in sorted(self.images[n][j].items()):
            pp, q, a, b, g, h = self.T.decode(n, idx)
            if pp == p:
                out.append((c, a, g, b, h))
        return out


def diagonal_approximation(P: FreeResolution, n_max: int) -> DiagonalApproximation:
    return DiagonalApproximation(P, n_max)
