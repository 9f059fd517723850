"""Finite groups as validated multiplication tables."""
from __future__ import annotations

from collections import deque
from itertools import product

from .intlat import FgAbGroup, from_columns


class FinGroup:
    """A finite group given by its multiplication table.

    ``table[a][b]`` is the index of the product a*b.  Generators are named;
    every element carries a shortest word in the generators (breadth first,
    generators tried in the given order).
    """

    def __init__(self, table, generators, names=None, validate=True, label=None):
        self.order = len(table)
        self.table = [list(r) for r in table]
        self.label = label or "G%d" % self.order
        n = self.order
        ids = [e for e in range(n) if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise ValueError("table has no unique identity")
        self.identity = ids[0]
        if isinstance(generators, dict):
            self.gen_names = list(generators)
            self.generators = [generators[k] for k in self.gen_names]
        else:
            self.generators = list(generators)
            self.gen_names = ["g%d" % i for i in range(len(self.generators))]
        self.names = names
        if validate:
            self._validate()
        self.inverse = [next(y for y in range(n) if self.table[x][y] == self.identity) for x in range(n)]
        self.words = self._words()

    def _validate(self):
        n = self.order
        T = self.table
        for row in T:
            if sorted(row) != list(range(n)):
                raise ValueError("table row is not a permutation")
        if n <= 64:
            for a in range(n):
                Ta = T[a]
                for b in range(n):
                    ab = Ta[b]
                    Tb = T[b]
                    Tab = T[ab]
                    for c in range(n):
                        if Tab[c] != Ta[Tb[c]]:
                            raise ValueError("table is not associative")

    def _words(self):
        words = {self.identity: []}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for k, g in enumerate(self.generators):
                y = self.table[x][g]
                if y not in words:
                    words[y] = words[x] + [k]
                    queue.append(y)
        if len(words) != self.order:
            raise ValueError("generators do not generate the group")
        return [words[x] for x in range(self.order)]

    # basic operations --------------------------------------------------
    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def power(self, a, k):
        if k < 0:
            a, k = self.inverse[a], -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def exponent(self):
        from math import lcm
        out = 1
        for a in range(self.order):
            out = lcm(out, self.element_order(a))
        return out

    def gen(self, name):
        return self.generators[self.gen_names.index(name)]

    def eval_word(self, word):
        """Evaluate a list of generator indices, or a string like 'sigma^3*tau'."""
        if isinstance(word, str):
            return self.parse(word)
        x = self.identity
        for k in word:
            x = self.table[x][self.generators[k]]
        return x

    def parse(self, text):
        text = text.replace(" ", "")
        x = self.identity
        if text in ("", "e", "1"):
            return x
        for tok in text.split("*"):
            if "^" in tok:
                nm, e = tok.split("^")
                e = int(e.strip("()"))
            else:
                nm, e = tok, 1
            if nm in ("e", "1"):
                continue
            if nm not in self.gen_names:
                raise ValueError("unknown generator %r" % nm)
            x = self.table[x][self.power(self.gen(nm), e)]
        return x

    def name(self, a):
        if self.names is not None:
            return self.names[a]
        w = self.words[a]
        if not w:
            return "e"
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            nm = self.gen_names[w[i]]
            parts.append(nm if j - i == 1 else "%s^%d" % (nm, j - i))
            i = j
        return "*".join(parts)

    def is_abelian(self):
        T = self.table
        return all(T[a][b] == T[b][a] for a in range(self.order) for b in range(a))

    def closure(self, elements):
        """Index set of the subgroup generated by ``elements``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(elements)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def abelian_invariants(self):
        """Invariant factors of an abelian group."""
        if not self.is_abelian():
            raise ValueError("group is not abelian")
        return abelian_invariants(self, self.generators)

    def __repr__(self):
        return "FinGroup(%s, order=%d)" % (self.label, self.order)


def abelian_invariants(G, gens):
    """Invariant factors of the abelian subgroup generated by ``gens``."""
    k = len(gens)
    if k == 0:
        return []
    orders = [G.element_order(g) for g in gens]
    rels = []
    for i, o in enumerate(orders):
        v = [0] * k
        v[i] = o
        rels.append(v)
    first = {}
    for exps in product(*[range(o) for o in orders]):
        x = G.identity
        for g, e in zip(gens, exps):
            x = G.table[x][G.power(g, e)]
        if x in first:
            rels.append([a - b for a, b in zip(exps, first[x])])
        else:
            first[x] = exps
    return FgAbGroup(k, from_columns(rels, k)).invariants


# ----------------------------------------------------------------------
# built-in groups

def cyclic(m: int) -> FinGroup:
    if m < 1:
        raise ValueError("m must be positive")
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    return FinGroup(table, {"sigma": 1 % m}, label="C%d" % m)


def klein() -> FinGroup:
    """C2 x C2 with generators sigma = (1,0), tau = (0,1); index = a + 2b."""
    table = [[(a % 2 + b % 2) % 2 + 2 * ((a // 2 + b // 2) % 2) for b in range(4)] for a in range(4)]
    return FinGroup(table, {"sigma": 1, "tau": 2}, label="klein")


def modular16() -> FinGroup:
    """<sigma, tau | sigma^8 = tau^2 = tau sigma tau sigma^3 = e>.

    Element i + 8j is sigma^i tau^j; the relator gives tau sigma = sigma^5 tau.
    """
    def mul(a, b):
        i1, j1 = a % 8, a // 8
        i2, j2 = b % 8, b // 8
        i = (i1 + (5 ** j1) * i2) % 8
        return i + 8 * ((j1 + j2) % 2)
    table = [[mul(a, b) for b in range(16)] for a in range(16)]
    names = []
    for x in range(16):
        i, j = x % 8, x // 8
        parts = []
        if i:
            parts.append("sigma" if i == 1 else "sigma^%d" % i)
        if j:
            parts.append("tau")
        names.append("*".join(parts) or "e")
    return FinGroup(table, {"sigma": 1, "tau": 8}, names=names, label="M16")


def direct_product(A: FinGroup, B: FinGroup) -> FinGroup:
    """A x B with element (a, b) at index a + |A| b; generators of A then B."""
    na, nb = A.order, B.order
    table = [[A.table[x % na][y % na] + na * B.table[x // na][y // na]
              for y in range(na * nb)] for x in range(na * nb)]
    gens = {}
    for nm, g in zip(A.gen_names, A.generators):
        gens[nm] = g + na * B.identity
    for nm, g in zip(B.gen_names, B.generators):
        key = nm if nm not in gens else nm + "'"
        gens[key] = A.identity + na * g
    return FinGroup(table, gens, label="%sx%s" % (A.label, B.label))


BUILTINS = {
    "cyclic": cyclic,
    "klein": klein,
    "modular16": modular16,
    "m16": modular16,
}


def builtin(name: str, params=None) -> FinGroup:
    params = params or {}
    if name not in BUILTINS:
        raise ValueError("unknown group %r" % name)
    if name == "cyclic":
        return cyclic(int(params.get("m", params.get("order", 1))))
    return BUILTINS[name]()


# ----------------------------------------------------------------------
# subgroups

class Subgroup:
    """A subgroup H of G with its own table (elements ordered by parent index)."""

    def __init__(self, parent: FinGroup, elements):
        self.parent = parent
        els = sorted(set(elements))
        if parent.identity not in els:
            raise ValueError("subset does not contain the identity")
        pos = {x: i for i, x in enumerate(els)}
        for a in els:
            for b in els:
                if parent.table[a][b] not in pos:
                    raise ValueError("subset is not closed")
        self.elements = els
        self.index_of = pos
        gens = []
        span = frozenset([parent.identity])
        for x in els:
            if x not in span:
                gens.append(x)
                span = parent.closure(gens)
        table = [[pos[parent.table[a][b]] for b in els] for a in els]
        names = [parent.name(x) for x in els]
        gnames = {parent.name(g): pos[g] for g in gens}
        self.group = FinGroup(table, gnames, names=names, validate=False,
                              label="%s<%s>" % (parent.label, ",".join(gnames) or "e"))
        self.generators_in_parent = gens

    @property
    def order(self):
        return len(self.elements)

    @property
    def inclusion(self):
        return list(self.elements)

    def index(self):
        return self.parent.order // self.order

    def is_abelian(self):
        return self.group.is_abelian()

    def abelian_invariants(self):
        return self.group.abelian_invariants()

    def coset_representatives(self):
        """Left coset representatives g with G = union of g H (first element of each coset)."""
        G = self.parent
        seen = set()
        reps = []
        for g in range(G.order):
            if g in seen:
                continue
            reps.append(g)
            for h in self.elements:
                seen.add(G.table[g][h])
        return reps

    def contains(self, g):
        return g in self.index_of

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash(tuple(self.elements))

    def __repr__(self):
        return "Subgroup(%s, order=%d)" % (self.group.label, self.order)


def subgroup_from_generators(G: FinGroup, elements) -> Subgroup:
    els = [G.parse(e) if isinstance(e, str) else e for e in elements]
    return Subgroup(G, G.closure(els))


def whole(G: FinGroup) -> Subgroup:
    return Subgroup(G, range(G.order))


def all_subgroups(G: FinGroup):
    """Every subgroup, sorted by order then element list."""
    if G.order > 64:
        raise ValueError("all_subgroups is limited to groups of order <= 64")
    subs = {G.closure([g]) for g in range(G.order)}
    frontier = set(subs)
    cyclics = list(subs)
    while frontier:
        new = set()
        for S in frontier:
            for C in cyclics:
                if not C <= S:
                    J = G.closure(list(S | C))
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new
    return [Subgroup(G, s) for s in sorted(subs, key=lambda s: (len(s), sorted(s)))]


def maximal_abelian_subgroups(G: FinGroup):
    ab = [H for H in all_subgroups(G) if H.is_abelian()]
    sets = [set(H.elements) for H in ab]
    return [H for H, s in zip(ab, sets) if not any(s < t for t in sets)]


def sylow(G: FinGroup, p: int) -> Subgroup:
    """One Sylow p-subgroup (the trivial subgroup when p does not divide |G|)."""
    n, pk = G.order, 1
    while n % p == 0:
        n //= p
        pk *= p
    for H in all_subgroups(G):
        if H.order == pk:
            return H
    raise AssertionError("no Sylow subgroup found")
