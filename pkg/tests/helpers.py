"""Shared oracles for the test suite."""
import itertools
from fractions import Fraction
from math import gcd


def pullback_cochain(phi, M, n, f):
    """phi^* f for a chain map phi: S -> T and a T-cochain f with values in M."""
    S, T = phi.source, phi.target
    N = S.group.order
    k = M.rank
    blocks = [f[i * k:(i + 1) * k] for i in range(T.ranks[n])]
    out = []
    for img in phi.images[n]:
        acc = [0] * k
        for idx, c in enumerate(img):
            if c:
                i, g = divmod(idx, N)
                v = [sum(a * b for a, b in zip(row, blocks[i])) for row in M.action[g]]
                acc = [x + c * y for x, y in zip(acc, v)]
        out.extend(acc)
    return out


def all_vectors(bounds):
    """Every integer vector with 0 <= v_i < bounds_i."""
    out = [[]]
    for b in bounds:
        out = [v + [x] for v in out for x in range(b)]
    return out


def as_fraction(v, m):
    return [Fraction(x, m) for x in v]


def det(A):
    """Exact determinant by fraction-free elimination (oracle)."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return int(d)


def minors_gcd(A, k):
    """gcd of all k x k minors (oracle for d_1 ... d_k)."""
    m, n = len(A), len(A[0])
    g = 0
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            g = gcd(g, det([[A[i][j] for j in cols] for i in rows]))
    return g


def rank_q(A):
    """Rank over Q by Gaussian elimination (oracle)."""
    M = [[Fraction(x) for x in row] for row in A]
    r = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def cores_res_check(G, H, M, n, P):
    """Assert cores(res(c)) = [G:H] c on every generator of H^n(G, M)."""
    from amitsur.cohom import cohomology, corestriction, restriction
    src = cohomology(G, M, n, P)
    idx = G.order // H.order
    for f in src.generators():
        c = src.cls(f)
        r = restriction(H, c)
        back = corestriction(H, r, M)
        assert back.group.coords(back.cocycle) == src.coords([idx * x for x in f])


def _factor_lists(n, smallest=2):
    """Invariant factor lists d1 | d2 | ... with product n."""
    if n == 1:
        return [[]]
    out = []
    for d in range(smallest, n + 1):
        if n % d == 0:
            out.extend([d] + rest for rest in _factor_lists(n // d, d) if not rest or rest[0] % d == 0)
    return out


def abelianization_invariants(G):
    """Invariant factors of G / [G, G] by brute force on cosets."""
    comm = {G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in range(G.order) for b in range(G.order)}
    K = set(comm)
    while True:
        bigger = K | {G.mul(a, b) for a in K for b in K}
        if bigger == K:
            break
        K = bigger
    coset = {g: frozenset(G.mul(g, k) for k in K) for g in range(G.order)}
    reps = {coset[g]: g for g in range(G.order)}
    q = len(reps)

    def torsion_count(d):
        return sum(1 for c, g in reps.items() if coset[G.power(g, d)] == coset[G.identity])

    counts = {d: torsion_count(d) for d in range(1, q + 1) if q % d == 0}
    for inv in _factor_lists(q):
        ok = True
        for d, cnt in counts.items():
            prod = 1
            for n in inv:
                prod *= gcd(d, n)
            ok = ok and prod == cnt
        if ok:
            return inv
    raise AssertionError("no abelian group matches")
