"""Pure-Python Smith normal form kernel.

This is the reference implementation.  The compiled module ``_core`` runs the
same pivoting sequence on machine integers and must produce identical output;
it hands control back here whenever an entry would overflow 64 bits.
"""


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith(A, m, n, want_u=True, want_v=True):
    """Diagonalize the m x n integer matrix A.

    Returns (diag, U, V) with U*A*V = diag(diag) padded by zeros.  U or V is
    None when not requested.  Pivot: smallest nonzero magnitude in the active
    block, ties broken by lowest row then lowest column.
    """
    a = [list(row) for row in A]
    U = _identity(m) if want_u else None
    V = _identity(n) if want_v else None
    diag = []
    t = 0
    while t < m and t < n:
        # global pivot search in the active block
        best = 0
        pi = pj = -1
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = x if x > 0 else -x
                    if best == 0 or ax < best:
                        best, pi, pj = ax, i, j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        _move_pivot(a, U, V, t, pi, pj)
        while True:
            p = a[t][t]
            dirty = False
            rowt = a[t]
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // p
                    ri = a[i]
                    for j in range(t, n):
                        if rowt[j]:
                            ri[j] -= q * rowt[j]
                    if U is not None:
                        ui, ut = U[i], U[t]
                        for j in range(m):
                            if ut[j]:
                                ui[j] -= q * ut[j]
                    if ri[t]:
                        dirty = True
            for j in range(t + 1, n):
                x = rowt[j]
                if x:
                    q = x // p
                    for i in range(t, m):
                        if a[i][t]:
                            a[i][j] -= q * a[i][t]
                    if V is not None:
                        for i in range(n):
                            if V[i][t]:
                                V[i][j] -= q * V[i][t]
                    if rowt[j]:
                        dirty = True
            if dirty:
                # smallest leftover in row t / column t becomes the pivot
                best, pi, pj = (p if p > 0 else -p), t, t
                for i in range(t + 1, m):
                    x = a[i][t]
                    if x:
                        ax = x if x > 0 else -x
                        if ax < best:
                            best, pi, pj = ax, i, t
                for j in range(t + 1, n):
                    x = rowt[j]
                    if x:
                        ax = x if x > 0 else -x
                        if ax < best:
                            best, pi, pj = ax, t, j
                _move_pivot(a, U, V, t, pi, pj)
                continue
            # divisibility of the remaining block
            bad = -1
            for i in range(t + 1, m):
                ri = a[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            ri = a[bad]
            for j in range(t, n):
                if ri[j]:
                    rowt[j] += ri[j]
            if U is not None:
                ub, ut = U[bad], U[t]
                for j in range(m):
                    if ub[j]:
                        ut[j] += ub[j]
        if a[t][t] < 0:
            a[t][t] = -a[t][t]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(a[t][t])
        t += 1
    return diag, U, V


def _move_pivot(a, U, V, t, pi, pj):
    if pi != t:
        a[t], a[pi] = a[pi], a[t]
        if U is not None:
            U[t], U[pi] = U[pi], U[t]
    if pj != t:
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        if V is not None:
            for row in V:
                row[t], row[pj] = row[pj], row[t]
