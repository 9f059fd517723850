# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith normal form kernel on 64-bit integers.

Mirrors ``_pycore.smith`` step for step.  Any intermediate that would leave
the int64 range raises OverflowError; the caller then reruns the reference
implementation on arbitrary-precision integers, so results never depend on
which kernel ran.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memset
from libc.stdint cimport int64_t, INT64_MIN

cdef extern from *:
    """
    static inline int mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int mul_ovf(long long a, long long b, long long *r) nogil
    int sub_ovf(long long a, long long b, long long *r) nogil
    int add_ovf(long long a, long long b, long long *r) nogil


class KernelOverflow(OverflowError):
    pass


cdef inline long long floordiv(long long x, long long p) except? -1:
    if p == -1 and x == INT64_MIN:
        raise KernelOverflow()
    cdef long long q = x / p
    if (x % p != 0) and ((x < 0) != (p < 0)):
        q -= 1
    return q


cdef inline long long absval(long long x) except? -1:
    if x == INT64_MIN:
        raise KernelOverflow()
    return -x if x < 0 else x


cdef int axpy(long long *dst, long long *src, long long q, Py_ssize_t start,
              Py_ssize_t stop, Py_ssize_t stride) except -1:
    # dst[k] -= q * src[k] over a strided range
    cdef Py_ssize_t k
    cdef long long prod, res
    for k in range(start, stop):
        if src[k * stride] != 0:
            if mul_ovf(q, src[k * stride], &prod) or sub_ovf(dst[k * stride], prod, &res):
                raise KernelOverflow()
            dst[k * stride] = res
    return 0


cdef int addto(long long *dst, long long *src, Py_ssize_t start, Py_ssize_t stop) except -1:
    cdef Py_ssize_t k
    cdef long long res
    for k in range(start, stop):
        if src[k] != 0:
            if add_ovf(dst[k], src[k], &res):
                raise KernelOverflow()
            dst[k] = res
    return 0


cdef void swap_rows(long long *a, Py_ssize_t ncols, Py_ssize_t r1, Py_ssize_t r2) nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    for k in range(ncols):
        tmp = a[r1 * ncols + k]
        a[r1 * ncols + k] = a[r2 * ncols + k]
        a[r2 * ncols + k] = tmp


cdef void swap_cols(long long *a, Py_ssize_t nrows, Py_ssize_t ncols, Py_ssize_t c1, Py_ssize_t c2) nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    for k in range(nrows):
        tmp = a[k * ncols + c1]
        a[k * ncols + c1] = a[k * ncols + c2]
        a[k * ncols + c2] = tmp


cdef void move_pivot(long long *a, long long *U, long long *V, Py_ssize_t m, Py_ssize_t n,
                     Py_ssize_t t, Py_ssize_t pi, Py_ssize_t pj) nogil:
    if pi != t:
        swap_rows(a, n, t, pi)
        if U != NULL:
            swap_rows(U, m, t, pi)
    if pj != t:
        swap_cols(a, m, n, t, pj)
        if V != NULL:
            swap_cols(V, n, n, t, pj)


cdef long long *alloc_identity(Py_ssize_t n) except NULL:
    cdef long long *M = <long long *> malloc(max(n * n, 1) * sizeof(long long))
    if M == NULL:
        raise MemoryError()
    memset(M, 0, max(n * n, 1) * sizeof(long long))
    cdef Py_ssize_t i
    for i in range(n):
        M[i * n + i] = 1
    return M


cdef list to_lists(long long *M, Py_ssize_t r, Py_ssize_t c):
    cdef Py_ssize_t i, j
    return [[M[i * c + j] for j in range(c)] for i in range(r)]


cdef int run(long long *a, long long *U, long long *V, Py_ssize_t m, Py_ssize_t n, list diag) except -1:
    cdef Py_ssize_t t = 0, i, j, pi, pj, bad
    cdef long long best, ax, x, p, q
    cdef bint dirty
    while t < m and t < n:
        best = 0
        pi = pj = -1
        for i in range(t, m):
            for j in range(t, n):
                x = a[i * n + j]
                if x != 0:
                    ax = absval(x)
                    if best == 0 or ax < best:
                        best = ax
                        pi = i
                        pj = j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        move_pivot(a, U, V, m, n, t, pi, pj)
        while True:
            p = a[t * n + t]
            dirty = False
            for i in range(t + 1, m):
                x = a[i * n + t]
                if x != 0:
                    q = floordiv(x, p)
                    axpy(&a[i * n], &a[t * n], q, t, n, 1)
                    if U != NULL:
                        axpy(&U[i * m], &U[t * m], q, 0, m, 1)
                    if a[i * n + t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                x = a[t * n + j]
                if x != 0:
                    q = floordiv(x, p)
                    axpy(&a[j], &a[t], q, t, m, n)
                    if V != NULL:
                        axpy(&V[j], &V[t], q, 0, n, n)
                    if a[t * n + j] != 0:
                        dirty = True
            if dirty:
                best = absval(p)
                pi = t
                pj = t
                for i in range(t + 1, m):
                    x = a[i * n + t]
                    if x != 0:
                        ax = absval(x)
                        if ax < best:
                            best = ax
                            pi = i
                            pj = t
                for j in range(t + 1, n):
                    x = a[t * n + j]
                    if x != 0:
                        ax = absval(x)
                        if ax < best:
                            best = ax
                            pi = t
                            pj = j
                move_pivot(a, U, V, m, n, t, pi, pj)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            addto(&a[t * n], &a[bad * n], t, n)
            if U != NULL:
                addto(&U[t * m], &U[bad * m], 0, m)
        if a[t * n + t] < 0:
            a[t * n + t] = -a[t * n + t]
            if U != NULL:
                for j in range(m):
                    U[t * m + j] = -U[t * m + j]
        diag.append(a[t * n + t])
        t += 1
    return 0


def smith(A, Py_ssize_t m, Py_ssize_t n, bint want_u=True, bint want_v=True):
    """Same contract as ``_pycore.smith``; raises OverflowError on int64 overflow."""
    cdef long long *a = <long long *> malloc(max(m * n, 1) * sizeof(long long))
    cdef long long *U = NULL
    cdef long long *V = NULL
    cdef Py_ssize_t i, j
    cdef list diag = []
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = A[i]
            for j in range(n):
                a[i * n + j] = row[j]
        if want_u:
            U = alloc_identity(m)
        if want_v:
            V = alloc_identity(n)
        run(a, U, V, m, n, diag)
        return (diag,
                to_lists(U, m, m) if want_u else None,
                to_lists(V, n, n) if want_v else None)
    finally:
        free(a)
        if U != NULL:
            free(U)
        if V != NULL:
            free(V)
