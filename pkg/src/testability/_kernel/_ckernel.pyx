# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex kernels; same API as ``_pykernel``."""
from libc.math cimport INFINITY, fabs


def f_entering(double[::1] row, Py_ssize_t ncols, double tol):
    cdef Py_ssize_t j
    for j in range(ncols):
        if row[j] < -tol:
            return j
    return -1


def f_entering_dantzig(double[::1] row, Py_ssize_t ncols, double tol):
    cdef Py_ssize_t j, best = -1
    cdef double v = -tol
    for j in range(ncols):
        if row[j] < v:
            v = row[j]
            best = j
    return best


def f_leaving(double[:, ::1] T, Py_ssize_t col, Py_ssize_t rhs, list basis,
              Py_ssize_t m, double tol):
    cdef Py_ssize_t i, best = -1
    cdef double a, ratio, best_ratio = 0.0
    for i in range(m):
        a = T[i, col]
        if a > tol:
            ratio = (T[i, rhs] if T[i, rhs] > 0.0 else 0.0) / a
            if best < 0 or ratio < best_ratio - 1e-12:
                best = i
                best_ratio = ratio
            elif fabs(ratio - best_ratio) <= 1e-12 and <Py_ssize_t>basis[i] < <Py_ssize_t>basis[best]:
                best = i
                best_ratio = ratio
    return best


def f_leaving_harris(double[:, ::1] T, Py_ssize_t col, Py_ssize_t rhs, list basis,
                     Py_ssize_t m, double tol, double relax):
    cdef Py_ssize_t i, best = -1
    cdef double a, b, r, bound = INFINITY, best_a = 0.0
    for i in range(m):
        a = T[i, col]
        if a > tol:
            b = T[i, rhs] if T[i, rhs] > 0.0 else 0.0
            r = (b + relax) / a
            if r < bound:
                bound = r
    for i in range(m):
        a = T[i, col]
        if a > tol:
            b = T[i, rhs] if T[i, rhs] > 0.0 else 0.0
            if b / a <= bound:
                if best < 0 or a > best_a or (a == best_a and <Py_ssize_t>basis[i] < <Py_ssize_t>basis[best]):
                    best = i
                    best_a = a
    return best


def f_pivot(double[:, ::1] T, Py_ssize_t r, Py_ssize_t c):
    cdef Py_ssize_t i, j, k, nrows = T.shape[0], ncols = T.shape[1], nnz = 0
    cdef double inv = 1.0 / T[r, c], f
    cdef Py_ssize_t[::1] nz
    import numpy as np
    nz = np.empty(ncols, dtype=np.intp)
    for j in range(ncols):
        if T[r, j] != 0.0:
            T[r, j] *= inv
            nz[nnz] = j
            nnz += 1
    T[r, c] = 1.0
    for i in range(nrows):
        if i == r:
            continue
        f = T[i, c]
        if f == 0.0:
            continue
        for k in range(nnz):
            j = nz[k]
            T[i, j] -= f * T[r, j]
        T[i, c] = 0.0


def q_entering(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    for j in range(ncols):
        if row[j] < 0:
            return j
    return -1


def q_leaving(list T, Py_ssize_t col, Py_ssize_t rhs, list basis, Py_ssize_t m):
    cdef Py_ssize_t i, best = -1
    cdef object a, ratio, best_ratio = None
    cdef list row
    for i in range(m):
        row = <list>T[i]
        a = row[col]
        if a > 0:
            ratio = row[rhs] / a
            if best < 0 or ratio < best_ratio or (ratio == best_ratio and basis[i] < basis[best]):
                best = i
                best_ratio = ratio
    return best


def q_pivot(list T, Py_ssize_t r, Py_ssize_t c):
    cdef list prow = <list>T[r]
    cdef list row, nz
    cdef object p = prow[c], inv, f, x
    cdef Py_ssize_t i, j, k, n = len(prow), nrows = len(T), nnz
    if p != 1:
        inv = 1 / p
        prow = [x * inv if x else x for x in prow]
        T[r] = prow
    nz = [j for j in range(n) if prow[j]]
    nnz = len(nz)
    for i in range(nrows):
        if i == r:
            continue
        row = <list>T[i]
        f = row[c]
        if not f:
            continue
        for k in range(nnz):
            j = <Py_ssize_t>nz[k]
            row[j] = row[j] - f * prow[j]
