"""Pure-Python simplex kernels (fallback when the compiled module is absent).

Two families share one API:

* ``f_*`` operate on a C-contiguous float64 numpy tableau;
* ``q_*`` operate on a list-of-lists tableau of exact ``Fraction`` entries.

Row ``m`` onward hold objective rows; the last column is the right-hand side.
"""
import numpy as np


def f_entering(row, ncols, tol):
    for j in range(ncols):
        if row[j] < -tol:
            return j
    return -1


def f_entering_dantzig(row, ncols, tol):
    j = int(np.argmin(row[:ncols]))
    return j if row[j] < -tol else -1


def f_leaving(T, col, rhs, basis, m, tol):
    best = -1
    best_ratio = 0.0
    for i in range(m):
        a = T[i, col]
        if a > tol:
            ratio = max(T[i, rhs], 0.0) / a
            if (
                best < 0
                or ratio < best_ratio - 1e-12
                or (abs(ratio - best_ratio) <= 1e-12 and basis[i] < basis[best])
            ):
                best = i
                best_ratio = ratio
    return best


def f_leaving_harris(T, col, rhs, basis, m, tol, relax):
    """Two-pass ratio test.

    Pass one bounds the step with every right-hand side relaxed by
    ``relax``; pass two takes the largest pivot among rows whose ratio
    fits under that bound, lowest basic index on ties.
    """
    bound = np.inf
    for i in range(m):
        a = T[i, col]
        if a > tol:
            r = (max(T[i, rhs], 0.0) + relax) / a
            if r < bound:
                bound = r
    best = -1
    best_a = 0.0
    for i in range(m):
        a = T[i, col]
        if a > tol and max(T[i, rhs], 0.0) / a <= bound:
            if best < 0 or a > best_a or (a == best_a and basis[i] < basis[best]):
                best = i
                best_a = a
    return best


def f_pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, c] = 0.0
    T[r, c] = 1.0


def q_entering(row, ncols):
    for j in range(ncols):
        if row[j] < 0:
            return j
    return -1


def q_leaving(T, col, rhs, basis, m):
    best = -1
    best_ratio = None
    for i in range(m):
        a = T[i][col]
        if a > 0:
            ratio = T[i][rhs] / a
            if best < 0 or ratio < best_ratio or (ratio == best_ratio and basis[i] < basis[best]):
                best = i
                best_ratio = ratio
    return best


def q_pivot(T, r, c):
    prow = T[r]
    p = prow[c]
    if p != 1:
        inv = 1 / p
        prow = [x * inv if x else x for x in prow]
        T[r] = prow
    nz = [j for j, x in enumerate(prow) if x]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if not f:
            continue
        for j in nz:
            row[j] -= f * prow[j]
