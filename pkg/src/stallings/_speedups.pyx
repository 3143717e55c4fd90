# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled numeric backend; mirrors _kernels_py exactly.

Walk counting runs its int64 phase in C loops and hands off to the
shared big-integer continuation before any overflow.
"""

import numpy as np

from . import _kernels_py


def closed_walk_counts(tails, heads, rev, n_vertices, root, r_max):
    cdef long long[::1] t = np.ascontiguousarray(tails, dtype=np.int64)
    cdef long long[::1] h = np.ascontiguousarray(heads, dtype=np.int64)
    cdef long long[::1] rv = np.ascontiguousarray(rev, dtype=np.int64)
    cdef Py_ssize_t n_states = t.shape[0]
    cdef Py_ssize_t n = n_vertices
    cdef Py_ssize_t rt = root
    cdef Py_ssize_t rmax = r_max
    cdef Py_ssize_t i, step
    cdef long long maxdeg, fmax, limit
    if rmax <= 0:
        return []
    if n_states == 0:
        return [0] * rmax
    f_arr = np.zeros(n_states, dtype=np.int64)
    g_arr = np.zeros(n_states, dtype=np.int64)
    vs_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] f = f_arr
    cdef long long[::1] g = g_arr
    cdef long long[::1] vs = vs_arr
    for i in range(n_states):
        vs[h[i]] += 1
    maxdeg = 2
    for i in range(n):
        if vs[i] > maxdeg:
            maxdeg = vs[i]
    limit = (<long long> 1 << 62) // maxdeg
    for i in range(n_states):
        f[i] = 1 if t[i] == rt else 0
    out = []
    for step in range(1, rmax + 1):
        fmax = 0
        for i in range(n_states):
            if f[i] > fmax:
                fmax = f[i]
        if fmax > limit:
            return _kernels_py._bigint_continue(
                [f[i] for i in range(n_states)], t, h, rv, n, rt, out, rmax
            )
        for i in range(n):
            vs[i] = 0
        for i in range(n_states):
            vs[h[i]] += f[i]
        out.append(vs[rt])
        if step < rmax:
            for i in range(n_states):
                g[i] = vs[t[i]] - f[rv[i]]
            f_arr, g_arr = g_arr, f_arr
            f = f_arr
            g = g_arr
    return out


def nb_spectral_radius(tails, heads, rev, n_vertices, tol, max_iter):
    cdef long long[::1] t = np.ascontiguousarray(tails, dtype=np.int64)
    cdef long long[::1] h = np.ascontiguousarray(heads, dtype=np.int64)
    cdef long long[::1] rv = np.ascontiguousarray(rev, dtype=np.int64)
    cdef Py_ssize_t n_states = t.shape[0]
    cdef Py_ssize_t n = n_vertices
    cdef Py_ssize_t cap = max_iter
    cdef Py_ssize_t i, it
    cdef double ctol = tol
    cdef double lam = 0.0
    cdef double residual = float("inf")
    cdef double norm, bx, d
    if n_states == 0:
        return 0.0, 0.0, 0, True
    x_arr = np.ones(n_states, dtype=np.float64)
    y_arr = np.zeros(n_states, dtype=np.float64)
    vs_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef double[::1] vs = vs_arr
    for it in range(1, cap + 1):
        for i in range(n):
            vs[i] = 0.0
        for i in range(n_states):
            vs[h[i]] += x[i]
        norm = 0.0
        for i in range(n_states):
            y[i] = vs[t[i]] - x[rv[i]] + x[i]
            if y[i] > norm:
                norm = y[i]
        lam = norm - 1.0
        residual = 0.0
        for i in range(n_states):
            bx = y[i] - x[i]
            d = bx - lam * x[i]
            if d < 0.0:
                d = -d
            if d > residual:
                residual = d
        if residual <= ctol:
            return lam, residual, it, True
        for i in range(n_states):
            x[i] = y[i] / norm
    return lam, residual, cap, False
