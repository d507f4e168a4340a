# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integration kernels; same contract as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isfinite

cnp.import_array()


cdef inline void _ym_rhs(double r, double u, double v, double* du, double* dv) noexcept nogil:
    du[0] = 2.0 * r * u * u + v / (r * r * r * r * r)
    dv[0] = -4.0 * r * u * v


cdef inline void _ym_step(double r, double u, double v, double h, double* uo, double* vo) noexcept nogil:
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v
    _ym_rhs(r, u, v, &k1u, &k1v)
    _ym_rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, &k2u, &k2v)
    _ym_rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, &k3u, &k3v)
    _ym_rhs(r + h, u + h * k3u, v + h * k3v, &k4u, &k4v)
    uo[0] = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    vo[0] = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)


def ym_rk4(double r0, double u0, double v0, double h, Py_ssize_t nsteps, double guard):
    cdef cnp.ndarray[double] r = np.empty(nsteps + 1)
    cdef cnp.ndarray[double] u = np.empty(nsteps + 1)
    cdef cnp.ndarray[double] v = np.empty(nsteps + 1)
    cdef cnp.ndarray[double] err = np.zeros(nsteps + 1)
    cdef double rc = r0, uc = u0, vc = v0, uf, vf, um, vm, uh, vh, e
    cdef Py_ssize_t i
    r[0] = r0
    u[0] = u0
    v[0] = v0
    for i in range(nsteps):
        _ym_step(rc, uc, vc, h, &uf, &vf)
        _ym_step(rc, uc, vc, 0.5 * h, &um, &vm)
        _ym_step(rc + 0.5 * h, um, vm, 0.5 * h, &uh, &vh)
        rc = r0 + (i + 1) * h
        e = max(fabs(uh - uf), fabs(vh - vf)) / 15.0
        r[i + 1] = rc
        u[i + 1] = uh
        v[i + 1] = vh
        err[i + 1] = e
        uc = uh
        vc = vh
        if not (isfinite(uc) and isfinite(vc)) or fabs(uc) > guard or fabs(vc) > guard:
            return r[: i + 2], u[: i + 2], v[: i + 2], err[: i + 2], i + 1
    return r, u, v, err, -1


cdef void _nahm_rhs(double[:, ::1] T, double[:, :, ::1] c, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t m = T.shape[1], a, j, l, k
    cdef Py_ssize_t p, q
    cdef double w
    for a in range(3):
        p = (a + 1) % 3
        q = (a + 2) % 3
        for k in range(m):
            out[a, k] = 0.0
        for j in range(m):
            if T[p, j] == 0.0:
                continue
            for l in range(m):
                w = T[p, j] * T[q, l]
                if w == 0.0:
                    continue
                for k in range(m):
                    out[a, k] += w * c[j, l, k]


cdef void _nahm_step(double[:, ::1] T, double[:, :, ::1] c, double h,
                     double[:, ::1] out, double[:, :, ::1] work) noexcept nogil:
    # work[0..3] hold k1..k4, work[4] the stage argument
    cdef Py_ssize_t m = T.shape[1], a, k
    _nahm_rhs(T, c, work[0])
    for a in range(3):
        for k in range(m):
            work[4, a, k] = T[a, k] + 0.5 * h * work[0, a, k]
    _nahm_rhs(work[4], c, work[1])
    for a in range(3):
        for k in range(m):
            work[4, a, k] = T[a, k] + 0.5 * h * work[1, a, k]
    _nahm_rhs(work[4], c, work[2])
    for a in range(3):
        for k in range(m):
            work[4, a, k] = T[a, k] + h * work[2, a, k]
    _nahm_rhs(work[4], c, work[3])
    for a in range(3):
        for k in range(m):
            out[a, k] = T[a, k] + h / 6.0 * (work[0, a, k] + 2.0 * work[1, a, k] + 2.0 * work[2, a, k] + work[3, a, k])


def nahm_rk4(T0, c, double h, Py_ssize_t nsteps, double guard):
    cdef double[:, ::1] T = np.ascontiguousarray(T0, dtype=float).copy()
    cdef double[:, :, ::1] cc = np.ascontiguousarray(c, dtype=float)
    cdef Py_ssize_t m = T.shape[1], i, a, k
    traj_arr = np.empty((nsteps + 1, 3, m))
    err_arr = np.zeros(nsteps + 1)
    cdef double[:, :, ::1] traj = traj_arr
    cdef double[::1] err = err_arr
    cdef double[:, ::1] full = np.empty((3, m))
    cdef double[:, ::1] mid = np.empty((3, m))
    cdef double[:, ::1] half = np.empty((3, m))
    cdef double[:, :, ::1] work = np.empty((5, 3, m))
    cdef double e, big
    cdef bint bad
    traj[0, :, :] = T
    for i in range(nsteps):
        _nahm_step(T, cc, h, full, work)
        _nahm_step(T, cc, 0.5 * h, mid, work)
        _nahm_step(mid, cc, 0.5 * h, half, work)
        e = 0.0
        big = 0.0
        bad = False
        for a in range(3):
            for k in range(m):
                e = max(e, fabs(half[a, k] - full[a, k]))
                big = max(big, fabs(half[a, k]))
                if not isfinite(half[a, k]):
                    bad = True
                T[a, k] = half[a, k]
        err[i + 1] = e / 15.0
        traj[i + 1, :, :] = T
        if bad or big > guard:
            return traj_arr[: i + 2], err_arr[: i + 2], i + 1
    return traj_arr, err_arr, -1
