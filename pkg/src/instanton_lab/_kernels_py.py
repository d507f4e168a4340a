"""Pure-Python integration kernels (reference implementation and fallback).

Both integrators take fixed classical RK4 steps.  Each step is also taken as
two half steps; the half-step result is kept and ``|y_half - y_full| / 15`` is
recorded as the local error estimate.  Integration stops early when a
component becomes non-finite or exceeds ``guard`` in absolute value.
"""
from __future__ import annotations

import math

import numpy as np


def _ym_rhs(r, u, v):
    # explicit product (not r ** 5) so the compiled kernel matches bit for bit
    return 2.0 * r * u * u + v / (r * r * r * r * r), -4.0 * r * u * v


def _ym_step(r, u, v, h):
    k1u, k1v = _ym_rhs(r, u, v)
    k2u, k2v = _ym_rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v)
    k3u, k3v = _ym_rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v)
    k4u, k4v = _ym_rhs(r + h, u + h * k3u, v + h * k3v)
    return (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def ym_rk4(r0: float, u0: float, v0: float, h: float, nsteps: int, guard: float):
    """Integrate u' = 2ru² + v/r⁵, v' = -4ruv.

    Returns ``(r, u, v, err, stopped)`` where the arrays hold the accepted
    states and ``stopped`` is the index of the guard trip (-1 if none).
    """
    r = np.empty(nsteps + 1)
    u = np.empty(nsteps + 1)
    v = np.empty(nsteps + 1)
    err = np.zeros(nsteps + 1)
    r[0], u[0], v[0] = r0, u0, v0
    rc, uc, vc = r0, u0, v0
    for i in range(nsteps):
        uf, vf = _ym_step(rc, uc, vc, h)
        um, vm = _ym_step(rc, uc, vc, 0.5 * h)
        uh, vh = _ym_step(rc + 0.5 * h, um, vm, 0.5 * h)
        rc = r0 + (i + 1) * h
        e = max(abs(uh - uf), abs(vh - vf)) / 15.0
        r[i + 1], u[i + 1], v[i + 1], err[i + 1] = rc, uh, vh, e
        uc, vc = uh, vh
        if not (math.isfinite(uc) and math.isfinite(vc)) or abs(uc) > guard or abs(vc) > guard:
            return r[: i + 2], u[: i + 2], v[: i + 2], err[: i + 2], i + 1
    return r, u, v, err, -1


def _nahm_rhs(T, c):
    # T'_1 = [T_2, T_3], T'_2 = [T_3, T_1], T'_3 = [T_1, T_2] in coordinates
    return np.stack([
        np.einsum("j,l,jlk->k", T[1], T[2], c),
        np.einsum("j,l,jlk->k", T[2], T[0], c),
        np.einsum("j,l,jlk->k", T[0], T[1], c),
    ])


def _nahm_step(T, c, h):
    k1 = _nahm_rhs(T, c)
    k2 = _nahm_rhs(T + 0.5 * h * k1, c)
    k3 = _nahm_rhs(T + 0.5 * h * k2, c)
    k4 = _nahm_rhs(T + h * k3, c)
    return T + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def nahm_rk4(T0: np.ndarray, c: np.ndarray, h: float, nsteps: int, guard: float):
    """Integrate Nahm's equations for coordinates ``T0`` of shape (3, m).

    ``c[j, l, k]`` are structure constants ``[b_j, b_l] = Σ_k c[j,l,k] b_k``.
    Returns ``(traj, err, stopped)`` with ``traj`` of shape (steps+1, 3, m).
    """
    T0 = np.asarray(T0, dtype=float)
    c = np.asarray(c, dtype=float)
    traj = np.empty((nsteps + 1,) + T0.shape)
    err = np.zeros(nsteps + 1)
    traj[0] = T0
    T = T0
    for i in range(nsteps):
        full = _nahm_step(T, c, h)
        half = _nahm_step(_nahm_step(T, c, 0.5 * h), c, 0.5 * h)
        err[i + 1] = float(np.max(np.abs(half - full))) / 15.0
        traj[i + 1] = T = half
        if not np.all(np.isfinite(T)) or np.max(np.abs(T)) > guard:
            return traj[: i + 2], err[: i + 2], i + 1
    return traj, err, -1
