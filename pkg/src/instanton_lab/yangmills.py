"""Radial Yang–Mills equation for the SU(2) ansatz on R⁴.

For A = a(r) Σ (x ⌟ β_j) ⊗ e_j the Yang–Mills equation becomes

    r² a'' + 3 r a' - 4 r a² (3 + 2 r a) - 3 a = 0,

and with u = a/r, v = r⁵ (u' - 2 r u²) it is the first-order system

    u' = 2 r u² + v / r⁵,    v' = -4 r u v.

Instantons are exactly the solutions with v ≡ 0.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from . import kernels

__all__ = ["YMState", "YMTrajectory", "ym_residual", "uv_rhs", "state_from_profile", "integrate_ym", "write_csv"]


@dataclass(frozen=True)
class YMState:
    r: float
    u: float
    v: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be positive")

    @property
    def a(self) -> float:
        return self.r * self.u


def ym_residual(a: float, da: float, d2a: float, r: float) -> float:
    """r² a'' + 3 r a' - 4 r a² (3 + 2 r a) - 3 a."""
    return r * r * d2a + 3 * r * da - 4 * r * a * a * (3 + 2 * r * a) - 3 * a


def uv_rhs(state: YMState) -> tuple[float, float]:
    """(du/dr, dv/dr) at ``state``."""
    r, u, v = state.r, state.u, state.v
    return 2 * r * u * u + v / r ** 5, -4 * r * u * v


def state_from_profile(a: float, da: float, r: float) -> YMState:
    """(u, v) from a and a' at radius r."""
    u = a / r
    du = da / r - a / (r * r)
    return YMState(r, u, r ** 5 * (du - 2 * r * u * u))


@dataclass(frozen=True)
class YMTrajectory:
    r: np.ndarray
    u: np.ndarray
    v: np.ndarray
    local_error: np.ndarray
    blew_up: bool
    backend: str

    @property
    def a(self) -> np.ndarray:
        return self.r * self.u

    @property
    def max_local_error(self) -> float:
        return float(np.max(self.local_error))


def integrate_ym(initial: YMState, r_end: float, step: float = 1e-3, guard: float = 1e100) -> YMTrajectory:
    """Fixed-step RK4 from ``initial.r`` to ``r_end``.

    The last step is shortened by choosing the step count so that it lands on
    ``r_end`` exactly.  Blow-up (non-finite or ``|u|, |v| > guard``) ends the
    trajectory and is reported in ``blew_up``.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not r_end > initial.r:
        raise ValueError("r_end must exceed the initial radius")
    nsteps = max(1, math.ceil((r_end - initial.r) / step - 1e-9))
    h = (r_end - initial.r) / nsteps
    r, u, v, err, stopped = kernels.ym_rk4(initial.r, initial.u, initial.v, h, nsteps, guard)
    return YMTrajectory(np.asarray(r), np.asarray(u), np.asarray(v), np.asarray(err), stopped >= 0, kernels.BACKEND)


def write_csv(traj: YMTrajectory, stream: TextIO) -> None:
    """CSV with columns r,u,v,a."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["r", "u", "v", "a"])
    for row in zip(traj.r, traj.u, traj.v, traj.a):
        w.writerow([repr(float(x)) for x in row])
