"""Closed-form Pareto boundaries of M2 at fixed concurrence.

Lower boundary ABC, and the upper boundary made of the IHG, GFE and ED
branches.  All magic values are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceFailure, DomainError

DELTA_B = DELTA_F = 1 / math.sqrt(2)
DELTA_H = 0.5
DELTA_E = math.sqrt(3 / 4)
BRANCHES = ("ABC", "IHG", "GFE", "ED")


def _check_delta(delta, lo: float = 0.0, hi: float = 1.0):
    arr = np.asarray(delta, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(f"concurrence outside [{lo}, {hi}]: {delta}")
    return arr


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def f_abc(delta):
    d = _check_delta(delta)
    return _out(-np.log(d**4 - d**2 + 1))


def f_ihg(delta):
    d = _check_delta(delta)
    return _out(np.log(9 / (3 * d**4 - 2 * d**3 + 4)))


def f_gfe(delta):
    d = _check_delta(delta)
    return _out(np.log(16 / (8 * d**4 - 8 * d**2 + 9)))


def f_ed(delta):
    d = _check_delta(delta)
    return _out(np.log(18 / (7 * d**4 - 6 * d**2 + 9)))


BRANCH_FUNCTIONS: dict[str, Callable] = {"ABC": f_abc, "IHG": f_ihg, "GFE": f_gfe, "ED": f_ed}


def delta_g_quartic(delta):
    """Vanishes where the IHG and GFE curves cross."""
    return 24 * delta**4 + 32 * delta**3 - 72 * delta**2 + 17


def bisect(func: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-13,
           max_iter: int = 200) -> float:
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ConvergenceFailure(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0 or hi - lo < xtol:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise ConvergenceFailure(f"bisection did not reach {xtol} in {max_iter} steps")


def solve_delta_g() -> float:
    return bisect(delta_g_quartic, 0.5, 0.71)


def solve_delta_crossing() -> float:
    """Second IHG/GFE intersection, inside the ED segment."""
    return bisect(delta_g_quartic, 0.95, 1.0)


DELTA_G = solve_delta_g()
DELTA_CROSSING = solve_delta_crossing()


@dataclass(frozen=True)
class FrontierPoint:
    delta: float
    m2: float
    branch: str

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch {self.branch!r}")


def upper_branch(delta: float) -> str:
    _check_delta(delta)
    if delta <= DELTA_G:
        return "IHG"
    if delta <= DELTA_E:
        return "GFE"
    return "ED"


def m2_max(delta: float) -> FrontierPoint:
    branch = upper_branch(delta)
    return FrontierPoint(float(delta), BRANCH_FUNCTIONS[branch](delta), branch)


def m2_max_values(delta) -> np.ndarray:
    """Vectorized upper boundary value (no branch labels)."""
    d = _check_delta(delta)
    return np.where(d <= DELTA_G, f_ihg(d), np.where(d <= DELTA_E, f_gfe(d), f_ed(d)))


def m2_min(delta: float) -> FrontierPoint:
    return FrontierPoint(float(delta), f_abc(delta), "ABC")


def gamma_shift(delta):
    """Offset of gamma from its GFE value along the ED branch."""
    d = _check_delta(delta, DELTA_E, 1.0)
    arg = np.clip((4 - 3 / d**2) / 9, 0.0, None)
    return _out(np.pi / 2 - np.arccos(np.sqrt(arg)))


def optimal_cos2_gamma(delta):
    d = _check_delta(delta, DELTA_E, 1.0)
    return _out(np.clip((4 * d**2 - 3) / (9 * d**2), 0.0, None))


def m2_of_gamma(chi, gamma):
    """M2 along the GFE/ED angle family as a function of (chi, gamma)."""
    cx, sx = np.cos(chi), np.sin(chi)
    cg, sg = np.cos(gamma), np.sin(gamma)
    s = 5 / 4 + cx**4 + sx**4 * (sg**4 + 5 / 4 * cg**4) + 1.5 * sx**2 * cg**2
    return _out(-np.log(s / 4))


def slope(f: Callable, delta: float, h: float = 1e-6) -> float:
    return (f(delta + h) - f(delta - h)) / (2 * h)


@dataclass(frozen=True)
class SpecialPoints:
    delta_B: float
    delta_F: float
    delta_H: float
    delta_E: float
    delta_G: float
    delta_crossing: float
    m2_B: float
    m2_F: float
    m2_H: float
    m2_E: float
    m2_G: float
    m2_crossing: float
    m2_I: float
    m2_D: float


def special_points() -> SpecialPoints:
    return SpecialPoints(
        delta_B=DELTA_B, delta_F=DELTA_F, delta_H=DELTA_H, delta_E=DELTA_E,
        delta_G=DELTA_G, delta_crossing=DELTA_CROSSING,
        m2_B=f_abc(DELTA_B), m2_F=f_gfe(DELTA_F), m2_H=f_ihg(DELTA_H), m2_E=f_gfe(DELTA_E),
        m2_G=f_ihg(DELTA_G), m2_crossing=f_ihg(DELTA_CROSSING),
        m2_I=f_ihg(0.0), m2_D=f_ed(1.0),
    )
