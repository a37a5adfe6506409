"""Wharton's six-angle chart of the pure two-qubit state manifold.

The state is built from two local spinors (theta_i, phi_i), a concurrence
angle chi and a recurrence angle gamma = alpha_1 + alpha_2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .states import StateVector

TWO_PI = 2 * math.pi


def reduce_angle(x: float) -> float:
    """Reduce modulo 2*pi into [0, 2*pi)."""
    r = math.fmod(x, TWO_PI)
    if r < 0:
        r += TWO_PI
    # fmod of e.g. -1e-17 lands on 2*pi after the shift
    return 0.0 if r >= TWO_PI else r


@dataclass(frozen=True)
class WhartonAngles:
    theta1: float
    phi1: float
    theta2: float
    phi2: float
    chi: float
    gamma: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite angle in {vals}")
        eps = 1e-12
        for name in ("theta1", "theta2"):
            if not -eps <= getattr(self, name) <= math.pi + eps:
                raise DomainError(f"{name}={getattr(self, name)} outside [0, pi]")
        if not -eps <= self.chi <= math.pi / 2 + eps:
            raise DomainError(f"chi={self.chi} outside [0, pi/2]")

    @classmethod
    def normalized(cls, theta1, phi1, theta2, phi2, chi, gamma) -> WhartonAngles:
        """Build with azimuths and gamma reduced into [0, 2*pi)."""
        return cls(float(theta1), reduce_angle(phi1), float(theta2), reduce_angle(phi2),
                   float(chi), reduce_angle(gamma))

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.theta1, self.phi1, self.theta2, self.phi2, self.chi, self.gamma)

    def with_chi(self, chi: float) -> WhartonAngles:
        return WhartonAngles(self.theta1, self.phi1, self.theta2, self.phi2, chi, self.gamma)

    @property
    def delta(self) -> float:
        return math.sin(self.chi)


@dataclass(frozen=True)
class Spinor:
    up: complex
    down: complex
    alpha: float = 0.0


def make_spinor(theta: float, phi: float, alpha: float = 0.0) -> Spinor:
    # e^{+i alpha/2} is the phase convention for which gamma = alpha1 + alpha2
    ph = np.exp(0.5j * alpha)
    up = ph * math.cos(theta / 2) * np.exp(-0.5j * phi)
    down = ph * math.sin(theta / 2) * np.exp(0.5j * phi)
    return Spinor(complex(up), complex(down), float(alpha))


def assemble(s1: Spinor, s2: Spinor, chi: float) -> StateVector:
    A, B, C, D = s1.up, s1.down, s2.up, s2.down
    cc, ss = math.cos(chi / 2), math.sin(chi / 2)
    amps = np.array([
        A * C * cc + (B * D).conjugate() * ss,
        A * D * cc - (B * C).conjugate() * ss,
        B * C * cc - (A * D).conjugate() * ss,
        B * D * cc + (A * C).conjugate() * ss,
    ])
    return StateVector(amps)


def angles_to_amplitudes(theta1, phi1, theta2, phi2, chi, gamma) -> np.ndarray:
    """Vectorized amplitude map; broadcasts its arguments, returns (..., 4)."""
    c1, s1 = np.cos(np.divide(theta1, 2)), np.sin(np.divide(theta1, 2))
    c2, s2 = np.cos(np.divide(theta2, 2)), np.sin(np.divide(theta2, 2))
    cx, sx = np.cos(np.divide(chi, 2)), np.sin(np.divide(chi, 2))
    gp = np.exp(0.5j * np.asarray(gamma))
    gm = gp.conj()
    ps = np.exp(-0.5j * (np.add(phi1, phi2)))
    pd = np.exp(-0.5j * (np.subtract(phi1, phi2)))
    a = (cx * c1 * c2 * gp + sx * s1 * s2 * gm) * ps
    b = (cx * c1 * s2 * gp - sx * s1 * c2 * gm) * pd
    c = (cx * s1 * c2 * gp - sx * c1 * s2 * gm) * pd.conj()
    d = (cx * s1 * s2 * gp + sx * c1 * c2 * gm) * ps.conj()
    return np.stack(np.broadcast_arrays(a, b, c, d), axis=-1)


def angles_to_state(w: WhartonAngles) -> StateVector:
    return StateVector(angles_to_amplitudes(*w.as_tuple()))


def concurrence_of_angles(w: WhartonAngles) -> float:
    return math.sin(w.chi)


def chi_of_delta(delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"concurrence {delta} outside [0, 1]")
    return math.asin(delta)


def sin_gamma_diagnostic(s: StateVector, w: WhartonAngles) -> float:
    """sin(gamma) recovered from amplitudes.

    The global phase is first rotated so that the complex concurrence
    2(ad - bc) is real and non-negative.  Only meaningful where
    cos(chi) sin(theta1) sin(theta2) is away from zero.
    """
    a, b, c, d = s.amplitudes
    z = a * d - b * c
    # amplitudes scale by e^{i phi}, ad - bc by e^{2 i phi}
    rot = np.exp(-0.5j * np.angle(z)) if abs(z) > 1e-15 else 1.0
    a, b, c, d = (rot * v for v in (a, b, c, d))
    den = math.cos(w.chi) * math.sin(w.theta1) * math.sin(w.theta2)
    return float(2 * (a * d + b * c).imag / den)
