"""Concurrence and stabilizer Renyi-2 magic, from amplitudes or from angles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .parametrization import WhartonAngles
from .states import PAULI_INDEX, PAULI_LABELS, StateVector, pauli_expectations

ZERO_TOL = 1e-9
_LOG_FLOOR = 1e-300
_NEG_M2_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ExpectationTable:
    """The 16 values <psi|P1 x P2|psi> in ``PAULI_LABELS`` order."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(16)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, label) -> float:
        key = label if isinstance(label, str) else str(label)
        return float(self.values[PAULI_INDEX[key]])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(PAULI_LABELS, self.values.tolist()))


@dataclass(frozen=True)
class ZeroPattern:
    mask: tuple[bool, ...]
    tol: float = ZERO_TOL

    @property
    def zeros(self) -> frozenset[str]:
        return frozenset(lab for lab, z in zip(PAULI_LABELS, self.mask) if z)

    @property
    def count(self) -> int:
        return sum(self.mask)

    def __str__(self):
        # one row per first Pauli factor, '.' marks a vanishing entry
        rows = ["".join("." if self.mask[4 * i + j] else "#" for j in range(4)) for i in range(4)]
        return "/".join(rows)


def concurrence(s: StateVector) -> float:
    a, b, c, d = s.amplitudes
    return float(min(2 * abs(a * d - b * c), 1.0))


def concurrence_batch(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    return 2 * np.abs(psi[..., 0] * psi[..., 3] - psi[..., 1] * psi[..., 2])


def m2_from_expectations(vals: np.ndarray) -> np.ndarray:
    """-ln(sum_P <P>^4 / 4) along the last axis, with the floating-point guards."""
    sq = np.square(vals)
    s = np.einsum("...i,...i->...", sq, sq) / 4.0
    m2 = -np.log(np.maximum(s, _LOG_FLOOR))
    return np.where((m2 < 0) & (m2 >= -_NEG_M2_SLACK), 0.0, m2)


def m2_batch(psi: np.ndarray) -> np.ndarray:
    return m2_from_expectations(pauli_expectations(psi))


def m2_direct(s: StateVector) -> float:
    return float(m2_from_expectations(pauli_expectations(s.amplitudes)))


def expectation_values(theta1, phi1, theta2, phi2, chi, gamma) -> np.ndarray:
    """Closed-form trigonometric expectations; broadcasts, returns (..., 16)."""
    ct1, st1 = np.cos(theta1), np.sin(theta1)
    ct2, st2 = np.cos(theta2), np.sin(theta2)
    cp1, sp1 = np.cos(phi1), np.sin(phi1)
    cp2, sp2 = np.cos(phi2), np.sin(phi2)
    cx, sx = np.cos(chi), np.sin(chi)
    cg, sg = np.cos(gamma), np.sin(gamma)

    xi = cx * st1 * cp1
    yi = cx * st1 * sp1
    zi = cx * ct1
    ix = cx * st2 * cp2
    iy = cx * st2 * sp2
    iz = cx * ct2
    xx = (sx * (ct1 * ct2 * cp1 * cp2 * cg + ct1 * cp1 * sp2 * sg + ct2 * sp1 * cp2 * sg - sp1 * sp2 * cg)
          + st1 * st2 * cp1 * cp2)
    yy = (sx * (ct1 * ct2 * sp1 * sp2 * cg - ct1 * sp1 * cp2 * sg - ct2 * cp1 * sp2 * sg - cp1 * cp2 * cg)
          + st1 * st2 * sp1 * sp2)
    zz = sx * st1 * st2 * cg + ct1 * ct2
    xy = (sx * (ct1 * ct2 * cp1 * sp2 * cg - ct1 * cp1 * cp2 * sg + ct2 * sp1 * sp2 * sg + sp1 * cp2 * cg)
          + st1 * st2 * cp1 * sp2)
    yx = (sx * (ct1 * ct2 * sp1 * cp2 * cg + ct1 * sp1 * sp2 * sg - ct2 * cp1 * cp2 * sg + cp1 * sp2 * cg)
          + st1 * st2 * sp1 * cp2)
    xz = -sx * (ct1 * st2 * cp1 * cg + st2 * sp1 * sg) + st1 * ct2 * cp1
    zx = -sx * (st1 * ct2 * cp2 * cg + st1 * sp2 * sg) + ct1 * st2 * cp2
    yz = -sx * (ct1 * st2 * sp1 * cg - st2 * cp1 * sg) + st1 * ct2 * sp1
    zy = -sx * (st1 * ct2 * sp2 * cg - st1 * cp2 * sg) + ct1 * st2 * sp2

    one = np.ones_like(xx)
    by_label = {
        "II": one, "IX": ix, "IY": iy, "IZ": iz,
        "XI": xi, "XX": xx, "XY": xy, "XZ": xz,
        "YI": yi, "YX": yx, "YY": yy, "YZ": yz,
        "ZI": zi, "ZX": zx, "ZY": zy, "ZZ": zz,
    }
    cols = np.broadcast_arrays(*(by_label[lab] for lab in PAULI_LABELS))
    return np.stack(cols, axis=-1)


def expectation_table(w: WhartonAngles) -> ExpectationTable:
    return ExpectationTable(expectation_values(*w.as_tuple()))


def m2_analytic(w: WhartonAngles) -> float:
    return float(m2_from_expectations(expectation_values(*w.as_tuple())))


def zero_pattern(t: ExpectationTable, tol: float = ZERO_TOL) -> ZeroPattern:
    if not tol > 0:
        raise ValueError("tol must be positive")
    return ZeroPattern(tuple(bool(abs(v) < tol) for v in t.values), tol)


def pattern_of_state(s: StateVector, tol: float = ZERO_TOL) -> ZeroPattern:
    return zero_pattern(ExpectationTable(pauli_expectations(s.amplitudes)), tol)
