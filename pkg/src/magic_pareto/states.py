"""Dense pure two-qubit states, Pauli strings and Clifford-style unitaries.

Basis order is |00>, |01>, |10>, |11> everywhere.  Global phase is never
canonicalized; physical equality goes through :func:`fidelity`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NotUnitary, ZeroVector

NORM_TOL = 1e-12
ZERO_NORM = 1e-14
UNITARY_TOL = 1e-10
IMAG_TOL = 1e-10
SAME_STATE_FIDELITY = 1 - 1e-9

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# first factor acts on the left qubit; label order II, IX, IY, IZ, XI, ...
PAULI_LABELS: tuple[str, ...] = tuple(p + q for p in "IXYZ" for q in "IXYZ")
PAULI_MATRICES = np.array([np.kron(SINGLE_QUBIT[lab[0]], SINGLE_QUBIT[lab[1]]) for lab in PAULI_LABELS])
PAULI_INDEX = {lab: i for i, lab in enumerate(PAULI_LABELS)}

# tr(P rho) = sum_ij P_ij rho_ji, so (rho.reshape(16) @ _TRACE_FORM_T)[p] = tr(P_p rho)
_TRACE_FORM_T = np.ascontiguousarray(PAULI_MATRICES.transpose(0, 2, 1).reshape(16, 16).T)


@dataclass(frozen=True)
class PauliString:
    first: str
    second: str

    def __post_init__(self):
        if self.first not in SINGLE_QUBIT or self.second not in SINGLE_QUBIT:
            raise ValueError(f"not a Pauli string: {self.first}{self.second}")

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        if len(label) != 2:
            raise ValueError(f"not a Pauli string: {label!r}")
        return cls(label[0], label[1])

    @property
    def label(self) -> str:
        return self.first + self.second

    @property
    def index(self) -> int:
        return PAULI_INDEX[self.label]

    @property
    def matrix(self) -> np.ndarray:
        return PAULI_MATRICES[self.index]

    def __str__(self):
        return self.label


PAULI_STRINGS: tuple[PauliString, ...] = tuple(PauliString.from_label(lab) for lab in PAULI_LABELS)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes (a, b, c, d) of a pure two-qubit state."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {amps.shape}")
        if abs(np.vdot(amps, amps).real - 1) > NORM_TOL:
            raise ValueError("StateVector amplitudes must be normalized; use make_state")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def a(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def b(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def c(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def d(self) -> complex:
        return complex(self.amplitudes[3])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        body = ", ".join(f"{z:.6g}" for z in self.amplitudes)
        return f"StateVector({body})"


@dataclass(frozen=True, eq=False)
class Unitary4:
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        object.__setattr__(self, "entries", m)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return bool(np.abs(self.entries.conj().T @ self.entries - np.eye(4)).max() < tol)

    def __matmul__(self, other: Unitary4) -> Unitary4:
        return Unitary4(self.entries @ other.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def make_state(a: complex, b: complex, c: complex, d: complex) -> StateVector:
    amps = np.array([a, b, c, d], dtype=complex)
    norm = np.linalg.norm(amps)
    if norm < ZERO_NORM:
        raise ZeroVector(f"cannot normalize a vector of norm {norm:.3g}")
    return StateVector(amps / norm)


PauliLike = Union[PauliString, str]


def _as_pauli(p: PauliLike) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString.from_label(p)


def expectation(s: StateVector, p: PauliLike) -> float:
    psi = s.amplitudes
    val = np.vdot(psi, _as_pauli(p).matrix @ psi)
    if abs(val.imag) > IMAG_TOL:
        raise AssertionError(f"expectation of Hermitian operator has imaginary part {val.imag:.3g}")
    return float(val.real)


def pauli_expectations(psi: np.ndarray, check_imag: bool = True) -> np.ndarray:
    """All 16 Pauli expectations for a batch of amplitude rows.

    ``psi`` has shape (..., 4); the result has shape (..., 16) in
    ``PAULI_LABELS`` order.
    """
    psi = np.asarray(psi, dtype=complex)
    lead = psi.shape[:-1]
    flat = psi.reshape(-1, 4)
    rho = (flat[:, :, None] * flat[:, None, :].conj()).reshape(-1, 16)
    re = rho.real @ _TRACE_FORM_T.real - rho.imag @ _TRACE_FORM_T.imag
    if check_imag and flat.shape[0]:
        im = rho.real @ _TRACE_FORM_T.imag + rho.imag @ _TRACE_FORM_T.real
        if np.abs(im).max() > IMAG_TOL:
            raise AssertionError("Pauli expectations acquired an imaginary part")
    return re.reshape(lead + (16,))


def fidelity(s1: StateVector, s2: StateVector) -> float:
    ov = abs(np.vdot(s1.amplitudes, s2.amplitudes)) ** 2
    return float(min(ov, 1.0))


def same_state(s1: StateVector, s2: StateVector) -> bool:
    return fidelity(s1, s2) > SAME_STATE_FIDELITY


def apply(u: Unitary4, s: StateVector) -> StateVector:
    if not u.is_unitary():
        raise NotUnitary("matrix fails U^dagger U = 1 within 1e-10")
    out = u.entries @ s.amplitudes
    # unitary action keeps the norm to ~1e-15; absorb that drift
    return StateVector(out / np.linalg.norm(out))


def distinct_states(psi: np.ndarray, threshold: float = SAME_STATE_FIDELITY) -> np.ndarray:
    """Greedy deduplication of amplitude rows by fidelity.

    Returns the indices of the kept representatives, in input order.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1, 4)
    keep: list[int] = []
    reps = np.empty((0, 4), dtype=complex)
    for i, row in enumerate(psi):
        if reps.shape[0]:
            ov = np.abs(reps.conj() @ row) ** 2
            if ov.max() > threshold:
                continue
        keep.append(i)
        reps = np.vstack([reps, row])
    return np.array(keep, dtype=int)


def kron(u1: np.ndarray, u2: np.ndarray) -> Unitary4:
    return Unitary4(np.kron(u1, u2))


H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
IDENTITY = np.eye(4, dtype=complex)
