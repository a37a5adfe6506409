"""Two-qubit Clifford group modulo global phase, and orbits of states under it."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ClosureOverflow
from ..measures import concurrence_batch
from ..states import CNOT, PAULI_INDEX, PAULI_MATRICES, H, S, StateVector, Unitary4, distinct_states

CLIFFORD_ORDER = 11520
MAX_ELEMENTS = 20000

GENERATORS = {
    "HI": np.kron(H, np.eye(2)),
    "IH": np.kron(np.eye(2), H),
    "SI": np.kron(S, np.eye(2)),
    "IS": np.kron(np.eye(2), S),
    "CNOT": CNOT,
}
_KEY_PAULIS = PAULI_MATRICES[[PAULI_INDEX[lab] for lab in ("XI", "ZI", "IX", "IZ")]]


def conjugation_images(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Images of XI, ZI, IX, IZ under P -> U P U^dagger.

    ``u`` has shape (..., 4, 4).  Returns (index, sign) arrays of shape
    (..., 4): the image of each generator is sign * PAULI_MATRICES[index].
    Raises ValueError if some image is not a signed Pauli string.
    """
    u = np.asarray(u)
    conj = u[..., None, :, :] @ _KEY_PAULIS @ np.conj(np.swapaxes(u, -1, -2))[..., None, :, :]
    # Hilbert-Schmidt coefficients tr(P_q M) / 4
    coef = np.einsum("qji,...kij->...kq", PAULI_MATRICES, conj) / 4
    idx = np.abs(coef).argmax(axis=-1)
    top = np.take_along_axis(coef, idx[..., None], axis=-1)[..., 0]
    if np.any(np.abs(np.abs(top) - 1) > 1e-8) or np.any(np.abs(top.imag) > 1e-8):
        raise ValueError("unitary does not map Pauli generators to signed Pauli strings")
    return idx, np.where(top.real > 0, 1, -1)


def canonical_keys(u: np.ndarray) -> np.ndarray:
    """Phase-insensitive integer key from the signed images of the four generators."""
    idx, sign = conjugation_images(u)
    digits = 2 * idx + (sign < 0)
    weights = 32 ** np.arange(4)
    return digits @ weights


@dataclass(frozen=True, eq=False)
class CliffordGroup:
    matrices: np.ndarray
    keys: np.ndarray

    def __len__(self):
        return len(self.matrices)

    @property
    def elements(self) -> list[Unitary4]:
        return [Unitary4(m) for m in self.matrices]

    def index_of(self, u: np.ndarray) -> int:
        key = int(canonical_keys(np.asarray(u)[None])[0])
        hits = np.flatnonzero(self.keys == key)
        return int(hits[0]) if len(hits) else -1


@lru_cache(maxsize=1)
def build_clifford_group() -> CliffordGroup:
    gens = np.array(list(GENERATORS.values()))
    mats = [np.eye(4, dtype=complex)[None]]
    seen = {int(canonical_keys(mats[0])[0])}
    frontier = mats[0]
    while len(frontier):
        cand = (gens[:, None] @ frontier[None]).reshape(-1, 4, 4)
        keys = canonical_keys(cand)
        fresh = []
        for i, k in enumerate(keys.tolist()):
            if k not in seen:
                seen.add(k)
                fresh.append(i)
        frontier = cand[fresh]
        mats.append(frontier)
        if len(seen) > MAX_ELEMENTS:
            raise ClosureOverflow(f"closure exceeded {MAX_ELEMENTS} elements")
    matrices = np.concatenate(mats)
    matrices.setflags(write=False)
    return CliffordGroup(matrices, canonical_keys(matrices))


def orbit_amplitudes(psi: np.ndarray, g: CliffordGroup, same_concurrence: bool = False,
                     tol: float = 1e-9) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    images = g.matrices @ psi
    if same_concurrence:
        images = images[np.abs(concurrence_batch(images) - concurrence_batch(psi)) < tol]
    return images[distinct_states(images)]


def clifford_orbit(s: StateVector, g: CliffordGroup, same_concurrence: bool = False) -> list[StateVector]:
    """Distinct physical states U|s> over the group.

    CNOT changes entanglement, so the full orbit spans several concurrence
    values; ``same_concurrence`` keeps only the slice at the seed's value.
    """
    out = orbit_amplitudes(s.amplitudes, g, same_concurrence)
    return [StateVector(row / np.linalg.norm(row)) for row in out]
