"""Explicit families of extremal states on each Pareto branch.

Each table row is a :class:`RowTemplate`: a set of discrete choices (signs,
the n/m integers, value sets) expanded by Cartesian product, plus optionally
free continuous angles that default to 0 and on which the physical state
must not depend.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence, TextIO

import numpy as np

from .errors import DomainError, VerificationFailure
from .frontiers import BRANCH_FUNCTIONS, DELTA_E, DELTA_G, gamma_shift
from .measures import ZeroPattern, concurrence_batch, m2_from_expectations
from .parametrization import WhartonAngles, angles_to_amplitudes
from .states import SAME_STATE_FIDELITY, StateVector, distinct_states, pauli_expectations

PI = math.pi
ALPHA = math.acos(1 / math.sqrt(3))
DOMAIN_SLACK = 1e-12

QUARTERS = (PI / 4, 3 * PI / 4)
HALVES = (PI / 2, 3 * PI / 2)
ENDS = (0.0, PI)
DIAGONALS = (PI / 4, -PI / 4, 3 * PI / 4, -3 * PI / 4)
SIGNS = (1, -1)
BITS = (0, 1)

Angles5 = tuple[float, float, float, float, float]


@dataclass(frozen=True)
class RowTemplate:
    """One table row.

    ``rule(choice, free, chi)`` returns (theta1, theta2, phi1, phi2, gamma)
    for a dict of discrete choices and a dict of free-angle values.
    """

    branch: str
    row: int
    choices: tuple[tuple[str, tuple], ...]
    rule: Callable[[dict, dict, float], Angles5]
    free: tuple[str, ...] = ()
    case_label: Optional[str] = None
    mnemonic: Optional[str] = None

    @property
    def multiplicity(self) -> int:
        return math.prod(len(vals) for _, vals in self.choices)

    def choice_dicts(self) -> Iterable[dict]:
        names = [name for name, _ in self.choices]
        for combo in itertools.product(*(vals for _, vals in self.choices)):
            yield dict(zip(names, combo))

    def expand(self, chi: float, free_values: Optional[dict] = None) -> list[CatalogEntry]:
        free = {name: 0.0 for name in self.free}
        free.update(free_values or {})
        out = []
        for choice in self.choice_dicts():
            t1, t2, p1, p2, g = self.rule(choice, free, chi)
            angles = WhartonAngles.normalized(t1, p1, t2, p2, chi, g)
            out.append(CatalogEntry(self.branch, self.row, angles, self.case_label, self.mnemonic,
                                    pattern_index=self.row if self.branch != "IHG" or self.case_label else None))
        return out


@dataclass(frozen=True)
class CatalogEntry:
    branch: str
    row: int
    angles: WhartonAngles
    case_label: Optional[str] = None
    mnemonic: Optional[str] = None
    pattern_index: Optional[int] = None

    @property
    def amplitudes(self) -> np.ndarray:
        return angles_to_amplitudes(*self.angles.as_tuple())

    def state(self) -> StateVector:
        return StateVector(self.amplitudes)


@dataclass(frozen=True)
class CatalogReport:
    branch: str
    chi: float
    count_generated: int
    count_distinct: int
    patterns_seen: frozenset = field(default_factory=frozenset)
    frontier_residual_max: float = 0.0

    @property
    def zero_counts(self) -> set[int]:
        return {p.count for p in self.patterns_seen}


def _sgn(k: int) -> int:
    return -1 if k else 1


# ---------------------------------------------------------------- ABC

def _abc(row, mnemonic, choices, rule, free=()):
    return RowTemplate("ABC", row, tuple(choices), rule, tuple(free), None, mnemonic)


_N, _M = ("n", BITS), ("m", BITS)
_S = ("s", SIGNS)
_S1, _S2 = ("s1", SIGNS), ("s2", SIGNS)
_E1, _E2, _EG = ("e1", ENDS), ("e2", ENDS), ("eg", ENDS)

ABC_ROWS: tuple[RowTemplate, ...] = (
    _abc(0, "ss---", [_N, _M, _S],
         lambda c, f, x: (c["n"] * PI, c["m"] * PI, f["phi1"], f["phi2"],
                          _sgn(c["n"]) * f["phi1"] + _sgn(c["m"]) * f["phi2"] + c["s"] * PI / 2),
         ("phi1", "phi2")),
    _abc(1, "csc--", [_M, _S1, _S],
         lambda c, f, x: (PI / 2, c["m"] * PI, c["s1"] * PI / 2, f["phi2"],
                          _sgn(c["m"]) * f["phi2"] + PI / 2 + c["s"] * PI / 2),
         ("phi2",)),
    _abc(2, "ss---", [_N, _M, _S],
         lambda c, f, x: (c["n"] * PI, c["m"] * PI, f["phi1"], f["phi2"],
                          _sgn(c["n"]) * f["phi1"] + _sgn(c["m"]) * f["phi2"] + PI / 2 + c["s"] * PI / 2),
         ("phi1", "phi2")),
    _abc(3, "csc--", [_M, _S1, _S],
         lambda c, f, x: (PI / 2, c["m"] * PI, c["s1"] * PI / 2, f["phi2"],
                          _sgn(c["m"]) * f["phi2"] + c["s"] * PI / 2),
         ("phi2",)),
    _abc(4, "css--", [_M, _E1, _S],
         lambda c, f, x: (PI / 2, c["m"] * PI, c["e1"], f["phi2"],
                          _sgn(c["m"]) * f["phi2"] + PI / 2 + c["s"] * PI / 2),
         ("phi2",)),
    _abc(5, "css--", [_M, _E1, _S],
         lambda c, f, x: (PI / 2, c["m"] * PI, c["e1"], f["phi2"],
                          _sgn(c["m"]) * f["phi2"] + c["s"] * PI / 2),
         ("phi2",)),
    _abc(6, "sc-c-", [_N, _S2, _S],
         lambda c, f, x: (c["n"] * PI, PI / 2, f["phi1"], c["s2"] * PI / 2,
                          _sgn(c["n"]) * f["phi1"] + PI / 2 + c["s"] * PI / 2),
         ("phi1",)),
    _abc(7, "ccccc", [_S1, _S2, _S],
         lambda c, f, x: (PI / 2, PI / 2, c["s1"] * PI / 2, c["s2"] * PI / 2, c["s"] * PI / 2)),
    _abc(8, "sc-c-", [_N, _S2, _S],
         lambda c, f, x: (c["n"] * PI, PI / 2, f["phi1"], c["s2"] * PI / 2,
                          _sgn(c["n"]) * f["phi1"] + c["s"] * PI / 2),
         ("phi1",)),
    _abc(9, "ccccs", [_S1, _S2, _EG],
         lambda c, f, x: (PI / 2, PI / 2, c["s1"] * PI / 2, c["s2"] * PI / 2, c["eg"])),
    _abc(10, "ccscc", [_E1, _S2, _S],
         lambda c, f, x: (PI / 2, PI / 2, c["e1"], c["s2"] * PI / 2, c["s"] * PI / 2)),
    _abc(11, "ccscs", [_E1, _S2, _EG],
         lambda c, f, x: (PI / 2, PI / 2, c["e1"], c["s2"] * PI / 2, c["eg"])),
    _abc(12, "sc-s-", [_N, _E2, _S],
         lambda c, f, x: (c["n"] * PI, PI / 2, f["phi1"], c["e2"],
                          _sgn(c["n"]) * f["phi1"] + PI / 2 + c["s"] * PI / 2),
         ("phi1",)),
    _abc(13, "cccsc", [_S1, _E2, _S],
         lambda c, f, x: (PI / 2, PI / 2, c["s1"] * PI / 2, c["e2"], c["s"] * PI / 2)),
    _abc(14, "sc-s-", [_N, _E2, _S],
         lambda c, f, x: (c["n"] * PI, PI / 2, f["phi1"], c["e2"],
                          _sgn(c["n"]) * f["phi1"] + c["s"] * PI / 2),
         ("phi1",)),
    _abc(15, "cccss", [_S1, _E2, _EG],
         lambda c, f, x: (PI / 2, PI / 2, c["s1"] * PI / 2, c["e2"], c["eg"])),
    _abc(16, "ccssc", [_E1, _E2, _S],
         lambda c, f, x: (PI / 2, PI / 2, c["e1"], c["e2"], c["s"] * PI / 2)),
    _abc(17, "ccsss", [_E1, _E2, _EG],
         lambda c, f, x: (PI / 2, PI / 2, c["e1"], c["e2"], c["eg"])),
)


# ------------------------------------------------------- GFE / ED

# (theta1, theta2, phi1, phi2, nominal gamma) value sets per row
_GFE_SETS: tuple[tuple[tuple, tuple, tuple, tuple, tuple], ...] = (
    (QUARTERS, QUARTERS, HALVES, HALVES, HALVES),
    (QUARTERS, QUARTERS, ENDS, HALVES, HALVES),
    ((PI / 2,), QUARTERS, DIAGONALS, HALVES, ENDS),
    (QUARTERS, QUARTERS, HALVES, ENDS, HALVES),
    (QUARTERS, QUARTERS, ENDS, ENDS, HALVES),
    ((PI / 2,), QUARTERS, DIAGONALS, ENDS, ENDS),
    (QUARTERS, (PI / 2,), HALVES, DIAGONALS, ENDS),
    (QUARTERS, (PI / 2,), ENDS, DIAGONALS, ENDS),
    ((PI / 2,), (PI / 2,), DIAGONALS, DIAGONALS, HALVES),
)
GFE_CODES = ("--ccc", "--scc", "c--cs", "--csc", "--ssc", "c--ss", "-cc-s", "-cs-s", "cc--c")


def _product_row(branch, row, sets, shifted: bool, code=None):
    t1s, t2s, p1s, p2s, gs = sets
    choices = [("theta1", t1s), ("theta2", t2s), ("phi1", p1s), ("phi2", p2s), ("gamma", gs)]
    if shifted:
        choices.append(("shift", SIGNS))

        def rule(c, f, chi):
            return (c["theta1"], c["theta2"], c["phi1"], c["phi2"],
                    c["gamma"] + c["shift"] * gamma_shift(_clip_ed(math.sin(chi))))
    else:
        def rule(c, f, chi):
            return (c["theta1"], c["theta2"], c["phi1"], c["phi2"], c["gamma"])
    return RowTemplate(branch, row, tuple(choices), rule, (), None, code)


def _clip_ed(delta: float) -> float:
    return min(max(delta, DELTA_E), 1.0)


GFE_ROWS = tuple(_product_row("GFE", i, s, False, GFE_CODES[i]) for i, s in enumerate(_GFE_SETS))
ED_ROWS = tuple(_product_row("ED", i, s, True) for i, s in enumerate(_GFE_SETS))


# ----------------------------------------------------------- IHG

_GAMMA_SAME = (PI / 3, PI, 5 * PI / 3)
_GAMMA_OPPOSITE = (0.0, 2 * PI / 3, 4 * PI / 3)
IHG_COMPACT_SETS = (
    ((ALPHA,), (ALPHA,), DIAGONALS, DIAGONALS, _GAMMA_SAME),
    ((PI - ALPHA,), (PI - ALPHA,), DIAGONALS, DIAGONALS, _GAMMA_SAME),
    ((ALPHA,), (PI - ALPHA,), DIAGONALS, DIAGONALS, _GAMMA_OPPOSITE),
    ((PI - ALPHA,), (ALPHA,), DIAGONALS, DIAGONALS, _GAMMA_OPPOSITE),
)
IHG_COMPACT_ROWS = tuple(_product_row("IHG", i, s, False) for i, s in enumerate(IHG_COMPACT_SETS))


def _tan_positive(phi: float) -> bool:
    """True for phi in {pi/4, 5pi/4} modulo 2pi."""
    return math.sin(2 * phi) > 0


# theta1 of each case; theta2 follows from the lettered variant
_LETTER_THETAS = {"a": (ALPHA, ALPHA), "b": (PI - ALPHA, PI - ALPHA), "c": (ALPHA, PI - ALPHA),
                  "d": (PI - ALPHA, ALPHA)}
_PARALLEL, _PERP = "parallel", "perp"


def _fixed_case(row, letter, phi_relation, gamma_if_tan_pos, gamma_if_tan_neg):
    t1, t2 = _LETTER_THETAS[letter]
    if phi_relation == _PARALLEL:
        phi_choice = ("dphi", (0.0, PI))
    else:
        phi_choice = ("dphi", (PI / 2, -PI / 2))

    def rule(c, f, chi):
        g = gamma_if_tan_pos if _tan_positive(c["phi1"]) else gamma_if_tan_neg
        return (t1, t2, c["phi1"], c["phi1"] + c["dphi"], g)

    return RowTemplate("IHG", row, (("phi1", DIAGONALS), phi_choice), rule, (), f"{row}{letter}")


def _paired_case(row, letter, same_theta: bool, phi_relation, gamma):
    phi_choice = ("dphi", (0.0, PI)) if phi_relation == _PARALLEL else ("dphi", (PI / 2, -PI / 2))

    def rule(c, f, chi):
        t1 = c["theta1"]
        return (t1, t1 if same_theta else PI - t1, c["phi1"], c["phi1"] + c["dphi"], gamma)

    return RowTemplate("IHG", row, (("theta1", (ALPHA, PI - ALPHA)), ("phi1", DIAGONALS), phi_choice),
                       rule, (), f"{row}{letter}")


_P3, _5P3, _2P3, _4P3 = PI / 3, 5 * PI / 3, 2 * PI / 3, 4 * PI / 3

IHG_CASE_ROWS: tuple[RowTemplate, ...] = (
    _paired_case(0, "a", True, _PERP, PI),
    _paired_case(0, "b", False, _PARALLEL, 0.0),
    _fixed_case(1, "a", _PARALLEL, _5P3, _P3),
    _fixed_case(1, "b", _PARALLEL, _P3, _5P3),
    _fixed_case(1, "c", _PERP, _2P3, _4P3),
    _fixed_case(1, "d", _PERP, _4P3, _2P3),
    _paired_case(2, "a", True, _PARALLEL, PI),
    _paired_case(2, "b", False, _PERP, 0.0),
    _fixed_case(3, "a", _PERP, _5P3, _P3),
    _fixed_case(3, "b", _PERP, _P3, _5P3),
    _fixed_case(3, "c", _PARALLEL, _2P3, _4P3),
    _fixed_case(3, "d", _PARALLEL, _4P3, _2P3),
    _fixed_case(4, "a", _PERP, _P3, _5P3),
    _fixed_case(4, "b", _PERP, _5P3, _P3),
    _fixed_case(4, "c", _PARALLEL, _4P3, _2P3),
    _fixed_case(4, "d", _PARALLEL, _2P3, _4P3),
    _fixed_case(5, "a", _PARALLEL, _P3, _5P3),
    _fixed_case(5, "b", _PARALLEL, _5P3, _P3),
    _fixed_case(5, "c", _PERP, _4P3, _2P3),
    _fixed_case(5, "d", _PERP, _2P3, _4P3),
)


# ------------------------------------------------------------------ generation

def _check_sin_chi(chi: float, lo: float, hi: float, name: str) -> None:
    if not 0.0 <= chi <= PI / 2:
        raise DomainError(f"chi={chi} outside [0, pi/2]")
    d = math.sin(chi)
    if not lo - DOMAIN_SLACK <= d <= hi + DOMAIN_SLACK:
        raise DomainError(f"sin(chi)={d:.12g} outside the {name} domain [{lo:.12g}, {hi:.12g}]")


def _expand(rows: Sequence[RowTemplate], chi: float) -> list[CatalogEntry]:
    return [entry for row in rows for entry in row.expand(chi)]


def abc_catalog(chi: float) -> list[CatalogEntry]:
    if not 0.0 < chi < PI / 2:
        raise DomainError(f"ABC catalog needs chi in the open interval (0, pi/2), got {chi}")
    return _expand(ABC_ROWS, chi)


def gfe_catalog(chi: float) -> list[CatalogEntry]:
    _check_sin_chi(chi, DELTA_G, DELTA_E, "GFE")
    return _expand(GFE_ROWS, chi)


def ed_catalog(chi: float) -> list[CatalogEntry]:
    _check_sin_chi(chi, DELTA_E, 1.0, "ED")
    return _expand(ED_ROWS, chi)


def ihg_case_catalog(chi: float) -> list[CatalogEntry]:
    _check_sin_chi(chi, 0.0, DELTA_G, "IHG")
    return _expand(IHG_CASE_ROWS, chi)


def ihg_catalog(chi: float) -> list[CatalogEntry]:
    """Compact IHG states, each labelled with its lettered case.

    Raises VerificationFailure if the two enumerations disagree as sets
    of physical states.
    """
    _check_sin_chi(chi, 0.0, DELTA_G, "IHG")
    compact = _expand(IHG_COMPACT_ROWS, chi)
    cases = ihg_case_catalog(chi)
    match = match_states(amplitudes_of(compact), amplitudes_of(cases))
    back = match_states(amplitudes_of(cases), amplitudes_of(compact))
    if np.any(match < 0) or np.any(back < 0):
        raise VerificationFailure(
            f"IHG compact and per-case enumerations differ at chi={chi}: "
            f"{int(np.sum(match < 0))} compact and {int(np.sum(back < 0))} case states unmatched")
    return [replace(e, case_label=cases[j].case_label, pattern_index=cases[j].row)
            for e, j in zip(compact, match)]


CATALOG_BUILDERS: dict[str, Callable[[float], list[CatalogEntry]]] = {
    "ABC": abc_catalog, "IHG": ihg_catalog, "GFE": gfe_catalog, "ED": ed_catalog,
}
ROW_TEMPLATES = {"ABC": ABC_ROWS, "IHG": IHG_COMPACT_ROWS, "GFE": GFE_ROWS, "ED": ED_ROWS}


def catalog(branch: str, chi: float) -> list[CatalogEntry]:
    try:
        builder = CATALOG_BUILDERS[branch]
    except KeyError:
        raise ValueError(f"unknown branch {branch!r}; choose from {sorted(CATALOG_BUILDERS)}") from None
    return builder(chi)


# ---------------------------------------------------------------- verification

def amplitudes_of(entries: Sequence[CatalogEntry]) -> np.ndarray:
    if not entries:
        return np.empty((0, 4), dtype=complex)
    cols = np.array([e.angles.as_tuple() for e in entries]).T
    return angles_to_amplitudes(*cols)


def match_states(psi: np.ndarray, ref: np.ndarray, threshold: float = SAME_STATE_FIDELITY) -> np.ndarray:
    """Index into ``ref`` of the same physical state for each row of ``psi``, or -1."""
    if len(psi) == 0:
        return np.empty(0, dtype=int)
    if len(ref) == 0:
        return np.full(len(psi), -1)
    ov = np.abs(psi.conj() @ ref.T) ** 2
    best = ov.argmax(axis=1)
    return np.where(ov[np.arange(len(psi)), best] > threshold, best, -1)


def count_distinct(psi: np.ndarray) -> int:
    return len(distinct_states(psi))


def patterns_of(psi: np.ndarray, tol: float = 1e-9) -> list[ZeroPattern]:
    vals = pauli_expectations(psi)
    return [ZeroPattern(tuple(bool(z) for z in row), tol) for row in np.abs(vals) < tol]


def verify_catalog(branch: str, chi: float) -> CatalogReport:
    entries = catalog(branch, chi)
    psi = amplitudes_of(entries)
    delta_err = np.abs(concurrence_batch(psi) - math.sin(chi))
    if len(psi) and delta_err.max() > 1e-9:
        raise VerificationFailure(f"{branch} catalog at chi={chi}: concurrence off by {delta_err.max():.3g}")
    m2 = m2_from_expectations(pauli_expectations(psi))
    target = BRANCH_FUNCTIONS[branch](min(math.sin(chi), 1.0))
    return CatalogReport(
        branch=branch,
        chi=chi,
        count_generated=len(entries),
        count_distinct=count_distinct(psi),
        patterns_seen=frozenset(patterns_of(psi)),
        frontier_residual_max=float(np.max(np.abs(m2 - target))) if len(m2) else 0.0,
    )


def free_angle_collapse_check(row: RowTemplate, samples: int, rng: Optional[np.random.Generator] = None,
                              chi: float = 0.7) -> bool:
    """True iff the row's states do not depend on its free angles.

    For each random draw of the free angles, every discrete choice must
    reproduce the canonical (free angles = 0) state for the same choice.
    """
    if not row.free:
        raise ValueError(f"row {row.branch}/{row.row} has no free angle")
    rng = rng if rng is not None else np.random.default_rng(0)
    canonical = amplitudes_of(row.expand(chi))
    for _ in range(samples):
        free = {name: float(rng.uniform(0, 2 * PI)) for name in row.free}
        psi = amplitudes_of(row.expand(chi, free))
        fid = np.abs(np.sum(psi.conj() * canonical, axis=1)) ** 2
        if np.any(fid <= SAME_STATE_FIDELITY):
            return False
    return True


# ------------------------------------------------------------------ CSV export

CATALOG_COLUMNS = ("branch", "row", "case_label", "theta1", "theta2", "phi1", "phi2", "chi", "gamma",
                   "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d", "im_d", "delta", "m2")


def fmt(x: Optional[float]) -> str:
    return "" if x is None else format(float(x), ".17g")


def state_rows(psi: np.ndarray, entries: Sequence[Optional[CatalogEntry]]) -> list[list[str]]:
    """Catalog-format rows for amplitude rows, with angles from the matched entry if any."""
    psi = np.asarray(psi, dtype=complex).reshape(-1, 4)
    m2 = m2_from_expectations(pauli_expectations(psi))
    delta = concurrence_batch(psi)
    rows = []
    for e, amps, d, m in zip(entries, psi, delta, m2):
        if e is None:
            head = ["", "", ""] + [""] * 6
        else:
            w = e.angles
            head = [e.branch, str(e.row), e.case_label or "",
                    fmt(w.theta1), fmt(w.theta2), fmt(w.phi1), fmt(w.phi2), fmt(w.chi), fmt(w.gamma)]
        rows.append(head + [fmt(v) for z in amps for v in (z.real, z.imag)] + [fmt(d), fmt(m)])
    return rows


def catalog_rows(entries: Sequence[CatalogEntry]) -> list[list[str]]:
    return state_rows(amplitudes_of(entries), entries)


def write_rows_csv(rows: Sequence[Sequence[str]], fh: TextIO, header: Sequence[str] = ()) -> None:
    for line in header:
        fh.write(f"# {line}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CATALOG_COLUMNS)
    w.writerows(rows)


def write_catalog_csv(entries: Sequence[CatalogEntry], fh: TextIO, header: Sequence[str] = ()) -> None:
    write_rows_csv(catalog_rows(entries), fh, header)
