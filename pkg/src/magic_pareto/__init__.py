"""Magic (stabilizer Renyi-2 entropy) versus concurrence for pure two-qubit states."""
from __future__ import annotations

__version__ = "0.1.0"

from .states import (
    PAULI_LABELS,
    PauliString,
    StateVector,
    Unitary4,
    apply,
    expectation,
    fidelity,
    make_state,
)
from .parametrization import (
    Spinor,
    WhartonAngles,
    angles_to_state,
    assemble,
    concurrence_of_angles,
    make_spinor,
)
from .measures import (
    ExpectationTable,
    ZeroPattern,
    concurrence,
    expectation_table,
    m2_analytic,
    m2_direct,
    zero_pattern,
)
from .frontiers import (
    FrontierPoint,
    SpecialPoints,
    f_abc,
    f_ed,
    f_gfe,
    f_ihg,
    gamma_shift,
    m2_max,
    m2_min,
    m2_of_gamma,
    solve_delta_g,
    special_points,
)
from .catalogs import CatalogEntry, catalog, verify_catalog

__all__ = [
    "__version__",
    "PAULI_LABELS", "PauliString", "StateVector", "Unitary4", "apply", "expectation", "fidelity", "make_state",
    "Spinor", "WhartonAngles", "angles_to_state", "assemble", "concurrence_of_angles", "make_spinor",
    "ExpectationTable", "ZeroPattern", "concurrence", "expectation_table", "m2_analytic", "m2_direct",
    "zero_pattern",
    "FrontierPoint", "SpecialPoints", "f_abc", "f_ed", "f_gfe", "f_ihg", "gamma_shift", "m2_max", "m2_min",
    "m2_of_gamma", "solve_delta_g", "special_points",
    "CatalogEntry", "catalog", "verify_catalog",
]
